// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "awse/learning/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace awse::learning {
namespace {

struct Moments {
  Vec mean;
  Vec inv_std;
};

// Per-feature mean and inverse standard deviation over all frames.
Moments moments(const std::vector<PreparedUtterance>& corpus, bool short_features, int dim) {
  Vec sum = Vec::Zero(dim), sq = Vec::Zero(dim);
  double n = 0.0;
  for (const auto& utt : corpus) {
    const Mat& c = short_features ? utt.short_context : utt.long_context;
    sum += c.rowwise().sum();
    sq += c.array().square().matrix().rowwise().sum();
    n += static_cast<double>(c.cols());
  }
  Moments m{Vec::Zero(dim), Vec::Ones(dim)};
  if (n == 0.0) return m;
  m.mean = sum / n;
  for (int i = 0; i < dim; ++i) {
    const double var = sq(i) / n - m.mean(i) * m.mean(i);
    m.inv_std(i) = var > 1e-12 ? 1.0 / std::sqrt(var) : 1.0;
  }
  return m;
}

std::vector<std::size_t> shuffled(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

void clip(MlpGradients& g, double limit) {
  if (!(limit > 0.0)) return;
  double sq = 0.0;
  for (std::size_t l = 0; l < g.weights.size(); ++l) sq += g.weights[l].squaredNorm() + g.biases[l].squaredNorm();
  const double norm = std::sqrt(sq);
  if (norm <= limit) return;
  const double s = limit / norm;
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    g.weights[l] *= s;
    g.biases[l] *= s;
  }
}

struct Rates {
  double masks;
  double gate;
};

void apply(ModelSet& models, ModelGradients& grads, const GradientSelection& select, Rates rate, double limit) {
  for (std::size_t j = 0; j < 4; ++j) {
    if (!select.masks[j]) continue;
    clip(grads.masks[j], limit);
    sgd_step(models.masks[j], grads.masks[j], rate.masks);
  }
  if (select.gate) {
    clip(grads.gate, limit);
    sgd_step(models.gate, grads.gate, rate.gate);
  }
}

double step(const Pipeline& pipeline, ModelSet& models, const PreparedUtterance& utt, const ForwardSpec& spec,
            const GradientSelection& select, ModelGradients& grads, Rates rate, double limit) {
  grads.set_zero();
  const auto res = evaluate(pipeline, models, utt, spec, &grads, select);
  apply(models, grads, select, rate, limit);
  return res.loss.total;
}

Mat gumbel_noise(Eigen::Index cols, std::mt19937_64& rng) {
  Mat g(2, cols);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = sample_gumbel<double>(rng);
  return g;
}

}  // namespace

ModelSet init_models(const Pipeline& pipeline, const std::vector<PreparedUtterance>& corpus, int hidden_units,
                     std::uint64_t seed, int gate_hidden_units) {
  const int in = pipeline.feature_dim();
  const int out = static_cast<int>(pipeline.hop());
  const Moments long_m = moments(corpus, false, in);
  const Moments short_m = moments(corpus, true, in);
  ModelSet models;
  for (int j = 0; j < 4; ++j) {
    auto& m = models.masks[static_cast<std::size_t>(j)];
    m = make_mlp({in, hidden_units, out}, OutputActivation::Sigmoid, seed + 1 + static_cast<std::uint64_t>(j));
    const Moments& mo = j == index_of(WindowKind::Short) ? short_m : long_m;
    m.input_shift = mo.mean;
    m.input_scale = mo.inv_std;
  }
  models.gate = make_mlp({in, gate_hidden_units > 0 ? gate_hidden_units : hidden_units, 2}, OutputActivation::Linear, seed + 5);
  models.gate.input_shift = long_m.mean;
  models.gate.input_scale = long_m.inv_std;
  return models;
}

TrainResult train(const Pipeline& pipeline, std::vector<PreparedUtterance>& corpus, const TrainConfig& config,
                  const ProgressFn& progress) {
  if (corpus.empty()) throw std::invalid_argument("train: empty corpus");
  for (const auto& utt : corpus)
    if (!utt.has_reference) throw std::invalid_argument("train: every utterance needs a clean reference");

  std::mt19937_64 rng(config.seed);
  TrainResult result;
  result.models = init_models(pipeline, corpus, config.hidden_units, config.seed, config.gate_hidden_units);
  ModelSet& models = result.models;
  ModelGradients grads = ModelGradients::zeros_like(models);
  const Rates rate{config.learning_rate,
                   config.gate_learning_rate > 0.0 ? config.gate_learning_rate : config.learning_rate};
  const double limit = config.grad_clip;
  const auto n = static_cast<double>(corpus.size());
  const auto report = [&](const HistoryRow& row) {
    result.history.push_back(row);
    if (progress) progress(row);
  };

  // Stage 1: long and short masks on their fixed windows, then the transition
  // masks on the periodic long/start/short/stop sequence.
  const auto long_only = GradientSelection::only_masks({WindowKind::Long});
  const auto short_only = GradientSelection::only_masks({WindowKind::Short});
  const auto transitions = GradientSelection::only_masks({WindowKind::Start, WindowKind::Stop});
  for (int epoch = 0; epoch < config.pretrain_epochs; ++epoch) {
    double sum = 0.0;
    for (std::size_t i : shuffled(corpus.size(), rng)) {
      const auto& utt = corpus[i];
      const Eigen::Index steps = utt.analysis_frames();
      ForwardSpec spec;
      spec.fixed_states = constant_states(WindowKind::Long, steps);
      sum += step(pipeline, models, utt, spec, long_only, grads, rate, limit);
      spec.fixed_states = constant_states(WindowKind::Short, steps);
      sum += step(pipeline, models, utt, spec, short_only, grads, rate, limit);
      spec.fixed_states = cyclic_states(steps, static_cast<int>((static_cast<std::size_t>(epoch) + i) % 4));
      sum += step(pipeline, models, utt, spec, transitions, grads, rate, limit);
    }
    HistoryRow row{1, epoch, sum / (3.0 * n), 0.0, 0.0};
    row.total = row.j_wa;
    report(row);
  }

  // Stage 2: gate on J_AWS against targets from the frozen stage-1 masks.
  for (auto& utt : corpus) assign_oracle_targets(pipeline, models, utt, config.oracle_mode);
  const auto gate_only = GradientSelection::only_gate();
  for (int epoch = 0; epoch < config.gate_epochs; ++epoch) {
    double sum = 0.0;
    for (std::size_t i : shuffled(corpus.size(), rng)) {
      ForwardSpec spec;
      spec.include_wa = false;
      spec.include_aws = true;
      spec.lambda = 1.0;
      sum += step(pipeline, models, corpus[i], spec, gate_only, grads, rate, limit);
    }
    report(HistoryRow{2, epoch, 0.0, sum / n, sum / n});
  }
  result.pretrained = models;

  // Stage 3: everything jointly, relaxed gate with fresh Gumbel noise.
  for (int epoch = 0; epoch < config.finetune_epochs; ++epoch) {
    double wa = 0.0, aws = 0.0;
    for (std::size_t i : shuffled(corpus.size(), rng)) {
      const auto& utt = corpus[i];
      ForwardSpec spec;
      spec.gumbel = gumbel_noise(utt.analysis_frames(), rng);
      spec.tau = config.tau;
      spec.lambda = config.lambda;
      spec.include_aws = true;
      grads.set_zero();
      const auto res = evaluate(pipeline, models, utt, spec, &grads);
      apply(models, grads, GradientSelection{}, rate, config.finetune_grad_clip);
      wa += res.loss.wa;
      aws += res.loss.aws;
    }
    report(HistoryRow{3, epoch, wa / n, aws / n, loss_combined(wa / n, aws / n, config.lambda)});
  }
  return result;
}

CorpusScores score_corpus(const Pipeline& pipeline, const ModelSet& models,
                          const std::vector<PreparedUtterance>& corpus, double lambda) {
  CorpusScores s;
  if (corpus.empty()) return s;
  for (const auto& utt : corpus) {
    const Eigen::Index steps = utt.analysis_frames();
    ForwardSpec fixed;
    fixed.fixed_states = constant_states(WindowKind::Long, steps);
    s.wa_long += evaluate(pipeline, models, utt, fixed).loss.wa;
    fixed.fixed_states = constant_states(WindowKind::Short, steps);
    s.wa_short += evaluate(pipeline, models, utt, fixed).loss.wa;
    ForwardSpec gated;
    gated.include_aws = utt.oracle_p.cols() == std::max<Eigen::Index>(utt.frames - 1, 0);
    gated.lambda = lambda;
    const auto res = evaluate(pipeline, models, utt, gated);
    s.wa_switched += res.loss.wa;
    s.aws += res.loss.aws;
  }
  const auto n = static_cast<double>(corpus.size());
  s.wa_long /= n;
  s.wa_short /= n;
  s.wa_switched /= n;
  s.aws /= n;
  s.combined = loss_combined(s.wa_switched, s.aws, lambda);
  return s;
}

std::string history_csv(const std::vector<HistoryRow>& history) {
  std::ostringstream out;
  out.precision(17);
  out << "# schema: awse.history/1\n";
  out << "stage,epoch,j_wa,j_aws,total\n";
  for (const auto& r : history)
    out << r.stage << ',' << r.epoch << ',' << r.j_wa << ',' << r.j_aws << ',' << r.total << '\n';
  return out.str();
}

}  // namespace awse::learning
