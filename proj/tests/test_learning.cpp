// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <functional>
#include <random>

#include "awse/corpus.hpp"
#include "awse/learning/features.hpp"
#include "awse/learning/graph.hpp"
#include "awse/learning/losses.hpp"
#include "awse/learning/serialize.hpp"
#include "awse/learning/train.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace awse;
using namespace awse::learning;

namespace {

PipelineConfig tiny_config() {
  PipelineConfig c;
  c.geometry = SwitchGeometry(8, 4);
  c.context_radius = 1;
  return c;
}

ModelSet tiny_models(const Pipeline& p, int hidden, std::uint64_t seed) {
  ModelSet m;
  for (int j = 0; j < 4; ++j)
    m.masks[static_cast<std::size_t>(j)] =
        make_mlp({p.feature_dim(), hidden, static_cast<int>(p.hop())}, OutputActivation::Sigmoid, seed + j);
  m.gate = make_mlp({p.feature_dim(), hidden, 2}, OutputActivation::Linear, seed + 10);
  for (auto& w : m.gate.weights) w *= 0.5;
  return m;
}

PreparedUtterance tiny_utterance(const Pipeline& p, Eigen::Index n, std::uint64_t seed) {
  const Signal clean = testing::random_signal(n, seed);
  Signal noisy = clean;
  noisy.samples += 0.7 * testing::random_signal(n, seed + 1).samples;
  return p.prepare(noisy, &clean);
}

// Visits every scalar parameter of every network.
void for_each_parameter(ModelSet& m, ModelGradients& g, const std::function<void(double&, double, const char*)>& fn) {
  const auto visit = [&](Mlp& net, MlpGradients& grad, const char* name) {
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      for (Eigen::Index i = 0; i < net.weights[l].size(); ++i) fn(net.weights[l].data()[i], grad.weights[l].data()[i], name);
      for (Eigen::Index i = 0; i < net.biases[l].size(); ++i) fn(net.biases[l].data()[i], grad.biases[l].data()[i], name);
    }
  };
  const char* names[4] = {"mask long", "mask start", "mask short", "mask stop"};
  for (std::size_t j = 0; j < 4; ++j) visit(m.masks[j], g.masks[j], names[j]);
  visit(m.gate, g.gate, "gate");
}

}  // namespace

TEST_CASE("context extraction") {
  Mat f(2, 3);
  f << 1, 2, 3,
       4, 5, 6;
  CHECK(extract_context(f, 0) == f);
  const Mat c = extract_context(f, 5);
  REQUIRE(c.rows() == 22);
  REQUIRE(c.cols() == 3);
  for (Eigen::Index t = 0; t < 3; ++t) {
    int zeros = 0;
    for (Eigen::Index slot = 0; slot < 11; ++slot) zeros += c.block(slot * 2, t, 2, 1).isZero(0);
    CHECK(zeros >= 8);
    CHECK(c.block(10, t, 2, 1) == f.col(t));
  }
  const Mat one = extract_context(f, 1);
  CHECK(one.col(1) == (Vec(6) << 1, 4, 2, 5, 3, 6).finished());
  CHECK(one.col(0).head(2).isZero(0));
  CHECK_THROWS(extract_context(f, -1));
}

TEST_CASE("network forward pass") {
  Mlp zero = make_mlp({3, 5, 4}, OutputActivation::Sigmoid, 1);
  for (auto& w : zero.weights) w.setZero();
  for (auto& b : zero.biases) b.setZero();
  CHECK((forward(zero, Mat::Random(3, 7)).array() == 0.5).all());

  Mlp lin = make_mlp({2, 2}, OutputActivation::Linear, 1);
  lin.weights[0] << 1, 2,
                    3, 4;
  lin.biases[0] << 0.5, -1;
  CHECK(forward(lin, Mat::Ones(2, 1)) == (Mat(2, 1) << 3.5, 6).finished());

  Mlp two = make_mlp({2, 2, 1}, OutputActivation::Linear, 1);
  two.weights[0] << 1, -1,
                    -2, 1;
  two.biases[0] << 0, 0;
  two.weights[1] << 2, 3;
  two.biases[1] << 1;
  two.input_shift = Vec::Constant(2, 1.0);
  two.input_scale = Vec::Constant(2, 2.0);
  // standardized (4, 0) -> hidden relu(4, -8) = (4, 0) -> 2*4 + 1.
  CHECK(forward(two, (Mat(2, 1) << 3, 1).finished())(0, 0) == 9.0);

  const Mlp mask = make_mlp({6, 8, 4}, OutputActivation::Sigmoid, 3);
  const Mat out = forward(mask, 5.0 * Mat::Random(6, 50));
  CHECK(out.minCoeff() > 0.0);
  CHECK(out.maxCoeff() < 1.0);
  CHECK_THROWS_WITH(forward(mask, Mat::Zero(5, 2)), doctest::Contains("input has 5"));
  CHECK_THROWS(make_mlp({4}, OutputActivation::Linear, 1));
}

TEST_CASE("loss values") {
  Mat s(2, 2), e(2, 2);
  s << 0, 0,
       0, 0;
  e << 0.5, 1,
       -0.5, -2;
  CHECK(loss_wa(s, e) == 2.0);
  CHECK(loss_wa(e, e) == 0.0);
  CHECK_THROWS(loss_wa(s, Mat::Zero(2, 3)));

  CHECK(oracle_action_distribution(2.0, 2.0, OracleMode::Direct) == std::pair{0.5, 0.5});
  CHECK(oracle_action_distribution(2.0, 2.0, OracleMode::Complement) == std::pair{0.5, 0.5});
  CHECK(oracle_action_distribution(3.0, 1.0, OracleMode::Direct).first == 0.75);
  CHECK(oracle_action_distribution(3.0, 1.0, OracleMode::Complement).first == 0.25);
  CHECK(oracle_action_distribution(0.0, 0.0, OracleMode::Direct) == std::pair{0.5, 0.5});
  CHECK_THROWS(oracle_action_distribution(-1.0, 1.0, OracleMode::Direct));
  CHECK(parse_oracle_mode("complement") == OracleMode::Complement);
  CHECK_THROWS(parse_oracle_mode("inverted"));

  const Mat p = (Mat(2, 1) << 1.0, 0.0).finished();
  const Mat q = (Mat(2, 1) << 0.5, 0.5).finished();
  CHECK(loss_aws(p, q) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(loss_aws(q, q) == 0.0);
  CHECK(loss_aws(p, (Mat(2, 1) << 0.0, 1.0).finished()) == doctest::Approx(-std::log(1e-12)).epsilon(1e-12));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng), b = u(rng);
    CHECK(loss_aws((Mat(2, 1) << a, 1 - a).finished(), (Mat(2, 1) << b, 1 - b).finished()) >= 0.0);
  }
  CHECK(loss_combined(2.0, 1.0, 0.1) == doctest::Approx(2.1).epsilon(1e-15));
  CHECK(loss_combined(2.0, 1.0, 0.0) == 2.0);
  CHECK(loss_combined(2.0, 1.0) == doctest::Approx(2.1).epsilon(1e-15));
  CHECK(kDefaultLambda == 0.1);
}

TEST_CASE("analytic gradients match central differences") {
  const Pipeline p(tiny_config());
  REQUIRE(p.feature_dim() == 12);
  ModelSet m = tiny_models(p, 8, 5);
  PreparedUtterance utt = tiny_utterance(p, 60, 9);
  assign_oracle_targets(p, m, utt, OracleMode::Direct);

  std::mt19937_64 rng(31);
  Mat gumbel(2, utt.analysis_frames());
  for (Eigen::Index i = 0; i < gumbel.size(); ++i) gumbel.data()[i] = sample_gumbel<double>(rng);
  ForwardSpec spec;
  spec.gumbel = gumbel;
  spec.tau = 1.0;
  spec.lambda = 0.1;
  spec.include_wa = true;
  spec.include_aws = true;

  ModelGradients grads = ModelGradients::zeros_like(m);
  const auto base = evaluate(p, m, utt, spec, &grads);
  CHECK(base.loss.total == doctest::Approx(base.loss.wa + 0.1 * base.loss.aws).epsilon(1e-14));
  CHECK(base.states.row(2).maxCoeff() > 0.05);

  const double h = 1e-5;
  double worst = 0.0;
  std::size_t count = 0, nonzero = 0;
  ModelSet probe = m;
  auto g = grads;
  for_each_parameter(probe, g, [&](double& theta, double analytic, const char* name) {
    const double keep = theta;
    theta = keep + h;
    const double up = evaluate(p, probe, utt, spec).loss.total;
    theta = keep - h;
    const double down = evaluate(p, probe, utt, spec).loss.total;
    theta = keep;
    const double numeric = (up - down) / (2 * h);
    const double rel = std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    if (rel > 1e-4) FAIL_CHECK(name << ": analytic " << analytic << " numeric " << numeric);
    worst = std::max(worst, rel);
    ++count;
    nonzero += analytic != 0.0;
  });
  MESSAGE("parameters " << count << ", nonzero " << nonzero << ", worst relative error " << worst);
  CHECK(count == 4 * (12 * 8 + 8 + 8 * 4 + 4) + (12 * 8 + 8 + 8 * 2 + 2));
  CHECK(nonzero > count / 2);
  CHECK(worst <= 1e-4);
}

TEST_CASE("mask gradients vanish at the all-ones fixed point") {
  const Pipeline p(tiny_config());
  ModelSet m = tiny_models(p, 8, 2);
  for (auto& net : m.masks) net.biases.back().setConstant(40.0);
  const Signal x = testing::random_signal(50, 3);
  const PreparedUtterance utt = p.prepare(x, &x);
  for (auto kind : {WindowKind::Long, WindowKind::Short}) {
    ForwardSpec spec;
    spec.fixed_states = kind == WindowKind::Long ? constant_states(WindowKind::Long, utt.analysis_frames())
                                                 : cyclic_states(utt.analysis_frames(), 1);
    ModelGradients grads = ModelGradients::zeros_like(m);
    const auto res = evaluate(p, m, utt, spec, &grads);
    CHECK(res.loss.wa < 1e-10);
    for (const auto& g : grads.masks) {
      for (const auto& w : g.weights) CHECK(w.cwiseAbs().maxCoeff() <= 1e-10);
      for (const auto& b : g.biases) CHECK(b.cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("the window loss does not reach the mask networks") {
  const Pipeline p(tiny_config());
  ModelSet m = tiny_models(p, 8, 4);
  PreparedUtterance utt = tiny_utterance(p, 80, 5);
  assign_oracle_targets(p, m, utt, OracleMode::Direct);
  ForwardSpec spec;
  spec.include_wa = false;
  spec.include_aws = true;
  spec.fixed_states = constant_states(WindowKind::Long, utt.analysis_frames());
  ModelGradients grads = ModelGradients::zeros_like(m);
  const auto res = evaluate(p, m, utt, spec, &grads);
  CHECK(res.loss.aws >= 0.0);
  for (const auto& g : grads.masks)
    for (const auto& w : g.weights) CHECK(w.isZero(0));
  bool gate_moves = false;
  for (const auto& w : grads.gate.weights) gate_moves = gate_moves || !w.isZero(0);
  CHECK(gate_moves);

  ModelSet other = m;
  for (auto& net : other.masks) net.weights[0] *= -3.0;
  CHECK(evaluate(p, other, utt, spec).loss.aws == res.loss.aws);
  CHECK_THROWS(evaluate(p, m, p.prepare(testing::random_signal(80, 1)), spec));
}

TEST_CASE("oracle targets and gate agreement") {
  const Pipeline p(tiny_config());
  const ModelSet m = tiny_models(p, 8, 6);
  PreparedUtterance utt = tiny_utterance(p, 100, 7);
  assign_oracle_targets(p, m, utt, OracleMode::Direct);
  REQUIRE(utt.oracle_p.cols() == utt.frames - 1);
  const Vec e_long = frame_errors(p, m, utt, constant_states(WindowKind::Long, utt.analysis_frames()));
  CHECK((utt.oracle_p.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-15);
  CHECK(e_long.size() == utt.frames);
  PreparedUtterance flipped = utt;
  assign_oracle_targets(p, m, flipped, OracleMode::Complement);
  CHECK((flipped.oracle_p.row(0) - utt.oracle_p.row(1)).cwiseAbs().maxCoeff() < 1e-15);
  const double a = gate_agreement(m, {utt});
  const double b = gate_agreement(m, {flipped});
  CHECK(a >= 0.0);
  CHECK(a <= 1.0);
  CHECK(gate_probabilities(m, utt).cols() == utt.oracle_p.cols());
  // A near-tie label may flip either way; the rest swap.
  CHECK(a + b == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("model records round-trip bit-exactly") {
  const Pipeline p(tiny_config());
  ModelRecord rec;
  rec.pipeline = tiny_config();
  rec.tau = 0.37;
  rec.lambda = 0.1;
  rec.seed = 123456789012345ull;
  rec.oracle_mode = OracleMode::Complement;
  rec.models = tiny_models(p, 8, 11);
  rec.models.masks[2].input_shift = Vec::Random(12) / 3.0;
  rec.models.masks[2].input_scale = Vec::Random(12).cwiseAbs();
  const std::string path = testing::temp_path("record.json");
  save_model(path, rec);
  const ModelRecord back = load_model(path);
  CHECK(to_text(back) == to_text(rec));
  CHECK(back.tau == rec.tau);
  CHECK(back.seed == rec.seed);
  CHECK(back.oracle_mode == OracleMode::Complement);
  CHECK(back.pipeline.geometry.long_len == 8);
  CHECK(back.pipeline.context_radius == 1);
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t l = 0; l < rec.models.masks[j].weights.size(); ++l) {
      CHECK(back.models.masks[j].weights[l] == rec.models.masks[j].weights[l]);
      CHECK(back.models.masks[j].biases[l] == rec.models.masks[j].biases[l]);
    }
    CHECK(back.models.masks[j].input_shift == rec.models.masks[j].input_shift);
    CHECK(back.models.masks[j].input_scale == rec.models.masks[j].input_scale);
  }
  CHECK(back.models.gate.output == OutputActivation::Linear);
  CHECK_THROWS_WITH(from_text("{\"schema\": \"other/1\"}"), doctest::Contains("schema"));
  CHECK_THROWS_WITH(from_text("not json"), doctest::Contains("model file"));
  CHECK_THROWS(load_model(testing::temp_path("missing_model.json")));
}

TEST_CASE("training is deterministic and records every stage") {
  const Pipeline p(tiny_config());
  SyntheticCorpusConfig cc;
  cc.duration_sec = 0.05;
  cc.seed = 3;
  const auto raw = make_synthetic_corpus(cc, 4);
  const auto prepare = [&] {
    std::vector<PreparedUtterance> corpus;
    for (const auto& u : raw) corpus.push_back(p.prepare(u.noisy, &u.clean));
    return corpus;
  };
  TrainConfig tc;
  tc.hidden_units = 6;
  tc.learning_rate = 1e-2;
  tc.pretrain_epochs = 3;
  tc.gate_epochs = 2;
  tc.finetune_epochs = 2;
  tc.seed = 77;
  auto c1 = prepare(), c2 = prepare();
  const auto r1 = train(p, c1, tc);
  const auto r2 = train(p, c2, tc);
  REQUIRE(r1.history.size() == 7);
  CHECK(history_csv(r1.history) == history_csv(r2.history));
  ModelRecord a, b;
  a.models = r1.models;
  b.models = r2.models;
  CHECK(to_text(a) == to_text(b));
  int stage_counts[4] = {0, 0, 0, 0};
  for (const auto& row : r1.history) {
    ++stage_counts[row.stage];
    CHECK(row.j_wa >= 0.0);
    CHECK(row.j_aws >= 0.0);
    CHECK(row.total >= 0.0);
  }
  CHECK(stage_counts[1] == 3);
  CHECK(stage_counts[2] == 2);
  CHECK(stage_counts[3] == 2);
  CHECK(history_csv(r1.history).rfind("# schema:", 0) == 0);

  tc.seed = 78;
  auto c3 = prepare();
  const auto r3 = train(p, c3, tc);
  CHECK(history_csv(r3.history) != history_csv(r1.history));

  std::vector<PreparedUtterance> empty;
  CHECK_THROWS_WITH(train(p, empty, tc), doctest::Contains("empty corpus"));
}
