// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "awse/learning/graph.hpp"

#include <stdexcept>

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

namespace awse::learning {
namespace {

// Flush-to-zero and denormals-are-zero for the lifetime of the guard. A sharp
// Gumbel-softmax leaves subnormal state weights that otherwise make every
// matrix product on the synthesis path crawl.
class FlushDenormals {
 public:
#if defined(__SSE2__)
  FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
  ~FlushDenormals() { _mm_setcsr(saved_); }

 private:
  unsigned saved_;
#endif
};

Mat column_softmax(const Mat& logits) {
  Mat out(logits.rows(), logits.cols());
  for (Eigen::Index t = 0; t < logits.cols(); ++t) {
    const Vec e = (logits.col(t).array() - logits.col(t).maxCoeff()).exp();
    out.col(t) = e / e.sum();
  }
  return out;
}

Mat sign_of(const Mat& m) {
  return m.unaryExpr([](double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); });
}

Eigen::Index target_frames(Eigen::Index frames) { return frames > 1 ? frames - 1 : 0; }

}  // namespace

GradientSelection GradientSelection::only_masks(std::initializer_list<WindowKind> kinds) {
  GradientSelection s;
  s.masks.fill(false);
  s.gate = false;
  for (WindowKind k : kinds) s.masks[static_cast<std::size_t>(index_of(k))] = true;
  return s;
}

GradientSelection GradientSelection::only_gate() {
  GradientSelection s;
  s.masks.fill(false);
  return s;
}

Pipeline::Pipeline(const PipelineConfig& config)
    : config_(config),
      bank_(build_analysis_bank<double>(config.geometry)),
      features_(config.geometry, config.amp_floor) {
  if (config.context_radius < 0) throw std::invalid_argument("context radius must be >= 0");
}

int Pipeline::feature_dim() const {
  return static_cast<int>((2 * config_.context_radius + 1) * config_.geometry.hop());
}

PreparedUtterance Pipeline::prepare(const Signal& noisy, const Signal* clean) const {
  const auto seq = frame_signal(noisy.samples, hop());
  PreparedUtterance utt;
  utt.frames = seq.count();
  utt.pad_len = seq.pad_len;
  utt.sample_rate = noisy.sample_rate;
  const Mat pairs = frame_pairs(seq);
  for (int j = 0; j < 4; ++j) utt.streams[static_cast<std::size_t>(j)] = bank_[j] * pairs;
  utt.long_context = extract_context(features_.long_features(seq), config_.context_radius);
  utt.short_context = extract_context(features_.short_features(seq), config_.context_radius);
  if (clean) {
    if (clean->size() != noisy.size()) throw std::invalid_argument("prepare: clean and noisy lengths differ");
    utt.clean_frames = frame_signal(clean->samples, hop()).frames;
    utt.has_reference = true;
  }
  return utt;
}

StateSequence<double> constant_states(WindowKind kind, Eigen::Index count) {
  return states_from_kinds<double>(std::vector<WindowKind>(static_cast<std::size_t>(count), kind));
}

StateSequence<double> cyclic_states(Eigen::Index count, int phase) {
  std::vector<WindowKind> kinds(static_cast<std::size_t>(count));
  for (Eigen::Index t = 0; t < count; ++t) kinds[static_cast<std::size_t>(t)] = kAllKinds[static_cast<std::size_t>((t + phase) % 4)];
  return states_from_kinds<double>(kinds);
}

ForwardResult evaluate(const Pipeline& pipeline, const ModelSet& models, const PreparedUtterance& utt,
                       const ForwardSpec& spec, ModelGradients* grads, const GradientSelection& select) {
  const auto& bank = pipeline.bank();
  const Eigen::Index steps = utt.analysis_frames();
  const Eigen::Index frames = utt.frames;
  const Eigen::Index hop = pipeline.hop();
  if (spec.include_wa && !utt.has_reference) throw std::invalid_argument("evaluate: J_WA needs clean frames");
  if (spec.include_aws && utt.oracle_p.cols() != target_frames(frames))
    throw std::invalid_argument("evaluate: oracle window targets missing or stale");
  if (spec.gumbel && (spec.gumbel->rows() != 2 || spec.gumbel->cols() != steps))
    throw std::invalid_argument("evaluate: Gumbel noise must be 2 x (T + 1)");
  if (!(spec.tau > 0.0)) throw std::invalid_argument("evaluate: tau must be positive");

  const FlushDenormals flush;
  ForwardResult res;
  const bool gated = !spec.fixed_states.has_value();
  const bool need_gate = gated || spec.include_aws;
  const bool gate_grads = grads && select.gate && need_gate;
  const bool relaxed = gated && spec.gumbel.has_value();

  MlpTape gate_tape;
  if (need_gate) {
    res.gate_logits = forward(models.gate, utt.long_context, gate_grads ? &gate_tape : nullptr);
    if (res.gate_logits.rows() != 2) throw std::invalid_argument("evaluate: gate must emit 2 logits");
  }

  // Window states.
  Mat actions;
  const WindowState<double> z0 = one_hot_state<double>(WindowKind::Long);
  if (gated) {
    actions.resize(2, steps);
    res.states.resize(4, steps);
    WindowState<double> z = z0;
    for (Eigen::Index t = 0; t < steps; ++t) {
      ActionVector<double> a;
      if (relaxed) {
        a = gumbel_softmax<double>(res.gate_logits.col(t), spec.tau, spec.gumbel->col(t));
      } else {
        a = one_hot_action<double>(res.gate_logits(1, t) > res.gate_logits(0, t) ? 1 : 0);
      }
      actions.col(t) = a;
      z = step_state<double>(z, a);
      res.states.col(t) = z;
    }
  } else {
    if (spec.fixed_states->cols() != steps) throw std::invalid_argument("evaluate: need T + 1 window states");
    res.states = *spec.fixed_states;
  }

  Mat gate_grad;
  if (gate_grads) gate_grad = Mat::Zero(2, steps);

  const bool need_estimate = spec.include_wa || !spec.include_aws;
  if (need_estimate) {
    std::array<MlpTape, 4> tapes;
    std::array<Mat, 4> halves_j;
    std::array<bool, 4> active{};
    Mat halves = Mat::Zero(2 * hop, steps);
    for (int j = 0; j < 4; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      // A kind that is zero at every frame contributes nothing and gets no gradient.
      active[ju] = relaxed || !res.states.row(j).isZero(0);
      if (!active[ju]) continue;
      const bool record = grads && select.masks[ju];
      res.masks[ju] = forward(models.masks[ju], utt.context(j), record ? &tapes[ju] : nullptr);
      if (res.masks[ju].rows() != hop) throw std::invalid_argument("evaluate: mask model output size mismatch");
      halves_j[ju] = bank[j].transpose() * res.masks[ju].cwiseProduct(utt.streams[ju]);
      halves.noalias() += halves_j[ju] * res.states.row(j).transpose().asDiagonal();
    }
    res.estimate_frames = overlap_add(halves);

    if (spec.include_wa) {
      const Mat residual = res.estimate_frames - utt.clean_frames;
      res.loss.wa = loss_wa(utt.clean_frames, res.estimate_frames);
      if (grads && frames > 0) {
        // d|r|/dr = sign(r), 0 at r = 0.
        const Mat g = sign_of(residual) / static_cast<double>(frames);
        Mat d_halves = Mat::Zero(2 * hop, steps);
        d_halves.bottomLeftCorner(hop, frames) += g;
        d_halves.topRightCorner(hop, frames) += g;

        Mat d_states = Mat::Zero(4, steps);
        for (int j = 0; j < 4; ++j) {
          const auto ju = static_cast<std::size_t>(j);
          if (!active[ju]) continue;
          if (select.masks[ju]) {
            const Mat d_y = d_halves * res.states.row(j).transpose().asDiagonal();
            const Mat d_mask = utt.streams[ju].cwiseProduct(bank[j] * d_y);
            backward(models.masks[ju], tapes[ju], d_mask, grads->masks[ju]);
          }
          if (relaxed && gate_grads) d_states.row(j) = halves_j[ju].cwiseProduct(d_halves).colwise().sum();
        }

        if (relaxed && gate_grads) {
          // Reverse through z_t = (I + a1 Q1 + a2 Q2) z_{t-1} and the Gumbel-softmax.
          const auto q = transition_matrices();
          const Eigen::Matrix4d q1 = q.to_long.cast<double>();
          const Eigen::Matrix4d q2 = q.to_short.cast<double>();
          WindowState<double> carry = WindowState<double>::Zero();
          for (Eigen::Index t = steps - 1; t >= 0; --t) {
            const WindowState<double> g_z = d_states.col(t) + carry;
            const WindowState<double> z_prev = t > 0 ? WindowState<double>(res.states.col(t - 1)) : z0;
            const ActionVector<double> a = actions.col(t);
            ActionVector<double> d_a;
            d_a << g_z.dot(q1 * z_prev), g_z.dot(q2 * z_prev);
            carry = step_matrix<double>(a).transpose() * g_z;
            const ActionVector<double> d_u = a.cwiseProduct(d_a - ActionVector<double>::Constant(a.dot(d_a)));
            gate_grad.col(t) += d_u / spec.tau;
          }
        }
      }
    }
  }

  if (spec.include_aws) {
    const Eigen::Index n = utt.oracle_p.cols();
    const Mat q = column_softmax(res.gate_logits.leftCols(n));
    res.loss.aws = loss_aws(utt.oracle_p, q);
    if (gate_grads && n > 0) {
      const double w = spec.lambda / static_cast<double>(n);
      for (Eigen::Index t = 0; t < n; ++t) {
        ActionVector<double> d_q;
        for (int i = 0; i < 2; ++i)
          d_q[i] = q(i, t) >= kProbabilityFloor ? -utt.oracle_p(i, t) / q(i, t) : 0.0;
        const ActionVector<double> qt = q.col(t);
        gate_grad.col(t) += w * qt.cwiseProduct(d_q - ActionVector<double>::Constant(qt.dot(d_q)));
      }
    }
  }

  if (gate_grads) backward(models.gate, gate_tape, gate_grad, grads->gate);

  res.loss.total = (spec.include_wa ? res.loss.wa : 0.0) + (spec.include_aws ? spec.lambda * res.loss.aws : 0.0);
  return res;
}

Vec frame_errors(const Pipeline& pipeline, const ModelSet& models, const PreparedUtterance& utt,
                 const StateSequence<double>& states) {
  if (!utt.has_reference) throw std::invalid_argument("frame_errors: needs clean frames");
  ForwardSpec spec;
  spec.fixed_states = states;
  spec.include_wa = false;
  const auto res = evaluate(pipeline, models, utt, spec);
  return (utt.clean_frames - res.estimate_frames).cwiseAbs().colwise().sum().transpose();
}

void assign_oracle_targets(const Pipeline& pipeline, const ModelSet& models, PreparedUtterance& utt,
                           OracleMode mode) {
  const Eigen::Index steps = utt.analysis_frames();
  const Vec e_long = frame_errors(pipeline, models, utt, constant_states(WindowKind::Long, steps));
  const Vec e_short = frame_errors(pipeline, models, utt, constant_states(WindowKind::Short, steps));
  const Eigen::Index n = target_frames(utt.frames);
  utt.oracle_p.resize(2, n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const auto [p1, p2] = oracle_action_distribution(e_long[t + 1], e_short[t + 1], mode);
    utt.oracle_p(0, t) = p1;
    utt.oracle_p(1, t) = p2;
  }
}

Mat gate_probabilities(const ModelSet& models, const PreparedUtterance& utt) {
  const Mat logits = forward(models.gate, utt.long_context);
  return column_softmax(logits.leftCols(target_frames(utt.frames)));
}

double gate_agreement(const ModelSet& models, const std::vector<PreparedUtterance>& utts) {
  std::size_t hits = 0, total = 0;
  for (const auto& utt : utts) {
    const Mat q = gate_probabilities(models, utt);
    if (utt.oracle_p.cols() != q.cols()) throw std::invalid_argument("gate_agreement: oracle targets missing");
    for (Eigen::Index t = 0; t < q.cols(); ++t) {
      const bool q_short = q(1, t) > q(0, t);
      const bool p_short = utt.oracle_p(1, t) > utt.oracle_p(0, t);
      hits += q_short == p_short;
      ++total;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

ModelEnhancement enhance_with_models(const Pipeline& pipeline, const ModelSet& models, const Signal& noisy) {
  const PreparedUtterance utt = pipeline.prepare(noisy);
  ForwardSpec spec;
  spec.include_wa = false;
  const auto res = evaluate(pipeline, models, utt, spec);
  ModelEnhancement out;
  out.enhanced.sample_rate = noisy.sample_rate;
  out.enhanced.samples = unframe(res.estimate_frames, utt.pad_len);
  out.states = res.states;
  out.kinds = kinds_from_states(res.states);
  return out;
}

}  // namespace awse::learning
