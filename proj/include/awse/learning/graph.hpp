// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_LEARNING_GRAPH_HPP
#define AWSE_LEARNING_GRAPH_HPP

#include <array>
#include <optional>
#include <vector>

#include "awse/learning/features.hpp"
#include "awse/learning/losses.hpp"
#include "awse/learning/model.hpp"
#include "awse/switching.hpp"

namespace awse::learning {

struct PipelineConfig {
  SwitchGeometry geometry{512, 128};
  int context_radius = 5;
  double amp_floor = 1e-8;
};

/// One utterance with everything that does not depend on model parameters:
/// the noisy analysis streams, feature contexts and (optionally) the clean
/// frames and oracle window targets.
struct PreparedUtterance {
  Eigen::Index frames = 0;  // T output frames; there are T + 1 analysis frames
  Eigen::Index pad_len = 0;
  int sample_rate = 16000;
  bool has_reference = false;
  Mat clean_frames;  // hop x T when has_reference
  std::array<Mat, 4> streams;
  Mat long_context;   // feature_dim x (T + 1)
  Mat short_context;  // feature_dim x (T + 1)
  /// Oracle (p_1, p_2) for analysis frames t = 0..T-2, from the errors of
  /// output frame t + 1; 2 x max(T - 1, 0). Empty until assigned.
  Mat oracle_p;

  Eigen::Index analysis_frames() const { return frames + 1; }
  const Mat& context(int kind) const {
    return kind == index_of(WindowKind::Short) ? short_context : long_context;
  }
};

/// Shared immutable transforms for one geometry.
class Pipeline {
 public:
  explicit Pipeline(const PipelineConfig& config);

  const PipelineConfig& config() const { return config_; }
  const AnalysisBank<double>& bank() const { return bank_; }
  Eigen::Index hop() const { return config_.geometry.hop(); }
  int feature_dim() const;

  PreparedUtterance prepare(const Signal& noisy, const Signal* clean = nullptr) const;

 private:
  PipelineConfig config_;
  AnalysisBank<double> bank_;
  FeatureBank<double> features_;
};

/// How a forward pass obtains its window states and which losses it forms.
struct ForwardSpec {
  /// Window states (4 x (T+1)); when absent they come from the gate.
  std::optional<StateSequence<double>> fixed_states;
  /// Gumbel noise (2 x (T+1)) for the relaxed gate. When absent the gate is
  /// hardened: a_t is the one-hot argmax of its logits.
  std::optional<Mat> gumbel;
  double tau = 1e-4;
  double lambda = kDefaultLambda;
  bool include_wa = true;
  bool include_aws = false;  // requires PreparedUtterance::oracle_p
};

struct GradientSelection {
  std::array<bool, 4> masks{true, true, true, true};
  bool gate = true;

  static GradientSelection only_masks(std::initializer_list<WindowKind> kinds);
  static GradientSelection only_gate();
};

struct LossBreakdown {
  double wa = 0.0;
  double aws = 0.0;
  double total = 0.0;
};

struct ForwardResult {
  LossBreakdown loss;
  StateSequence<double> states;
  Mat estimate_frames;          // hop x T
  std::array<Mat, 4> masks;     // hop x (T+1); empty for inactive kinds
  Mat gate_logits;              // 2 x (T+1) when the gate ran
};

/// Full differentiable pass: features -> models -> Gumbel-softmax gate ->
/// state recursion -> masking -> state-weighted synthesis -> losses. When
/// `grads` is given, exact reverse-mode gradients of loss.total are added to it.
ForwardResult evaluate(const Pipeline& pipeline, const ModelSet& models, const PreparedUtterance& utt,
                       const ForwardSpec& spec, ModelGradients* grads = nullptr,
                       const GradientSelection& select = {});

StateSequence<double> constant_states(WindowKind kind, Eigen::Index count);

/// Legal periodic sequence long, start, short, stop, ... starting at `phase`.
StateSequence<double> cyclic_states(Eigen::Index count, int phase);

/// Per-output-frame l1 errors under fixed states.
Vec frame_errors(const Pipeline& pipeline, const ModelSet& models, const PreparedUtterance& utt,
                 const StateSequence<double>& states);

/// Fills utt.oracle_p from the long-window and short-window frame errors of
/// the current mask models.
void assign_oracle_targets(const Pipeline& pipeline, const ModelSet& models, PreparedUtterance& utt,
                           OracleMode mode);

/// q_t = softmax(gate logits) for the analysis frames that carry targets.
Mat gate_probabilities(const ModelSet& models, const PreparedUtterance& utt);

/// Fraction of target frames where argmax q matches argmax p.
double gate_agreement(const ModelSet& models, const std::vector<PreparedUtterance>& utts);

struct ModelEnhancement {
  Signal enhanced;
  StateSequence<double> states;
  std::vector<WindowKind> kinds;
};

/// Inference: hardened gate decisions, mask models, switched synthesis.
ModelEnhancement enhance_with_models(const Pipeline& pipeline, const ModelSet& models, const Signal& noisy);

}  // namespace awse::learning

#endif  // AWSE_LEARNING_GRAPH_HPP
