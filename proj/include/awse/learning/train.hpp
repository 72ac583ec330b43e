// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_LEARNING_TRAIN_HPP
#define AWSE_LEARNING_TRAIN_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "awse/learning/graph.hpp"

namespace awse::learning {

struct TrainConfig {
  int hidden_units = 64;
  int gate_hidden_units = 0;        // 0: hidden_units
  double gate_learning_rate = 0.0;  // 0: learning_rate
  double tau = 1e-4;
  double lambda = kDefaultLambda;
  double learning_rate = 1e-3;
  int pretrain_epochs = 10;
  int gate_epochs = 10;
  int finetune_epochs = 5;
  /// When positive, each network's gradient is rescaled to at most this
  /// Euclidean norm before the step.
  double grad_clip = 0.0;
  double finetune_grad_clip = 1.0;  // stage 3 limit, 0 disables
  OracleMode oracle_mode = OracleMode::Direct;
  std::uint64_t seed = 42;
};

/// One row per epoch. Stage 1: per-window mask pretraining (j_wa is the mean
/// of the long, short and transition passes). Stage 2: gate pretraining on
/// J_AWS. Stage 3: joint fine-tuning on J_WA + lambda J_AWS.
struct HistoryRow {
  int stage = 0;
  int epoch = 0;
  double j_wa = 0.0;
  double j_aws = 0.0;
  double total = 0.0;
};

struct TrainResult {
  ModelSet models;
  ModelSet pretrained;  // snapshot after stages 1 and 2
  std::vector<HistoryRow> history;
};

/// Randomly initialized models sized for `pipeline`, with input
/// standardization fitted to the feature statistics of `corpus`.
ModelSet init_models(const Pipeline& pipeline, const std::vector<PreparedUtterance>& corpus, int hidden_units,
                     std::uint64_t seed, int gate_hidden_units = 0);

using ProgressFn = std::function<void(const HistoryRow&)>;

/// Runs the three training stages with plain per-utterance gradient steps in
/// a seeded shuffled order. Oracle window targets are assigned to `corpus`
/// from the stage-1 masks and stay fixed afterwards.
TrainResult train(const Pipeline& pipeline, std::vector<PreparedUtterance>& corpus, const TrainConfig& config,
                  const ProgressFn& progress = {});

/// Corpus means of the losses under a window policy.
struct CorpusScores {
  double wa_long = 0.0;     // J_WA, all-long states
  double wa_short = 0.0;    // J_WA, all-short states
  double wa_switched = 0.0; // J_WA, hardened gate decisions
  double aws = 0.0;         // J_AWS of the gate
  double combined = 0.0;    // wa_switched + lambda * aws
};

CorpusScores score_corpus(const Pipeline& pipeline, const ModelSet& models,
                          const std::vector<PreparedUtterance>& corpus, double lambda);

/// Writes the history as CSV with a schema comment line.
std::string history_csv(const std::vector<HistoryRow>& history);

}  // namespace awse::learning

#endif  // AWSE_LEARNING_TRAIN_HPP
