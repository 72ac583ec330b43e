// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_LEARNING_SERIALIZE_HPP
#define AWSE_LEARNING_SERIALIZE_HPP

#include <cstdint>
#include <string>

#include "awse/learning/graph.hpp"

namespace awse::learning {

inline constexpr const char* kModelSchema = "awse.model/1";

/// Everything needed to rebuild a trained enhancer.
///
/// Stored as JSON text:
///   schema        "awse.model/1"
///   l_long, l_short, context_r, amp_floor, tau, lambda, seed, oracle_mode
///   masks         array of 4 networks in kind order long, start, short, stop
///   gate          network
/// Each network: kind, layer_sizes, output ("sigmoid" | "linear"),
/// input_shift, input_scale, weights (per layer, row-major flat array) and
/// biases (per layer). Doubles are written in shortest round-trip form, so
/// load(save(x)) is bit-exact.
struct ModelRecord {
  PipelineConfig pipeline;
  double tau = 1e-4;
  double lambda = kDefaultLambda;
  std::uint64_t seed = 0;
  OracleMode oracle_mode = OracleMode::Direct;
  ModelSet models;
};

std::string to_text(const ModelRecord& record);
ModelRecord from_text(const std::string& text);

void save_model(const std::string& path, const ModelRecord& record);
ModelRecord load_model(const std::string& path);

}  // namespace awse::learning

#endif  // AWSE_LEARNING_SERIALIZE_HPP
