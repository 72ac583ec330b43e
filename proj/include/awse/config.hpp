// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_CONFIG_HPP
#define AWSE_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "awse/learning/losses.hpp"

namespace awse {

/// Environment variable naming a config file; --config takes precedence.
inline constexpr const char* kConfigEnvVar = "AWSE_CONFIG";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Every tunable of the command-line tool. Config files use the same names
/// as the flags with '_' or '-' interchangeable, one `key = value` per line,
/// '#' comments.
struct RunConfig {
  int l_long = 512;
  int l_short = 128;
  int context_r = 5;
  double tau = 1e-4;
  double lambda = learning::kDefaultLambda;
  std::uint64_t seed = 42;
  double amp_floor = 1e-8;
  learning::OracleMode oracle_mode = learning::OracleMode::Direct;

  // Training.
  int hidden_units = 64;
  int gate_hidden_units = 0;        // 0: hidden_units
  double learning_rate = 1e-3;
  double gate_learning_rate = 0.0;  // 0: learning_rate
  int pretrain_epochs = 10;
  int gate_epochs = 10;
  int finetune_epochs = 5;
  double grad_clip = 0.0;  // per-network gradient norm limit, 0 disables
  double finetune_grad_clip = 1.0;

  // Synthetic corpus.
  int corpus_size = 50;
  double duration_sec = 1.0;
  double snr_db = -6.0;

  /// Throws ConfigError when a value violates a constraint.
  void validate() const;
};

/// Applies `key = value` lines to `config`. Unknown keys and unparsable
/// values throw ConfigError naming the line.
void apply_config_text(RunConfig& config, const std::string& text);
void apply_config_file(RunConfig& config, const std::string& path);

/// Every key and its current value, in file syntax.
std::string to_config_text(const RunConfig& config);

}  // namespace awse

#endif  // AWSE_CONFIG_HPP
