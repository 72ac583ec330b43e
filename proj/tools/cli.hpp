// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_TOOLS_CLI_HPP
#define AWSE_TOOLS_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "awse/config.hpp"
#include "awse/learning/serialize.hpp"
#include "awse/signal.hpp"
#include "awse/switching.hpp"
#include "json.hpp"

namespace awse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitAcceptance = 2;

inline constexpr double kPrTolerance = 1e-10;

struct PrCheckOptions {
  int trials = 100;
  bool corrupt_window = false;  // adds 0.01 to the first long-window tap
};

/// Fixed-window and switched perfect-reconstruction trials. The report has
/// "pass" set when every relative error is within kPrTolerance.
nlohmann::json pr_check(const RunConfig& config, const PrCheckOptions& options);

enum class EnhanceMode { FixedLong, FixedShort, AwsOracle, AwsModel };
enum class MaskSource { Oracle, Ones, Model };

EnhanceMode parse_enhance_mode(const std::string& name);
MaskSource parse_mask_source(const std::string& name);

struct EnhanceResult {
  Signal enhanced;
  /// Window states of the switched modes, 4 x (T + 1).
  std::optional<StateSequence<double>> states;
};

/// `clean` is required by the oracle masks and oracle window decisions,
/// `model` by the model masks and aws-model.
EnhanceResult enhance(const RunConfig& config, EnhanceMode mode, MaskSource masks, const Signal& noisy,
                      const Signal* clean, const learning::ModelRecord* model);

/// sdr, sdr_improvement and mean segmental SDR (frame length L_long / 2).
nlohmann::json enhance_metrics(const RunConfig& config, const Signal& clean, const Signal& noisy,
                               const Signal& enhanced);

/// CSV: frame_index,time_sec,sdr_db,silent_flag after a schema comment line.
std::string segsdr_csv(const Signal& reference, const Signal& estimate, Eigen::Index frame_len);

/// CSV: t,z_long,z_start,z_short,z_stop,chosen_kind after a schema comment line.
std::string trace_csv(const StateSequence<double>& states);

/// Window states chosen by a trained gate (when `model` is given) or by the
/// oracle search with oracle masks.
StateSequence<double> trace_states(const RunConfig& config, const Signal& noisy, const Signal* clean,
                                   const learning::ModelRecord* model);

learning::ModelRecord model_record(const RunConfig& config, const learning::ModelSet& models);

/// Full command line: `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace awse::cli

#endif  // AWSE_TOOLS_CLI_HPP
