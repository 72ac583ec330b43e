// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_LEARNING_LOSSES_HPP
#define AWSE_LEARNING_LOSSES_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "awse/signal.hpp"

namespace awse::learning {

inline constexpr double kDefaultLambda = 0.1;
inline constexpr double kProbabilityFloor = 1e-12;

/// Mean over frames (columns) of the per-frame l1 error.
template <typename A, typename B>
double loss_wa(const Eigen::MatrixBase<A>& clean_frames, const Eigen::MatrixBase<B>& est_frames) {
  if (clean_frames.rows() != est_frames.rows() || clean_frames.cols() != est_frames.cols())
    throw std::invalid_argument("loss_wa: frame dimensions differ");
  if (clean_frames.cols() == 0) return 0.0;
  return (clean_frames - est_frames).cwiseAbs().sum() / static_cast<double>(clean_frames.cols());
}

/// How the per-frame oracle window distribution is formed from the l1 errors
/// of the long and short windows. `Direct` puts p_1 = e_long / (e_long + e_short);
/// `Complement` swaps the errors.
enum class OracleMode { Direct, Complement };

inline OracleMode parse_oracle_mode(const std::string& name) {
  if (name == "direct") return OracleMode::Direct;
  if (name == "complement") return OracleMode::Complement;
  throw std::invalid_argument("unknown oracle mode: " + name);
}

inline std::string oracle_mode_name(OracleMode mode) {
  return mode == OracleMode::Direct ? "direct" : "complement";
}

/// (p_1, p_2) with p_2 = 1 - p_1; both errors zero gives (0.5, 0.5).
inline std::pair<double, double> oracle_action_distribution(double e_long, double e_short, OracleMode mode) {
  if (e_long < 0.0 || e_short < 0.0) throw std::invalid_argument("oracle_action_distribution: negative error");
  const double total = e_long + e_short;
  if (total == 0.0) return {0.5, 0.5};
  const double p1 = (mode == OracleMode::Direct ? e_long : e_short) / total;
  return {p1, 1.0 - p1};
}

/// Mean over columns of sum_i p_i ln(p_i / q_i), with 0 ln 0 = 0 and q floored.
template <typename A, typename B>
double loss_aws(const Eigen::MatrixBase<A>& p, const Eigen::MatrixBase<B>& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols()) throw std::invalid_argument("loss_aws: dimensions differ");
  if (p.cols() == 0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index t = 0; t < p.cols(); ++t)
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      const double pi = p(i, t);
      if (pi > 0.0) sum += pi * std::log(pi / std::max<double>(q(i, t), kProbabilityFloor));
    }
  return sum / static_cast<double>(p.cols());
}

inline double loss_combined(double j_wa, double j_aws, double lambda = kDefaultLambda) {
  return j_wa + lambda * j_aws;
}

}  // namespace awse::learning

#endif  // AWSE_LEARNING_LOSSES_HPP
