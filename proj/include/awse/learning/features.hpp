// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_LEARNING_FEATURES_HPP
#define AWSE_LEARNING_FEATURES_HPP

#include <stdexcept>

#include "awse/mdct.hpp"
#include "awse/switching.hpp"

namespace awse::learning {

/// Stacks feature columns t-R..t+R into one column per frame; columns outside
/// the sequence contribute zero blocks. Output is (2R+1)*rows x cols.
template <typename Derived>
Matrix<typename Derived::Scalar> extract_context(const Eigen::MatrixBase<Derived>& features, int radius) {
  using Scalar = typename Derived::Scalar;
  if (radius < 0) throw std::invalid_argument("extract_context: radius must be >= 0");
  const Eigen::Index rows = features.rows(), cols = features.cols();
  const Eigen::Index slots = 2 * radius + 1;
  Matrix<Scalar> out = Matrix<Scalar>::Zero(slots * rows, cols);
  for (Eigen::Index t = 0; t < cols; ++t)
    for (Eigen::Index r = 0; r < slots; ++r) {
      const Eigen::Index src = t + r - radius;
      if (src >= 0 && src < cols) out.block(r * rows, t, rows, 1) = features.col(src);
    }
  return out;
}

/// Log-amplitude complex-lapped-transform features under the switched
/// layout: kind Short uses the short-block layout, every other kind the long
/// window (transition kinds share the long-window features).
template <typename Scalar>
struct FeatureBank {
  AnalysisBank<Scalar> cosine;
  AnalysisBank<Scalar> sine;
  Scalar amp_floor = Scalar(1e-8);

  explicit FeatureBank(const SwitchGeometry& geo, Scalar floor = Scalar(1e-8))
      : cosine(build_analysis_bank<Scalar>(geo)), sine(build_sine_bank<Scalar>(geo)), amp_floor(floor) {}

  BasicSpectra<Scalar> long_features(const BasicFrameSequence<Scalar>& seq) const {
    return log_amplitude(cosine[WindowKind::Long], sine[WindowKind::Long], seq, amp_floor);
  }
  BasicSpectra<Scalar> short_features(const BasicFrameSequence<Scalar>& seq) const {
    return log_amplitude(cosine[WindowKind::Short], sine[WindowKind::Short], seq, amp_floor);
  }
};

}  // namespace awse::learning

#endif  // AWSE_LEARNING_FEATURES_HPP
