// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_METRICS_HPP
#define AWSE_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "awse/signal.hpp"

namespace awse {

inline constexpr double kSdrCapDb = 300.0;
inline constexpr double kSilentFrameEnergy = 1e-10;

/// Energy ratio in dB, capped at kSdrCapDb (a perfect estimate reports the cap).
inline double energy_ratio_db(double signal_energy, double error_energy) {
  if (error_energy <= 0.0) return kSdrCapDb;
  return std::min(kSdrCapDb, 10.0 * std::log10(signal_energy / error_energy));
}

/// 10 log10(|s|^2 / |s - s_hat|^2).
template <typename DerivedA, typename DerivedB>
double sdr(const Eigen::MatrixBase<DerivedA>& reference, const Eigen::MatrixBase<DerivedB>& estimate) {
  if (reference.size() != estimate.size()) throw std::invalid_argument("sdr: length mismatch");
  const double ref_energy = static_cast<double>(reference.squaredNorm());
  if (ref_energy == 0.0) throw std::invalid_argument("sdr: reference has zero energy");
  return energy_ratio_db(ref_energy, static_cast<double>((reference - estimate).squaredNorm()));
}

inline double sdr(const Signal& reference, const Signal& estimate) {
  return sdr(reference.samples, estimate.samples);
}

/// sdr(clean, enhanced) - sdr(clean, noisy).
template <typename A, typename B, typename C>
double sdr_improvement(const Eigen::MatrixBase<A>& clean, const Eigen::MatrixBase<B>& noisy,
                       const Eigen::MatrixBase<C>& enhanced) {
  return sdr(clean, enhanced) - sdr(clean, noisy);
}

inline double sdr_improvement(const Signal& clean, const Signal& noisy, const Signal& enhanced) {
  return sdr_improvement(clean.samples, noisy.samples, enhanced.samples);
}

struct SegmentalSdrSeries {
  std::vector<double> values_db;
  std::vector<bool> silent;
  Eigen::Index frame_len = 0;

  std::size_t size() const { return values_db.size(); }

  /// Mean over non-silent frames, optionally restricted to `selected`.
  double mean(const std::vector<bool>* selected = nullptr) const {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t t = 0; t < values_db.size(); ++t) {
      if (silent[t] || (selected && !(*selected)[t])) continue;
      sum += values_db[t];
      ++n;
    }
    return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
  }
};

/// Per-frame SDR over non-overlapping frames (the last may be partial).
/// Frames whose reference energy is below kSilentFrameEnergy are flagged
/// silent and report 0.
template <typename DerivedA, typename DerivedB>
SegmentalSdrSeries segmental_sdr(const Eigen::MatrixBase<DerivedA>& reference,
                                 const Eigen::MatrixBase<DerivedB>& estimate, Eigen::Index frame_len) {
  if (reference.size() != estimate.size()) throw std::invalid_argument("segmental_sdr: length mismatch");
  if (frame_len <= 0) throw std::invalid_argument("segmental_sdr: frame length must be positive");
  SegmentalSdrSeries out;
  out.frame_len = frame_len;
  const Eigen::Index len = reference.size();
  for (Eigen::Index start = 0; start < len; start += frame_len) {
    const Eigen::Index n = std::min(frame_len, len - start);
    const double ref_energy = static_cast<double>(reference.segment(start, n).squaredNorm());
    const bool is_silent = ref_energy < kSilentFrameEnergy;
    out.silent.push_back(is_silent);
    out.values_db.push_back(
        is_silent ? 0.0
                  : energy_ratio_db(ref_energy, static_cast<double>(
                                                    (reference.segment(start, n) - estimate.segment(start, n))
                                                        .squaredNorm())));
  }
  return out;
}

inline SegmentalSdrSeries segmental_sdr(const Signal& reference, const Signal& estimate,
                                        Eigen::Index frame_len) {
  return segmental_sdr(reference.samples, estimate.samples, frame_len);
}

}  // namespace awse

#endif  // AWSE_METRICS_HPP
