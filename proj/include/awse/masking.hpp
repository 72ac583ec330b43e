// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_MASKING_HPP
#define AWSE_MASKING_HPP

#include <array>
#include <limits>
#include <stdexcept>
#include <vector>

#include "awse/mdct.hpp"
#include "awse/metrics.hpp"
#include "awse/switching.hpp"

namespace awse {

/// Real gains in [0, 1], same layout as the spectra they scale.
template <typename Scalar>
using BasicMaskSequence = Matrix<Scalar>;
using MaskSequence = BasicMaskSequence<double>;

/// clip(S / X, 0, 1) per bin; bins with |X| < eps get 0.
template <typename Scalar>
BasicMaskSequence<Scalar> oracle_mask(const BasicSpectra<Scalar>& clean, const BasicSpectra<Scalar>& noisy,
                                      Scalar eps = Scalar(1e-12)) {
  if (clean.rows() != noisy.rows() || clean.cols() != noisy.cols())
    throw std::invalid_argument("oracle_mask: spectra dimensions differ");
  return clean.binaryExpr(noisy, [eps](Scalar s, Scalar x) {
    if (std::abs(x) < eps) return Scalar(0);
    return std::clamp(s / x, Scalar(0), Scalar(1));
  });
}

/// Fixed-window enhancement: mask the windowed MDCT of `noisy`, invert with
/// overlap-add, trim to the input length.
template <typename Scalar>
BasicSignal<Scalar> enhance_fixed(const BasicSignal<Scalar>& noisy, const BasicMaskSequence<Scalar>& mask,
                                  const Vector<Scalar>& window) {
  const auto seq = frame_signal(noisy.samples, window.size() / 2);
  const Matrix<Scalar> analysis = mdct_matrix<Scalar>(window.size()) * window.asDiagonal();
  const BasicSpectra<Scalar> spectra = lapped_analyze(analysis, seq);
  if (mask.rows() != spectra.rows() || mask.cols() != spectra.cols())
    throw std::invalid_argument("enhance_fixed: mask dimensions do not match the analysis");
  BasicSignal<Scalar> out;
  out.sample_rate = noisy.sample_rate;
  out.samples = lapped_synthesize(analysis, BasicSpectra<Scalar>(mask.cwiseProduct(spectra)), seq.pad_len);
  return out;
}

/// Switched enhancement: per-kind analysis, per-kind masking, state-weighted
/// synthesis.
template <typename Scalar>
BasicSignal<Scalar> enhance_switched(const BasicSignal<Scalar>& noisy,
                                     const std::array<BasicMaskSequence<Scalar>, 4>& masks,
                                     const StateSequence<Scalar>& states, const AnalysisBank<Scalar>& bank) {
  const auto seq = frame_signal(noisy.samples, bank.geometry.hop());
  auto streams = switched_analyze(seq, states, bank);
  for (std::size_t j = 0; j < 4; ++j) {
    if (masks[j].rows() != streams[j].rows() || masks[j].cols() != streams[j].cols())
      throw std::invalid_argument("enhance_switched: mask dimensions do not match the analysis");
    streams[j].array() *= masks[j].array();
  }
  BasicSignal<Scalar> out;
  out.sample_rate = noisy.sample_rate;
  out.samples = switched_synthesize(streams, states, bank, seq.pad_len);
  return out;
}

/// Per-kind oracle masks for a clean/noisy pair under the switched bank.
template <typename Scalar>
std::array<BasicMaskSequence<Scalar>, 4> oracle_switched_masks(const BasicSignal<Scalar>& clean,
                                                               const BasicSignal<Scalar>& noisy,
                                                               const AnalysisBank<Scalar>& bank) {
  const auto clean_seq = frame_signal(clean.samples, bank.geometry.hop());
  const auto noisy_seq = frame_signal(noisy.samples, bank.geometry.hop());
  std::array<BasicMaskSequence<Scalar>, 4> masks;
  for (int j = 0; j < 4; ++j)
    masks[static_cast<std::size_t>(j)] = oracle_mask<Scalar>(lapped_analyze(bank[j], clean_seq),
                                                             lapped_analyze(bank[j], noisy_seq));
  return masks;
}

/// Best legal window sequence for given per-kind masks, found by dynamic
/// programming over the automaton. Output frame t depends only on the kinds
/// at analysis frames t and t+1, so maximizing the mean segmental SDR (frame
/// length L_long/2) is exact. The first kind must be reachable from `initial`.
template <typename Scalar>
std::vector<WindowKind> best_window_sequence(const BasicSignal<Scalar>& clean, const BasicSignal<Scalar>& noisy,
                                             const std::array<BasicMaskSequence<Scalar>, 4>& masks,
                                             const AnalysisBank<Scalar>& bank,
                                             WindowKind initial = WindowKind::Long) {
  const Eigen::Index hop = bank.geometry.hop();
  const auto clean_seq = frame_signal(clean.samples, hop);
  const auto noisy_seq = frame_signal(noisy.samples, hop);
  const Eigen::Index frames = noisy_seq.count();
  const Matrix<Scalar> pairs = frame_pairs(noisy_seq);
  std::array<Matrix<Scalar>, 4> halves;
  for (int j = 0; j < 4; ++j) {
    const auto& m = masks[static_cast<std::size_t>(j)];
    if (m.cols() != pairs.cols()) throw std::invalid_argument("best_window_sequence: mask dimensions");
    halves[static_cast<std::size_t>(j)] = bank[j].transpose() * m.cwiseProduct(bank[j] * pairs);
  }

  // cost(t, j, k): -segmental SDR of output frame t with kind j at t and k at t+1.
  // Silent frames only break ties.
  const auto frame_cost = [&](Eigen::Index t, int j, int k) {
    const Vector<Scalar> est =
        halves[static_cast<std::size_t>(j)].col(t).tail(hop) + halves[static_cast<std::size_t>(k)].col(t + 1).head(hop);
    const double ref_energy = static_cast<double>(clean_seq.frames.col(t).squaredNorm());
    const double err = static_cast<double>((clean_seq.frames.col(t) - est).squaredNorm());
    if (ref_energy < kSilentFrameEnergy) return 1e-6 * 10.0 * std::log10(err + 1e-30);
    return -energy_ratio_db(ref_energy, err);
  };

  const Eigen::Index steps = frames + 1;
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::array<double, 4>> best(static_cast<std::size_t>(steps));
  std::vector<std::array<int, 4>> from(static_cast<std::size_t>(steps));
  for (int j = 0; j < 4; ++j)
    best[0][static_cast<std::size_t>(j)] = is_legal_adjacency(initial, static_cast<WindowKind>(j)) ? 0.0 : inf;
  for (Eigen::Index t = 1; t < steps; ++t) {
    auto& cur = best[static_cast<std::size_t>(t)];
    cur.fill(inf);
    for (int j = 0; j < 4; ++j) {
      const double base = best[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(j)];
      if (base == inf) continue;
      for (int k = 0; k < 4; ++k) {
        if (!is_legal_adjacency(static_cast<WindowKind>(j), static_cast<WindowKind>(k))) continue;
        const double c = base + frame_cost(t - 1, j, k);
        if (c < cur[static_cast<std::size_t>(k)]) {
          cur[static_cast<std::size_t>(k)] = c;
          from[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] = j;
        }
      }
    }
  }
  std::vector<WindowKind> kinds(static_cast<std::size_t>(steps));
  const auto& last = best.back();
  int k = static_cast<int>(std::min_element(last.begin(), last.end()) - last.begin());
  for (Eigen::Index t = steps - 1; t >= 0; --t) {
    kinds[static_cast<std::size_t>(t)] = static_cast<WindowKind>(k);
    if (t > 0) k = from[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
  }
  return kinds;
}

}  // namespace awse

#endif  // AWSE_MASKING_HPP
