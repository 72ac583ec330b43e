// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_SWITCHING_HPP
#define AWSE_SWITCHING_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "awse/mdct.hpp"
#include "awse/windows.hpp"

namespace awse {

/// (a_1, a_2): weight of "switch to long" and "switch to short".
template <typename Scalar>
using ActionVector = Eigen::Matrix<Scalar, 2, 1>;

/// Soft indicator over (long, start, short, stop).
template <typename Scalar>
using WindowState = Eigen::Matrix<Scalar, 4, 1>;

/// Window states over time, one column per analysis frame.
template <typename Scalar>
using StateSequence = Eigen::Matrix<Scalar, 4, Eigen::Dynamic>;

using BasicMatrix4i = Eigen::Matrix<int, 4, 4>;

/// The two constant state-transition matrices, indexed (k, j) for action i.
struct TransitionMatrices {
  BasicMatrix4i to_long;   // applied with weight a_1
  BasicMatrix4i to_short;  // applied with weight a_2
};

inline TransitionMatrices transition_matrices() {
  TransitionMatrices q;
  q.to_long << 0, 0, 0, 1,
               0, -1, 0, 0,
               0, 1, -1, 0,
               0, 0, 1, -1;
  q.to_short << -1, 0, 0, 1,
                1, -1, 0, 0,
                0, 1, 0, 0,
                0, 0, 0, -1;
  return q;
}

/// One-step propagation matrix I + a_1 Q_1 + a_2 Q_2, so z_t = B(a_t) z_{t-1}.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> step_matrix(const ActionVector<Scalar>& a) {
  const auto q = transition_matrices();
  return Eigen::Matrix<Scalar, 4, 4>::Identity() + a[0] * q.to_long.cast<Scalar>() +
         a[1] * q.to_short.cast<Scalar>();
}

/// z'_k = z_k + sum_i sum_j a_i z_j Q[k, j, i].
template <typename Scalar>
WindowState<Scalar> step_state(const WindowState<Scalar>& z, const ActionVector<Scalar>& a) {
  return step_matrix(a) * z;
}

template <typename Scalar>
WindowState<Scalar> one_hot_state(WindowKind kind) {
  WindowState<Scalar> z = WindowState<Scalar>::Zero();
  z[index_of(kind)] = Scalar(1);
  return z;
}

template <typename Scalar>
ActionVector<Scalar> one_hot_action(int i) {
  ActionVector<Scalar> a = ActionVector<Scalar>::Zero();
  a[i] = Scalar(1);
  return a;
}

/// states[t] = step_state(states[t-1], actions[t]) with states[-1] = z0.
/// `actions` is 2 x T.
template <typename Scalar, typename Derived>
StateSequence<Scalar> run_state_machine(const WindowState<Scalar>& z0,
                                        const Eigen::MatrixBase<Derived>& actions) {
  if (actions.rows() != 2) throw std::invalid_argument("run_state_machine: actions must have 2 rows");
  StateSequence<Scalar> states(4, actions.cols());
  WindowState<Scalar> z = z0;
  for (Eigen::Index t = 0; t < actions.cols(); ++t) {
    z = step_state<Scalar>(z, actions.col(t));
    states.col(t) = z;
  }
  return states;
}

template <typename Scalar>
StateSequence<Scalar> states_from_kinds(const std::vector<WindowKind>& kinds) {
  StateSequence<Scalar> states = StateSequence<Scalar>::Zero(4, static_cast<Eigen::Index>(kinds.size()));
  for (std::size_t t = 0; t < kinds.size(); ++t) states(index_of(kinds[t]), static_cast<Eigen::Index>(t)) = 1;
  return states;
}

template <typename Scalar>
std::vector<WindowKind> kinds_from_states(const StateSequence<Scalar>& states) {
  std::vector<WindowKind> kinds(static_cast<std::size_t>(states.cols()));
  for (Eigen::Index t = 0; t < states.cols(); ++t) {
    Eigen::Index best = 0;
    states.col(t).maxCoeff(&best);
    kinds[static_cast<std::size_t>(t)] = static_cast<WindowKind>(best);
  }
  return kinds;
}

/// Replaces each soft state by the one-hot state of its largest entry.
template <typename Scalar>
StateSequence<Scalar> harden(const StateSequence<Scalar>& states) {
  return states_from_kinds<Scalar>(kinds_from_states(states));
}

/// True when every consecutive pair of kinds is allowed by the automaton.
inline bool is_legal_sequence(const std::vector<WindowKind>& kinds) {
  for (std::size_t t = 1; t < kinds.size(); ++t)
    if (!is_legal_adjacency(kinds[t - 1], kinds[t])) return false;
  return true;
}

/// Action that drives `prev` to `next`, as one-hot index (0: long, 1: short).
/// Transitions reachable by both actions report 0.
inline int action_for(WindowKind prev, WindowKind next) {
  if (!is_legal_adjacency(prev, next)) throw std::invalid_argument("action_for: illegal adjacency");
  if (prev == WindowKind::Long) return next == WindowKind::Start ? 1 : 0;
  if (prev == WindowKind::Short) return next == WindowKind::Short ? 1 : 0;
  return 0;
}

/// Random legal window sequence from uniformly drawn one-hot actions.
template <typename Rng>
std::vector<WindowKind> random_legal_kinds(std::size_t count, Rng& rng,
                                           WindowKind initial = WindowKind::Long) {
  std::bernoulli_distribution coin(0.5);
  Eigen::Matrix<double, 2, Eigen::Dynamic> actions = Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, count);
  for (std::size_t t = 0; t < count; ++t) actions(coin(rng) ? 1 : 0, static_cast<Eigen::Index>(t)) = 1.0;
  return kinds_from_states(run_state_machine(one_hot_state<double>(initial), actions));
}

/// Four analysis matrices, each (L_long/2) x L_long, indexed by WindowKind.
template <typename Scalar>
struct AnalysisBank {
  SwitchGeometry geometry;
  std::array<Matrix<Scalar>, 4> matrices;

  const Matrix<Scalar>& operator[](WindowKind kind) const { return matrices[index_of(kind)]; }
  const Matrix<Scalar>& operator[](int j) const { return matrices[static_cast<std::size_t>(j)]; }
};

namespace detail {

template <typename Scalar, typename KernelFn>
AnalysisBank<Scalar> assemble_bank(const SwitchGeometry& geo, KernelFn kernel) {
  const auto windows = composite_windows<Scalar>(geo);
  const Matrix<Scalar> long_kernel = kernel(geo.long_len);
  AnalysisBank<Scalar> bank;
  bank.geometry = geo;
  bank.matrices[index_of(WindowKind::Long)] = long_kernel * windows.long_window.asDiagonal();
  bank.matrices[index_of(WindowKind::Start)] = long_kernel * windows.start.asDiagonal();
  bank.matrices[index_of(WindowKind::Stop)] = long_kernel * windows.stop.asDiagonal();

  // Short frame: H half-overlapped short MDCTs, block h at coefficient rows
  // [h * L_short/2, (h+1) * L_short/2) and sample columns starting at
  // L_long/4 - L_short/4 + h * L_short/2 (0-based form of the 1-based index sets).
  const Matrix<Scalar> short_block = kernel(geo.short_len) * windows.short_window.asDiagonal();
  Matrix<Scalar> shorts = Matrix<Scalar>::Zero(geo.hop(), geo.long_len);
  for (Eigen::Index h = 0; h < geo.blocks(); ++h)
    shorts.block(h * geo.short_hop(), geo.block_column(h), geo.short_hop(), geo.short_len) = short_block;
  bank.matrices[index_of(WindowKind::Short)] = std::move(shorts);
  return bank;
}

}  // namespace detail

template <typename Scalar = double>
AnalysisBank<Scalar> build_analysis_bank(const SwitchGeometry& geo) {
  return detail::assemble_bank<Scalar>(geo, [](Eigen::Index n) { return mdct_matrix<Scalar>(n); });
}

/// Same layout as build_analysis_bank with the sine kernel; together they
/// form the complex lapped transform of each window kind.
template <typename Scalar = double>
AnalysisBank<Scalar> build_sine_bank(const SwitchGeometry& geo) {
  return detail::assemble_bank<Scalar>(geo, [](Eigen::Index n) { return mdst_matrix<Scalar>(n); });
}

/// a = softmax((logits + gumbel) / tau), max-subtracted.
template <typename Scalar>
ActionVector<Scalar> gumbel_softmax(const ActionVector<Scalar>& logits, Scalar tau,
                                    const ActionVector<Scalar>& gumbel) {
  if (!(tau > Scalar(0))) throw std::invalid_argument("gumbel_softmax: tau must be positive");
  const ActionVector<Scalar> u = (logits + gumbel) / tau;
  const ActionVector<Scalar> e = (u.array() - u.maxCoeff()).exp();
  return e / e.sum();
}

/// Gumbel(0, 1) draw, -ln(-ln u) with u kept inside (0, 1).
template <typename Scalar, typename Rng>
Scalar sample_gumbel(Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = std::clamp(uniform(rng), 1e-300, std::nextafter(1.0, 0.0));
  return static_cast<Scalar>(-std::log(-std::log(u)));
}

/// Per-kind analysis streams M_j (x_{t-1}; x_t). When `skip_below` is set,
/// columns whose state weight is not above it are left at zero.
template <typename Scalar>
std::array<BasicSpectra<Scalar>, 4> switched_analyze(const BasicFrameSequence<Scalar>& seq,
                                                     const StateSequence<Scalar>& states,
                                                     const AnalysisBank<Scalar>& bank,
                                                     std::optional<Scalar> skip_below = std::nullopt) {
  if (seq.frame_len != bank.geometry.hop())
    throw std::invalid_argument("switched_analyze: frame length must be L_long / 2");
  if (states.cols() != seq.count() + 1)
    throw std::invalid_argument("switched_analyze: need one state per analysis frame (T + 1)");
  const Matrix<Scalar> pairs = frame_pairs(seq);
  std::array<BasicSpectra<Scalar>, 4> streams;
  for (int j = 0; j < 4; ++j) {
    if (!skip_below) {
      streams[static_cast<std::size_t>(j)] = bank[j] * pairs;
      continue;
    }
    BasicSpectra<Scalar> s = BasicSpectra<Scalar>::Zero(bank.geometry.hop(), pairs.cols());
    for (Eigen::Index t = 0; t < pairs.cols(); ++t)
      if (states(j, t) > *skip_below) s.col(t).noalias() = bank[j] * pairs.col(t);
    streams[static_cast<std::size_t>(j)] = std::move(s);
  }
  return streams;
}

/// State-weighted per-frame synthesis sum_j z_{j,t} M_j^T S_{j,t}, 2N x (T+1).
template <typename Scalar>
Matrix<Scalar> switched_halves(const std::array<BasicSpectra<Scalar>, 4>& streams,
                               const StateSequence<Scalar>& states, const AnalysisBank<Scalar>& bank) {
  const Eigen::Index cols = states.cols();
  Matrix<Scalar> halves = Matrix<Scalar>::Zero(bank.geometry.long_len, cols);
  for (int j = 0; j < 4; ++j) {
    const auto& s = streams[static_cast<std::size_t>(j)];
    if (s.rows() != bank.geometry.hop() || s.cols() != cols)
      throw std::invalid_argument("switched_synthesize: stream dimensions do not match states");
    if (states.row(j).isZero(0)) continue;
    halves.noalias() += bank[j].transpose() * (s * states.row(j).transpose().asDiagonal());
  }
  return halves;
}

/// s_t = sum_j z_{j,t} C2_{j,t} + sum_j z_{j,t+1} C1_{j,t+1}, then pad trimming.
template <typename Scalar>
Vector<Scalar> switched_synthesize(const std::array<BasicSpectra<Scalar>, 4>& streams,
                                   const StateSequence<Scalar>& states, const AnalysisBank<Scalar>& bank,
                                   Eigen::Index pad_len) {
  if (states.cols() == 0) throw std::invalid_argument("switched_synthesize: no analysis frames");
  return unframe(overlap_add(switched_halves(streams, states, bank)), pad_len);
}

}  // namespace awse

#endif  // AWSE_SWITCHING_HPP
