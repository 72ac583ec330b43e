// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_WINDOWS_HPP
#define AWSE_WINDOWS_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "awse/signal.hpp"

namespace awse {

/// The four switchable windows, in the order of the window-state vector.
enum class WindowKind { Long = 0, Start = 1, Short = 2, Stop = 3 };

inline constexpr std::array<WindowKind, 4> kAllKinds = {WindowKind::Long, WindowKind::Start,
                                                        WindowKind::Short, WindowKind::Stop};

inline constexpr int index_of(WindowKind kind) { return static_cast<int>(kind); }

inline constexpr std::string_view kind_name(WindowKind kind) {
  switch (kind) {
    case WindowKind::Long: return "long";
    case WindowKind::Start: return "start";
    case WindowKind::Short: return "short";
    case WindowKind::Stop: return "stop";
  }
  return "?";
}

/// True when `next` may directly follow `prev` under the switching automaton.
inline constexpr bool is_legal_adjacency(WindowKind prev, WindowKind next) {
  switch (prev) {
    case WindowKind::Long: return next == WindowKind::Long || next == WindowKind::Start;
    case WindowKind::Start: return next == WindowKind::Short;
    case WindowKind::Short: return next == WindowKind::Short || next == WindowKind::Stop;
    case WindowKind::Stop: return next == WindowKind::Long;
  }
  return false;
}

/// Window lengths of a long/short switching configuration.
struct SwitchGeometry {
  Eigen::Index long_len = 512;
  Eigen::Index short_len = 128;

  SwitchGeometry() = default;
  SwitchGeometry(Eigen::Index l_long, Eigen::Index l_short) : long_len(l_long), short_len(l_short) {
    if (long_len % 2 != 0 || short_len % 2 != 0 || short_len < 4 || long_len <= short_len ||
        long_len % short_len != 0 || (long_len / 4 - short_len / 4) * 4 != long_len - short_len)
      throw std::invalid_argument("window geometry: need even lengths with L_short | L_long, "
                                  "L_long > L_short >= 4 and (L_long - L_short) divisible by 4");
  }

  Eigen::Index hop() const { return long_len / 2; }
  Eigen::Index short_hop() const { return short_len / 2; }
  Eigen::Index blocks() const { return long_len / short_len; }
  /// Length of the flat (ones or zeros) runs in the transition windows, which
  /// is also the offset of the first short block inside a long frame.
  Eigen::Index margin() const { return long_len / 4 - short_len / 4; }
  /// 0-based column where short block h starts inside a long frame.
  Eigen::Index block_column(Eigen::Index h) const { return margin() + h * short_hop(); }
};

template <typename Scalar = double>
Vector<Scalar> sine_window(Eigen::Index len) {
  if (len < 4 || len % 2 != 0) throw std::invalid_argument("sine_window: length must be even and >= 4");
  Vector<Scalar> w(len);
  for (Eigen::Index n = 0; n < len; ++n)
    w[n] = std::sin(std::numbers::pi_v<Scalar> / Scalar(len) * (Scalar(n) + Scalar(0.5)));
  // Exact symmetry regardless of rounding in the argument.
  for (Eigen::Index n = 0; n < len / 2; ++n) w[len - 1 - n] = w[n];
  return w;
}

template <typename Scalar = double>
struct CompositeWindows {
  Vector<Scalar> long_window;
  Vector<Scalar> start;
  Vector<Scalar> short_envelope;
  Vector<Scalar> stop;
  Vector<Scalar> short_window;  // the atomic L_short sine window

  const Vector<Scalar>& envelope(WindowKind kind) const {
    switch (kind) {
      case WindowKind::Long: return long_window;
      case WindowKind::Start: return start;
      case WindowKind::Short: return short_envelope;
      case WindowKind::Stop: return stop;
    }
    throw std::invalid_argument("unknown window kind");
  }
};

/// Builds the long, start, stop and short-envelope windows, each of length
/// L_long. The short envelope is the root of the summed squares of the
/// shifted short windows; it is diagnostic only.
template <typename Scalar = double>
CompositeWindows<Scalar> composite_windows(const SwitchGeometry& geo) {
  const Eigen::Index n_long = geo.long_len, n_short = geo.short_len;
  const Eigen::Index margin = geo.margin();
  CompositeWindows<Scalar> out;
  out.long_window = sine_window<Scalar>(n_long);
  out.short_window = sine_window<Scalar>(n_short);
  const auto& wl = out.long_window;
  const auto& ws = out.short_window;

  out.start = Vector<Scalar>::Zero(n_long);
  out.start.head(n_long / 2) = wl.head(n_long / 2);
  out.start.segment(n_long / 2, margin).setOnes();
  out.start.segment(n_long / 2 + margin, n_short / 2) = ws.tail(n_short / 2);

  out.stop = Vector<Scalar>::Zero(n_long);
  out.stop.segment(margin, n_short / 2) = ws.head(n_short / 2);
  out.stop.segment(margin + n_short / 2, margin).setOnes();
  out.stop.tail(n_long / 2) = wl.tail(n_long / 2);

  Vector<Scalar> power = Vector<Scalar>::Zero(n_long);
  for (Eigen::Index h = 0; h < geo.blocks(); ++h)
    power.segment(geo.block_column(h), n_short) += ws.cwiseAbs2();
  out.short_envelope = power.cwiseSqrt();
  return out;
}

template <typename Scalar = double>
CompositeWindows<Scalar> composite_windows(Eigen::Index l_long, Eigen::Index l_short) {
  return composite_windows<Scalar>(SwitchGeometry(l_long, l_short));
}

/// Max over the overlap region of |w_prev[n + hop]^2 + w_next[n]^2 - 1| for
/// two consecutive frames. Throws on an adjacency the automaton forbids.
template <typename Scalar = double>
Scalar envelope_complementarity_check(WindowKind prev, WindowKind next, const SwitchGeometry& geo) {
  if (!is_legal_adjacency(prev, next))
    throw std::invalid_argument("illegal window adjacency: " + std::string(kind_name(prev)) +
                                " -> " + std::string(kind_name(next)));
  const auto windows = composite_windows<Scalar>(geo);
  const Eigen::Index hop = geo.hop();
  const auto& a = windows.envelope(prev);
  const auto& b = windows.envelope(next);
  return ((a.tail(hop).cwiseAbs2() + b.head(hop).cwiseAbs2()).array() - Scalar(1)).abs().maxCoeff();
}

}  // namespace awse

#endif  // AWSE_WINDOWS_HPP
