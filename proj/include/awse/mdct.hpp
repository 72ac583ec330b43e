// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_MDCT_HPP
#define AWSE_MDCT_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "awse/signal.hpp"
#include "awse/windows.hpp"

namespace awse {

/// Coefficient frames, one column per analysis frame. Analysis of T signal
/// frames yields T+1 columns: column t covers the pair (x_{t-1}; x_t) with the
/// out-of-range frames x_{-1} and x_T taken as zeros.
template <typename Scalar>
using BasicSpectra = Matrix<Scalar>;
using Spectra = BasicSpectra<double>;

namespace detail {

template <typename Scalar, typename Kernel>
Matrix<Scalar> lapped_kernel(Eigen::Index len, Kernel kernel) {
  if (len < 4 || len % 2 != 0) throw std::invalid_argument("lapped transform: L must be even and >= 4");
  const Eigen::Index half = len / 2;
  const Scalar scale = std::sqrt(Scalar(2) / Scalar(half));
  const Scalar base = std::numbers::pi_v<Scalar> / Scalar(half);
  Matrix<Scalar> m(half, len);
  for (Eigen::Index k = 0; k < half; ++k)
    for (Eigen::Index n = 0; n < len; ++n)
      m(k, n) = scale * kernel(base * (Scalar(n) + Scalar(0.5) + Scalar(half) / 2) * (Scalar(k) + Scalar(0.5)));
  return m;
}

}  // namespace detail

/// MDCT matrix C (L/2 x L):
///   C[k][n] = sqrt(2/N) cos(pi/N (n + 1/2 + N/2)(k + 1/2)),  N = L/2.
/// With a Princen-Bradley window W, M = C W satisfies TDAC with unit-gain
/// overlap-add, so M^T is the synthesis operator.
template <typename Scalar = double>
Matrix<Scalar> mdct_matrix(Eigen::Index len) {
  return detail::lapped_kernel<Scalar>(len, [](Scalar a) { return std::cos(a); });
}

/// Sine counterpart of mdct_matrix; the imaginary part of the MCLT.
template <typename Scalar = double>
Matrix<Scalar> mdst_matrix(Eigen::Index len) {
  return detail::lapped_kernel<Scalar>(len, [](Scalar a) { return std::sin(a); });
}

/// Analysis with an arbitrary L/2-row analysis matrix (e.g. C diag(w)).
template <typename Scalar, typename Derived>
BasicSpectra<Scalar> lapped_analyze(const Eigen::MatrixBase<Derived>& analysis,
                                    const BasicFrameSequence<Scalar>& seq) {
  if (analysis.cols() != 2 * seq.frame_len)
    throw std::invalid_argument("lapped_analyze: analysis width must be twice the frame length");
  return analysis * frame_pairs(seq);
}

/// TDAC overlap-add of per-frame synthesis outputs (2N x (T+1)) into N x T
/// frames: out_t = second half of y_t + first half of y_{t+1}.
template <typename Derived>
Matrix<typename Derived::Scalar> overlap_add(const Eigen::MatrixBase<Derived>& halves) {
  const Eigen::Index n = halves.rows() / 2;
  const Eigen::Index count = halves.cols() - 1;
  if (count < 0) return Matrix<typename Derived::Scalar>(n, 0);
  return halves.bottomLeftCorner(n, count) + halves.topRightCorner(n, count);
}

template <typename Scalar, typename Derived>
Vector<Scalar> lapped_synthesize(const Eigen::MatrixBase<Derived>& analysis,
                                 const BasicSpectra<Scalar>& spectra, Eigen::Index pad_len) {
  if (spectra.rows() != analysis.rows())
    throw std::invalid_argument("lapped_synthesize: spectra rows do not match the transform");
  if (spectra.cols() == 0) {
    if (pad_len != 0) throw std::invalid_argument("lapped_synthesize: pad length without frames");
    return Vector<Scalar>(0);
  }
  const Matrix<Scalar> halves = analysis.transpose() * spectra;
  return unframe(overlap_add(halves), pad_len);
}

/// Windowed MDCT of every frame pair: column t = C diag(window) (x_{t-1}; x_t).
template <typename Scalar>
BasicSpectra<Scalar> mdct_analyze(const BasicFrameSequence<Scalar>& seq,
                                  const Vector<Scalar>& window) {
  if (window.size() != 2 * seq.frame_len)
    throw std::invalid_argument("mdct_analyze: window length must be twice the frame length");
  return lapped_analyze(mdct_matrix<Scalar>(window.size()) * window.asDiagonal(), seq);
}

/// Inverse of mdct_analyze: per-column transpose synthesis, overlap-add, and
/// removal of the trailing `pad_len` samples.
template <typename Scalar>
Vector<Scalar> mdct_synthesize(const BasicSpectra<Scalar>& spectra, const Vector<Scalar>& window,
                               Eigen::Index pad_len) {
  if (spectra.rows() * 2 != window.size())
    throw std::invalid_argument("mdct_synthesize: window length must be twice the spectrum size");
  return lapped_synthesize(mdct_matrix<Scalar>(window.size()) * window.asDiagonal(), spectra, pad_len);
}

/// Log-amplitude of the complex lapped transform given the windowed cosine and
/// sine analysis matrices: ln(sqrt(c^2 + s^2) + amp_floor).
template <typename Scalar, typename DerivedC, typename DerivedS>
BasicSpectra<Scalar> log_amplitude(const Eigen::MatrixBase<DerivedC>& cos_analysis,
                                   const Eigen::MatrixBase<DerivedS>& sin_analysis,
                                   const BasicFrameSequence<Scalar>& seq, Scalar amp_floor) {
  if (!(amp_floor > Scalar(0))) throw std::invalid_argument("mclt: amp_floor must be positive");
  const Matrix<Scalar> pairs = frame_pairs(seq);
  const Matrix<Scalar> re = cos_analysis * pairs;
  const Matrix<Scalar> im = sin_analysis * pairs;
  return ((re.array().square() + im.array().square()).sqrt() + amp_floor).log().matrix();
}

template <typename Scalar>
BasicSpectra<Scalar> mclt_features(const BasicFrameSequence<Scalar>& seq, const Vector<Scalar>& window,
                                   Scalar amp_floor = Scalar(1e-8)) {
  if (window.size() != 2 * seq.frame_len)
    throw std::invalid_argument("mclt_features: window length must be twice the frame length");
  const Eigen::Index len = window.size();
  return log_amplitude(mdct_matrix<Scalar>(len) * window.asDiagonal(),
                       mdst_matrix<Scalar>(len) * window.asDiagonal(), seq, amp_floor);
}

}  // namespace awse

#endif  // AWSE_MDCT_HPP
