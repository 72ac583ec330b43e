// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_SIGNAL_HPP
#define AWSE_SIGNAL_HPP

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace awse {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Mono waveform with its sample rate.
template <typename Scalar>
struct BasicSignal {
  Vector<Scalar> samples;
  int sample_rate = 16000;

  Eigen::Index size() const { return samples.size(); }
};

using Signal = BasicSignal<double>;

/// Non-overlapping frames of a zero-padded signal, one frame per column.
template <typename Scalar>
struct BasicFrameSequence {
  Matrix<Scalar> frames;  // frame_len x T
  Eigen::Index frame_len = 0;
  Eigen::Index pad_len = 0;

  Eigen::Index count() const { return frames.cols(); }
  Eigen::Index source_len() const { return frames.size() - pad_len; }
};

using FrameSequence = BasicFrameSequence<double>;

/// Splits `samples` into T = ceil(len / frame_len) frames, zero-padding the
/// tail. `frame_len` must be even and at least 2.
template <typename Derived>
BasicFrameSequence<typename Derived::Scalar> frame_signal(
    const Eigen::MatrixBase<Derived>& samples, Eigen::Index frame_len) {
  using Scalar = typename Derived::Scalar;
  if (frame_len < 2 || frame_len % 2 != 0)
    throw std::invalid_argument("frame_signal: frame length must be even and >= 2");
  const Eigen::Index len = samples.size();
  const Eigen::Index count = (len + frame_len - 1) / frame_len;
  BasicFrameSequence<Scalar> seq;
  seq.frame_len = frame_len;
  seq.pad_len = count * frame_len - len;
  seq.frames = Matrix<Scalar>::Zero(frame_len, count);
  Eigen::Map<Vector<Scalar>>(seq.frames.data(), seq.frames.size()).head(len) = samples;
  return seq;
}

/// Concatenates frame columns and removes the trailing `pad_len` samples.
template <typename Derived>
Vector<typename Derived::Scalar> unframe(const Eigen::MatrixBase<Derived>& frames,
                                          Eigen::Index pad_len) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> dense = frames;
  const Eigen::Index total = dense.size();
  if (pad_len < 0 || pad_len > total)
    throw std::invalid_argument("unframe: pad length exceeds frame data");
  return Eigen::Map<const Vector<Scalar>>(dense.data(), total).head(total - pad_len);
}

/// Stacks consecutive frame pairs (x_{t-1}; x_t) as columns, t = 0..T, with
/// x_{-1} and x_T taken as zero frames. The result is 2*frame_len x (T+1).
template <typename Scalar>
Matrix<Scalar> frame_pairs(const BasicFrameSequence<Scalar>& seq) {
  const Eigen::Index n = seq.frame_len;
  const Eigen::Index count = seq.count();
  Matrix<Scalar> pairs = Matrix<Scalar>::Zero(2 * n, count + 1);
  if (count > 0) {
    pairs.bottomLeftCorner(n, count) = seq.frames;
    pairs.topRightCorner(n, count) = seq.frames;
  }
  return pairs;
}

/// Returns clean + g * noise[offset : offset + len(clean)] with the offset
/// drawn uniformly from `seed` and g chosen so the mixture has the requested
/// SNR. Throws if either energy is zero or the noise is too short.
Signal mix_at_snr(const Signal& clean, const Signal& noise, double snr_db,
                  std::uint64_t seed);

/// Details of a mixture for callers that need the scaled noise.
struct Mixture {
  Signal mixture;
  Vector<double> scaled_noise;
  double gain = 0.0;
  Eigen::Index offset = 0;
};

Mixture mix_at_snr_detailed(const Signal& clean, const Signal& noise, double snr_db,
                            std::uint64_t seed);

}  // namespace awse

#endif  // AWSE_SIGNAL_HPP
