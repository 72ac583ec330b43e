// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_CORPUS_HPP
#define AWSE_CORPUS_HPP

#include <cstdint>
#include <vector>

#include "awse/signal.hpp"

namespace awse {

/// Seeded generator of stationary-versus-transient test material: harmonic
/// tone segments with abrupt onsets, short decaying clicks, white noise.
struct SyntheticCorpusConfig {
  int sample_rate = 16000;
  double duration_sec = 1.0;
  double snr_db = -6.0;
  /// Fraction of the noise energy carried by random impulses instead of
  /// white noise.
  double impulsive_noise_fraction = 0.0;
  /// One harmonic tone over the whole utterance, no clicks.
  bool stationary_only = false;
  std::uint64_t seed = 1;
};

struct SyntheticUtterance {
  Signal clean;
  Signal noisy;
  /// Sample positions of clicks.
  std::vector<Eigen::Index> transients;
  /// Sample positions of tone onsets.
  std::vector<Eigen::Index> onsets;
  /// Per-sample flag: inside a tone segment.
  std::vector<bool> tonal;
};

SyntheticUtterance make_synthetic_utterance(const SyntheticCorpusConfig& config, std::uint64_t index);

std::vector<SyntheticUtterance> make_synthetic_corpus(const SyntheticCorpusConfig& config, std::size_t count,
                                                      std::uint64_t first_index = 0);

/// Frames of `frame_len` containing at least one click.
std::vector<bool> transient_frames(const SyntheticUtterance& utt, Eigen::Index frame_len);

/// Frames lying inside a tone segment with no click or tone onset in the
/// frame or its two neighbours.
std::vector<bool> stationary_frames(const SyntheticUtterance& utt, Eigen::Index frame_len);

}  // namespace awse

#endif  // AWSE_CORPUS_HPP
