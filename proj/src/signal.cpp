// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "awse/signal.hpp"

#include <random>

namespace awse {

Mixture mix_at_snr_detailed(const Signal& clean, const Signal& noise, double snr_db,
                            std::uint64_t seed) {
  if (clean.sample_rate != noise.sample_rate)
    throw std::invalid_argument("mix_at_snr: sample rates differ");
  if (noise.size() < clean.size())
    throw std::invalid_argument("mix_at_snr: noise shorter than clean signal");
  const double clean_energy = clean.samples.squaredNorm();
  if (clean_energy == 0.0)
    throw std::invalid_argument("mix_at_snr: clean signal has zero energy");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, noise.size() - clean.size());
  Mixture out;
  out.offset = pick(rng);
  const Vector<double> segment = noise.samples.segment(out.offset, clean.size());
  const double noise_energy = segment.squaredNorm();
  if (noise_energy == 0.0)
    throw std::invalid_argument("mix_at_snr: noise segment has zero energy");

  out.gain = std::sqrt(clean_energy / (noise_energy * std::pow(10.0, snr_db / 10.0)));
  out.scaled_noise = out.gain * segment;
  out.mixture.sample_rate = clean.sample_rate;
  out.mixture.samples = clean.samples + out.scaled_noise;
  return out;
}

Signal mix_at_snr(const Signal& clean, const Signal& noise, double snr_db,
                  std::uint64_t seed) {
  return mix_at_snr_detailed(clean, noise, snr_db, seed).mixture;
}

}  // namespace awse
