// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "awse/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace awse {
namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Eigen::Index samples_for(double seconds, int rate) {
  return static_cast<Eigen::Index>(std::llround(seconds * rate));
}

// Harmonic tone with a 0.5 ms linear ramp at both ends.
void add_tone(Vector<double>& out, std::vector<bool>& tonal, Eigen::Index begin, Eigen::Index len, int rate,
              Rng& rng) {
  const double f0 = uniform(rng, 150.0, 450.0);
  const int harmonics = std::uniform_int_distribution<int>(2, 5)(rng);
  const double level = uniform(rng, 0.075, 0.175);
  std::vector<double> amp(static_cast<std::size_t>(harmonics)), phase(static_cast<std::size_t>(harmonics));
  for (int h = 0; h < harmonics; ++h) {
    amp[static_cast<std::size_t>(h)] = level * uniform(rng, 0.4, 1.0) / (1.0 + h);
    phase[static_cast<std::size_t>(h)] = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  }
  const Eigen::Index ramp = std::max<Eigen::Index>(1, rate / 2000);
  for (Eigen::Index n = 0; n < len && begin + n < out.size(); ++n) {
    double v = 0.0;
    for (int h = 0; h < harmonics; ++h) {
      const double f = f0 * (h + 1);
      if (f >= 0.45 * rate) break;
      v += amp[static_cast<std::size_t>(h)] *
           std::sin(2.0 * std::numbers::pi * f * static_cast<double>(n) / rate + phase[static_cast<std::size_t>(h)]);
    }
    const double env = std::min({1.0, static_cast<double>(n + 1) / ramp, static_cast<double>(len - n) / ramp});
    out[begin + n] += env * v;
    tonal[static_cast<std::size_t>(begin + n)] = true;
  }
}

// Exponentially decaying broadband burst of a few milliseconds.
void add_click(Vector<double>& out, Eigen::Index at, int rate, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double peak = uniform(rng, 0.5, 1.0);
  const double decay = uniform(rng, 0.001, 0.004) * rate;
  const Eigen::Index len = static_cast<Eigen::Index>(6 * decay);
  for (Eigen::Index n = 0; n < len && at + n < out.size(); ++n)
    out[at + n] += peak * std::exp(-static_cast<double>(n) / decay) * normal(rng);
}

}  // namespace

SyntheticUtterance make_synthetic_utterance(const SyntheticCorpusConfig& config, std::uint64_t index) {
  if (config.sample_rate <= 0 || config.duration_sec <= 0.0)
    throw std::invalid_argument("synthetic corpus: positive sample rate and duration required");
  const int rate = config.sample_rate;
  const Eigen::Index len = samples_for(config.duration_sec, rate);
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  Rng rng(seq);

  SyntheticUtterance utt;
  utt.clean.sample_rate = rate;
  utt.clean.samples = Vector<double>::Zero(len);
  utt.tonal.assign(static_cast<std::size_t>(len), false);

  Eigen::Index cursor = samples_for(uniform(rng, 0.01, 0.04), rate);
  if (config.stationary_only) {
    add_tone(utt.clean.samples, utt.tonal, 0, len, rate, rng);
    utt.onsets.push_back(0);
    cursor = len;
  }
  while (cursor < len) {
    if (uniform(rng, 0.0, 1.0) < 0.6) {
      const Eigen::Index dur = samples_for(uniform(rng, 0.12, 0.3), rate);
      add_tone(utt.clean.samples, utt.tonal, cursor, dur, rate, rng);
      utt.onsets.push_back(cursor);
      cursor += dur;
    } else {
      const int clicks = std::uniform_int_distribution<int>(1, 3)(rng);
      for (int c = 0; c < clicks && cursor < len; ++c) {
        add_click(utt.clean.samples, cursor, rate, rng);
        utt.transients.push_back(cursor);
        cursor += samples_for(uniform(rng, 0.01, 0.04), rate);
      }
    }
    cursor += samples_for(uniform(rng, 0.02, 0.08), rate);
  }

  Signal noise;
  noise.sample_rate = rate;
  noise.samples = Vector<double>::Zero(2 * len);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double impulsive = std::clamp(config.impulsive_noise_fraction, 0.0, 1.0);
  for (Eigen::Index n = 0; n < noise.size(); ++n) noise.samples[n] = std::sqrt(1.0 - impulsive) * normal(rng);
  if (impulsive > 0.0) {
    Vector<double> bursts = Vector<double>::Zero(noise.size());
    for (Eigen::Index at = 0; at < noise.size(); at += samples_for(uniform(rng, 0.02, 0.1), rate))
      add_click(bursts, at, rate, rng);
    const double be = bursts.squaredNorm();
    if (be > 0.0) noise.samples += std::sqrt(impulsive * noise.size() / be) * bursts;
  }
  utt.noisy = mix_at_snr(utt.clean, noise, config.snr_db, rng());
  return utt;
}

std::vector<SyntheticUtterance> make_synthetic_corpus(const SyntheticCorpusConfig& config, std::size_t count,
                                                      std::uint64_t first_index) {
  std::vector<SyntheticUtterance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(make_synthetic_utterance(config, first_index + i));
  return out;
}

namespace {

std::vector<bool> frames_containing(const std::vector<Eigen::Index>& positions, Eigen::Index len,
                                    Eigen::Index frame_len) {
  const Eigen::Index frames = (len + frame_len - 1) / frame_len;
  std::vector<bool> out(static_cast<std::size_t>(frames), false);
  for (Eigen::Index pos : positions) out[static_cast<std::size_t>(pos / frame_len)] = true;
  return out;
}

}  // namespace

std::vector<bool> transient_frames(const SyntheticUtterance& utt, Eigen::Index frame_len) {
  return frames_containing(utt.transients, utt.clean.size(), frame_len);
}

std::vector<bool> stationary_frames(const SyntheticUtterance& utt, Eigen::Index frame_len) {
  const auto clicks = transient_frames(utt, frame_len);
  const auto onsets = frames_containing(utt.onsets, utt.clean.size(), frame_len);
  const auto frames = static_cast<Eigen::Index>(clicks.size());
  std::vector<bool> out(clicks.size(), false);
  for (Eigen::Index t = 0; t < frames; ++t) {
    bool ok = true;
    for (Eigen::Index n = t * frame_len; n < std::min((t + 1) * frame_len, utt.clean.size()); ++n)
      ok = ok && utt.tonal[static_cast<std::size_t>(n)];
    for (Eigen::Index d = -1; d <= 1 && ok; ++d) {
      const auto u = static_cast<std::size_t>(t + d);
      if (t + d >= 0 && t + d < frames && (clicks[u] || onsets[u])) ok = false;
    }
    out[static_cast<std::size_t>(t)] = ok;
  }
  return out;
}

}  // namespace awse
