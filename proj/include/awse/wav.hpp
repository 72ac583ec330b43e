// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_WAV_HPP
#define AWSE_WAV_HPP

#include <stdexcept>
#include <string>

#include "awse/signal.hpp"

namespace awse {

enum class SampleFormat { Pcm16, Float32 };

class WavError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a mono RIFF/WAVE file holding 16-bit integer or 32-bit float PCM.
/// Integer samples are divided by 32768.
Signal read_wav(const std::string& path);

/// Writes `signal` as mono WAVE. Pcm16 rounds half away from zero and clips
/// to [-32768, 32767].
void write_wav(const std::string& path, const Signal& signal, SampleFormat format);

SampleFormat parse_sample_format(const std::string& name);

}  // namespace awse

#endif  // AWSE_WAV_HPP
