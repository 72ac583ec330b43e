// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "awse/wav.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace awse {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

SampleFormat parse_sample_format(const std::string& name) {
  if (name == "pcm16") return SampleFormat::Pcm16;
  if (name == "float32") return SampleFormat::Float32;
  throw std::invalid_argument("unknown sample format: " + name);
}

Signal read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError("cannot open " + path);
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw WavError("malformed header: not a RIFF/WAVE file: " + path);

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) throw WavError("malformed header: truncated chunk in " + path);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw WavError("malformed header: short fmt chunk in " + path);
      const unsigned char* f = bytes.data() + body;
      format = le16(f);
      channels = le16(f + 2);
      rate = le32(f + 4);
      bits = le16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 40) throw WavError("malformed header: short extensible fmt chunk in " + path);
        format = le16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw WavError("malformed header: missing fmt chunk in " + path);
  if (data == nullptr) throw WavError("malformed header: missing data chunk in " + path);
  if (channels != 1)
    throw WavError("unsupported channel count: " + std::to_string(channels));
  if (rate == 0) throw WavError("malformed header: zero sample rate in " + path);

  Signal sig;
  sig.sample_rate = static_cast<int>(rate);
  if (format == kFormatPcm && bits == 16) {
    const std::size_t n = data_size / 2;
    sig.samples.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = static_cast<std::int16_t>(le16(data + 2 * i));
      sig.samples[static_cast<Eigen::Index>(i)] = static_cast<double>(v) / 32768.0;
    }
  } else if (format == kFormatFloat && bits == 32) {
    const std::size_t n = data_size / 4;
    sig.samples.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const float v = std::bit_cast<float>(le32(data + 4 * i));
      if (!std::isfinite(v)) throw WavError("non-finite sample in " + path);
      sig.samples[static_cast<Eigen::Index>(i)] = static_cast<double>(v);
    }
  } else {
    throw WavError("unsupported bit depth: format " + std::to_string(format) + ", " +
                   std::to_string(bits) + " bits");
  }
  return sig;
}

void write_wav(const std::string& path, const Signal& signal, SampleFormat format) {
  const std::uint16_t bits = format == SampleFormat::Pcm16 ? 16 : 32;
  const std::uint16_t tag = format == SampleFormat::Pcm16 ? kFormatPcm : kFormatFloat;
  const std::uint16_t block = bits / 8;
  const auto n = static_cast<std::uint32_t>(signal.size());
  const std::uint32_t data_size = n * block;

  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, tag);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(signal.sample_rate));
  put32(out, static_cast<std::uint32_t>(signal.sample_rate) * block);
  put16(out, block);
  put16(out, bits);
  put_tag(out, "data");
  put32(out, data_size);

  for (Eigen::Index i = 0; i < signal.size(); ++i) {
    const double x = signal.samples[i];
    if (format == SampleFormat::Pcm16) {
      const double scaled = std::clamp(std::round(x * 32768.0), -32768.0, 32767.0);
      put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    } else {
      put32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
    }
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw WavError("cannot open " + path + " for writing");
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw WavError("write failed: " + path);
}

}  // namespace awse
