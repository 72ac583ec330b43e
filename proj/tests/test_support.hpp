// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_TESTS_SUPPORT_HPP
#define AWSE_TESTS_SUPPORT_HPP

#include <filesystem>
#include <string>

#include "awse/signal.hpp"
#include "oracle.hpp"

namespace testing {

inline std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "awse_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

inline awse::Vector<double> to_eigen(const oracle::Vec& v) {
  return Eigen::Map<const awse::Vector<double>>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline oracle::Vec to_std(const awse::Vector<double>& v) { return oracle::Vec(v.data(), v.data() + v.size()); }

inline awse::Signal random_signal(Eigen::Index n, std::uint64_t seed) {
  awse::Signal s;
  s.samples = to_eigen(oracle::random_vector(static_cast<std::size_t>(n), seed));
  return s;
}

}  // namespace testing

#endif  // AWSE_TESTS_SUPPORT_HPP
