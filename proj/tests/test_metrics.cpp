// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "awse/metrics.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace awse;

TEST_CASE("sdr values") {
  const auto s = testing::random_signal(500, 1).samples;
  CHECK(sdr(s, s) == kSdrCapDb);
  CHECK(sdr(s, Vector<double>(Vector<double>::Zero(500))) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sdr(s, Vector<double>(0.9 * s)) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(sdr(s, Vector<double>(s + 1e-200 * s)) == kSdrCapDb);
  CHECK_THROWS(sdr(Vector<double>(Vector<double>::Zero(10)), Vector<double>(Vector<double>::Ones(10))));
  CHECK_THROWS(sdr(s, Vector<double>(Vector<double>::Zero(4))));

  // Half the samples right, half zeroed: error energy equals the zeroed half.
  Vector<double> ref(4), est(4);
  ref << 1, 1, 1, 1;
  est << 1, 1, 0, 0;
  CHECK(sdr(ref, est) == doctest::Approx(10.0 * std::log10(2.0)).epsilon(1e-14));
}

TEST_CASE("sdr improvement") {
  const auto c = testing::random_signal(300, 2);
  const auto n = testing::random_signal(300, 3);
  Signal noisy;
  noisy.samples = c.samples + 0.5 * n.samples;
  CHECK(sdr_improvement(c, noisy, noisy) == 0.0);
  Signal better;
  better.samples = c.samples + 0.05 * n.samples;
  CHECK(sdr_improvement(c, noisy, better) == doctest::Approx(20.0).epsilon(1e-12));

  // Scaling clean, noisy and enhanced together leaves the ratios unchanged.
  Signal c2 = c, noisy2 = noisy, better2 = better;
  c2.samples *= 3.7;
  noisy2.samples *= 3.7;
  better2.samples *= 3.7;
  CHECK(sdr(c2, better2) == doctest::Approx(sdr(c, better)).epsilon(1e-12));
  CHECK(sdr_improvement(c2, noisy2, better2) == doctest::Approx(sdr_improvement(c, noisy, better)).epsilon(1e-10));
}

TEST_CASE("segmental sdr frames") {
  Vector<double> ref = Vector<double>::Zero(10), est = Vector<double>::Zero(10);
  ref.segment(4, 6).setOnes();
  est.segment(4, 6).setConstant(0.9);
  const auto series = segmental_sdr(ref, est, 4);
  REQUIRE(series.size() == 3);
  CHECK(series.frame_len == 4);
  CHECK(series.silent == std::vector<bool>{true, false, false});
  CHECK(series.values_db[0] == 0.0);
  CHECK(series.values_db[1] == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(series.values_db[2] == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(series.mean() == doctest::Approx(20.0).epsilon(1e-12));
  const std::vector<bool> only_last{false, false, true};
  CHECK(series.mean(&only_last) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(std::isnan(segmental_sdr(Vector<double>(Vector<double>::Zero(8)), Vector<double>(Vector<double>::Zero(8)), 4).mean()));
  CHECK(segmental_sdr(ref, ref, 4).values_db[1] == kSdrCapDb);
  CHECK_THROWS(segmental_sdr(ref, est, 0));
  CHECK_THROWS(segmental_sdr(ref, Vector<double>(Vector<double>::Zero(3)), 4));
}
