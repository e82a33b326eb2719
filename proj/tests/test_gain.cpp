#include <doctest.h>

#include <cmath>

#include "cansim/gain.hpp"

using namespace cansim;

TEST_CASE("phi: pinned values and the piecewise tail") {
  GainSchedule sched = GainSchedule::make(2.0, 2.0);
  CHECK(phi(0.0, sched) == 1.0);
  CHECK(phi(1.0, sched) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(phi(2.0, sched) == 1.0);
  CHECK(phi(7.0, sched) == 1.0);
}

TEST_CASE("gain ratio: closed form, tail, and clamp value") {
  GainSchedule sched = GainSchedule::make(2.0, 1.0);
  CHECK(gain_ratio(0.0, sched) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(gain_ratio(2.0, sched) == 0.0);
  CHECK(gain_ratio(5.0, sched) == 0.0);

  GainSchedule spec_guard = GainSchedule::make(2.0, 1.0, 1e-6);
  CHECK(gain_ratio(2.0 - 1e-9, spec_guard) == doctest::Approx(5e5).epsilon(1e-12));
  CHECK(phi(2.0 - 1e-9, spec_guard) == doctest::Approx(std::pow(1e6, 1.0)).epsilon(1e-9));
}

TEST_CASE("gain ratio times phi reproduces the derivative closed form") {
  for (double kappa : {0.5, 1.0, 2.0, 3.0}) {
    GainSchedule sched = GainSchedule::make(0.6, kappa);
    for (double frac : {0.0, 0.1, 0.5, 0.9, 0.999}) {
      const double t = frac * (sched.settling_time - 2.0 * sched.guard);
      const double lhs = gain_ratio(t, sched) * phi(t, sched);
      const double rhs =
          (kappa / sched.settling_time) * std::pow(phi(t, sched), 1.0 + 1.0 / kappa);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("phi is non-decreasing and at least one") {
  GainSchedule sched = GainSchedule::make(1.5, 2.5);
  double prev = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = 1.5 * i / 1000.0 * (1.0 - 1e-13);
    const double value = phi(t, sched);
    CHECK(value >= 1.0);
    CHECK(value >= prev);
    prev = value;
  }
}

TEST_CASE("decay envelope phi^-b exp(-a t) is non-increasing before the clamp") {
  GainSchedule sched = GainSchedule::make(0.5, 2.0);
  const double a = 1.3, b = 0.7;
  double prev = 1.0;
  for (int i = 1; i <= 2000; ++i) {
    const double t = (sched.settling_time - sched.guard) * i / 2000.0 * (1.0 - 1e-13);
    const double value = std::pow(phi(t, sched), -b) * std::exp(-a * t);
    CHECK(value <= prev * (1.0 + 1e-14));
    prev = value;
  }
  CHECK(prev < 1e-6);  // envelope collapses approaching T
}

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS(GainSchedule::make(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(GainSchedule::make(1.0, 0.0), ValidationError);
  CHECK_THROWS_AS((GainSchedule{1.0, 1.0, 2.0}.validate()), ValidationError);
}
