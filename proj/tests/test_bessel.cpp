#include <doctest.h>

#include <cmath>

#include "atphase/bessel.hpp"

using atphase::bessel_i_ratio;
using atphase::bessel_i_ratios;

TEST_CASE("ratios agree with the standard library across the recurrence range") {
  for (double x : {0.1, 0.5, 1.0, 3.0, 5.0, 10.0, 15.0, 19.9}) {
    const auto r = bessel_i_ratios(5, x);
    for (int n = 0; n <= 5; ++n) {
      const double ref = std::cyl_bessel_i(double(n), x) / std::cyl_bessel_i(0.0, x);
      CHECK(std::abs(r[size_t(n)] - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("asymptotic branch matches the standard library above the crossover") {
  for (double x : {20.0, 25.0, 60.0, 200.0, 600.0}) {
    for (int n : {1, 2, 4}) {
      const double ref = std::cyl_bessel_i(double(n), x) / std::cyl_bessel_i(0.0, x);
      CHECK(std::abs(bessel_i_ratio(n, x) - ref) <= 2e-12);
    }
  }
}

TEST_CASE("crossover is continuous") {
  const double below = bessel_i_ratio(2, 20.0 - 1e-9);
  const double above = bessel_i_ratio(2, 20.0 + 1e-9);
  CHECK(std::abs(below - above) <= 1e-11);
}

TEST_CASE("limits") {
  CHECK(bessel_i_ratio(2, 0.0) == 0.0);
  CHECK(bessel_i_ratio(0, 7.3) == 1.0);
  // monotone approach to 1 at large concentration
  CHECK(bessel_i_ratio(2, 50.0) > bessel_i_ratio(2, 20.0));
  CHECK(bessel_i_ratio(2, 5000.0) > 0.999);
  CHECK(bessel_i_ratio(2, 5000.0) < 1.0);
}
