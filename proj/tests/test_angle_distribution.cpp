#include <doctest.h>

#include <cmath>
#include <complex>

#include "atphase/angle_distribution.hpp"
#include "atphase/bessel.hpp"

using namespace atphase;
using Cx = std::complex<double>;

namespace {

// Quadrature oracle: integrates the pointwise density against e^{2 i phi},
// independent of the closed forms in second_fourier_moment.
Cx quadrature_a2(const AngleDistribution& d) {
  return periodic_integral([&d](double phi) { return d.density(phi) * std::exp(Cx(0.0, 2.0 * phi)); });
}

double quadrature_norm(const AngleDistribution& d) {
  return periodic_integral([&d](double phi) { return d.density(phi); });
}

}  // namespace

TEST_CASE("densities are normalized and nonnegative") {
  const AngleDistribution dists[] = {
      AngleDistribution::uniform(),
      AngleDistribution::von_mises(0.5, 0.0),
      AngleDistribution::von_mises(3.0, 1.2),
      AngleDistribution::von_mises(15.0, -2.0),
      AngleDistribution::double_von_mises(0.5, 3.0, kPi / 2.0),
      AngleDistribution::double_von_mises(0.25, 8.0, 1.0),
  };
  for (const auto& d : dists) {
    CHECK(std::abs(quadrature_norm(d) - 1.0) <= 1e-10);
    for (double phi = -kPi; phi < kPi; phi += 0.37) CHECK(d.density(phi) >= 0.0);
  }
}

TEST_CASE("uniform and delta moments") {
  CHECK(std::abs(second_fourier_moment(AngleDistribution::uniform())) <= 1e-15);
  const Cx a2 = second_fourier_moment(AngleDistribution::delta(0.7));
  CHECK(std::abs(a2 - std::exp(Cx(0.0, 1.4))) <= 1e-15);
  CHECK(std::abs(std::abs(a2) - 1.0) <= 1e-15);
}

TEST_CASE("von Mises second moment equals I2/I0 and the quadrature oracle") {
  // Frozen from the quadrature oracle at kappa = 3 (equals I2(3)/I0(3)).
  const double frozen = 0.460009804028997;
  const AngleDistribution d = AngleDistribution::von_mises(3.0, 0.0);
  const Cx closed = second_fourier_moment(d);
  const Cx oracle = quadrature_a2(d);
  CHECK(std::abs(closed - oracle) <= 1e-12);
  CHECK(std::abs(closed.real() - frozen) <= 1e-12);
  CHECK(std::abs(closed.imag()) <= 1e-14);
}

TEST_CASE("R parameter endpoints") {
  CHECK(r_parameter(AngleDistribution::delta(0.3)) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r_parameter(AngleDistribution::uniform()) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("double von Mises R at q = 1/2 is 1 - [I2/I0]^2 cos^2(dphi)") {
  // The complementary form is fixed by the noiseless limit: kappa -> inf with
  // dphi = 0 must give R -> 0; the quadrature oracle agrees.
  for (double kappa : {1.0, 3.0, 15.0}) {
    for (double dphi : {0.0, 0.4, kPi / 2.0}) {
      const AngleDistribution d = AngleDistribution::double_von_mises(0.5, kappa, dphi);
      const double rho = bessel_i_ratio(2, kappa);
      const double formula = 1.0 - rho * rho * std::cos(dphi) * std::cos(dphi);
      CHECK(r_parameter(d) == doctest::Approx(formula).epsilon(1e-12));
      const double from_oracle = 1.0 - std::norm(quadrature_a2(d));
      CHECK(r_parameter(d) == doctest::Approx(from_oracle).epsilon(1e-11));
    }
  }
  // noiseless limit: R ~ 4/kappa at dphi = 0
  CHECK(r_parameter(AngleDistribution::double_von_mises(0.5, 500.0, 0.0)) < 1e-2);
  CHECK(r_parameter(AngleDistribution::double_von_mises(0.5, 500.0, 0.0)) <
        r_parameter(AngleDistribution::double_von_mises(0.5, 100.0, 0.0)));
}

TEST_CASE("double von Mises moment is the q-convex combination of its peaks") {
  for (double q : {0.0, 0.3, 0.5, 1.0}) {
    const double kappa = 2.5, dphi = 1.1;
    const Cx combo = q * second_fourier_moment(AngleDistribution::von_mises(kappa, 0.0)) +
                     (1.0 - q) * second_fourier_moment(AngleDistribution::von_mises(kappa, dphi));
    const Cx direct = second_fourier_moment(AngleDistribution::double_von_mises(q, kappa, dphi));
    CHECK(std::abs(combo - direct) <= 1e-12);
  }
}

TEST_CASE("R is invariant under mean shifts") {
  for (double shift : {0.0, 0.5, -1.3, 2.9}) {
    CHECK(std::abs(r_parameter(AngleDistribution::von_mises(4.0, shift)) -
                   r_parameter(AngleDistribution::von_mises(4.0, 0.0))) <= 1e-12);
  }
  // shifted tabulated density
  auto build = [](double c) {
    std::vector<double> xs, ys;
    for (int i = 0; i < 1200; ++i) {
      const double phi = -kPi + 2.0 * kPi * i / 1200.0;
      xs.push_back(phi);
      ys.push_back((1.0 + 0.6 * std::cos(2.0 * (phi - c)) + 0.3 * std::sin(phi - c)) / (2.0 * kPi));
    }
    return AngleDistribution::tabulated(xs, ys);
  };
  CHECK(std::abs(r_parameter(build(0.0)) - r_parameter(build(0.8))) <= 1e-9);
}

TEST_CASE("tabulated densities: renormalization window and rejection") {
  std::vector<double> xs, ys;
  for (int i = 0; i < 512; ++i) {
    xs.push_back(-kPi + 2.0 * kPi * i / 512.0);
    ys.push_back(1.0 / (2.0 * kPi) * (1.0 + 5e-4));  // slight file rounding
  }
  const AngleDistribution ok = AngleDistribution::tabulated(xs, ys);
  CHECK(std::abs(quadrature_norm(ok) - 1.0) <= 1e-12);

  for (auto& y : ys) y *= 1.01;  // 1% off: rejected
  CHECK_THROWS_AS(AngleDistribution::tabulated(xs, ys), ValidationError);

  ys.assign(ys.size(), 1.0 / (2.0 * kPi));
  ys[10] = -0.05;
  CHECK_THROWS_AS(AngleDistribution::tabulated(xs, ys), ValidationError);
}
