#include <doctest.h>

#include <cmath>

#include "atphase/bessel.hpp"
#include "atphase/phase_scan.hpp"

using namespace atphase;

namespace {
Observables obs_with(double ind, double ms, double mtau) {
  Observables o;
  o.indicator = ind;
  o.m_s = ms;
  o.m_tau = mtau;
  return o;
}
}  // namespace

TEST_CASE("classification thresholds") {
  CHECK(classify(obs_with(1.0, 0.01, 0.01)) == Phase::PO);
  CHECK(classify(obs_with(1.97, 0.97, 0.97)) == Phase::FM);
  CHECK(classify(obs_with(0.45, 0.0, 0.0)) == Phase::Unclassified);
  CHECK(classify(obs_with(0.1, 0.0, 0.0)) == Phase::PM);
  CHECK(classify(obs_with(1.1, 0.5, 0.0)) == Phase::Unclassified);  // PO needs small magnetizations
  CHECK(classify(obs_with(1.3, 0.0, 0.0)) == Phase::Unclassified);  // threshold gap
}

TEST_CASE("power-law fit recovers synthetic exponents exactly") {
  std::vector<double> x, y;
  for (double t : {1e-3, 2e-3, 5e-3, 1e-2, 3e-2}) {
    x.push_back(t);
    y.push_back(std::pow(t, 0.125));
  }
  CHECK(fit_power_law(x, y) == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("beta fit preconditions") {
  CtmrgOptions opts;
  opts.bond_dim = 8;
  // below the window: precondition error, nothing is computed
  CHECK_THROWS_AS(beta_exponent_fit({0.5, 0.514, 0.52, 0.53, 0.55}, 0.513, opts), ValidationError);
  // too few points
  CHECK_THROWS_AS(beta_exponent_fit({0.52, 0.53, 0.54}, 0.513, opts), ValidationError);
}

TEST_CASE("double von Mises boundary curve") {
  const double r_ising = 2.0 - std::sqrt(2.0);
  const auto b = von_mises_boundary(RotationAxis::pure_x(), r_ising, 80, 1000.0);
  CHECK_FALSE(b.empty);
  // threshold concentration solves I2/I0 = sqrt(1 - r_c)
  CHECK(bessel_i_ratio(2, b.kappa_min) == doctest::Approx(std::sqrt(1.0 - r_ising)).epsilon(1e-9));
  CHECK(b.kappa_min == doctest::Approx(5.015).epsilon(2e-3));
  CHECK(b.curve.size() > 32);
  for (const auto& [kappa, dphi] : b.curve) {
    CHECK(kappa >= b.kappa_min * (1.0 - 1e-12));
    CHECK(dphi >= 0.0);
    CHECK(dphi <= kPi / 2.0);
  }
  // sharp-peak limit: 1 - cos^2(dphi) -> r_c
  const double dphi_inf = b.curve.back().second;
  CHECK(1.0 - std::cos(dphi_inf) * std::cos(dphi_inf) == doctest::Approx(r_ising).epsilon(1e-2));

  // inside the robust region there is no boundary at all
  const auto none = von_mises_boundary(RotationAxis::pure_y(), 1.0);
  CHECK(none.empty);
  CHECK(none.curve.empty());
}

TEST_CASE("ray scan: xi peaks near the Ising transition on the pure-Z axis") {
  std::vector<double> grid;
  for (int i = 0; i <= 12; ++i) grid.push_back(0.30 + 0.40 * i / 12.0);  // 0.30 .. 0.70
  CtmrgOptions opts;
  opts.bond_dim = 8;
  opts.max_iters = 600;
  const auto res = ray_scan(RotationAxis::pure_z(), grid, opts);
  CHECK(res.records.size() == grid.size());
  for (size_t i = 0; i < res.records.size(); ++i) CHECK(res.records[i].grid_index == int(i));
  CHECK(res.boundary.method == BoundaryEstimate::Method::RayMax);
  CHECK(res.boundary.interior);
  CHECK(std::abs(res.boundary.critical - (2.0 - std::sqrt(2.0))) <= 0.04 + res.boundary.bracket);
  // deep ends classify correctly
  CHECK(res.records.front().phase == Phase::PO);
  CHECK(res.records.back().phase == Phase::FM);
}

TEST_CASE("bisection brackets the pure-Z transition at small D") {
  CtmrgOptions opts;
  opts.bond_dim = 12;
  opts.max_iters = 1200;
  const auto est = bisect_boundary(CouplingPath::rotation_ray(RotationAxis::pure_z()), 0.3, 0.9, opts, 5e-3);
  CHECK(est.method == BoundaryEstimate::Method::Bisection);
  CHECK(est.bracket <= 5e-3);
  CHECK(est.left_phase == Phase::PO);
  CHECK(est.right_phase == Phase::FM);
  CHECK(est.critical > 0.56);
  CHECK(est.critical < 0.61);
}

TEST_CASE("bisection rejects same-phase endpoints") {
  CtmrgOptions opts;
  opts.bond_dim = 8;
  opts.max_iters = 400;
  CHECK_THROWS_AS(bisect_boundary(CouplingPath::rotation_ray(RotationAxis::pure_z()), 0.05, 0.2, opts, 1e-2),
                  ValidationError);
}
