#include <doctest.h>

#include <cmath>
#include <random>

#include "atphase/couplings.hpp"
#include "atphase/weight_oracle.hpp"

using namespace atphase;

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

TEST_CASE("rotation couplings at pinned points") {
  const auto zero = rotation_couplings(0.0, RotationAxis(1.1, 0.3));
  CHECK(zero.j1 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(zero.j2 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(zero.k == doctest::Approx(1.0).epsilon(1e-15));

  const auto ising = rotation_couplings(2.0 - kSqrt2, RotationAxis::pure_z());
  CHECK(ising.j1 == doctest::Approx(kSqrt2 - 1.0).epsilon(1e-14));
  CHECK(ising.j2 == doctest::Approx(kSqrt2 - 1.0).epsilon(1e-14));
  CHECK(ising.k == doctest::Approx(1.0).epsilon(1e-14));

  const auto y = rotation_couplings(0.5, RotationAxis::pure_y());
  CHECK(y.j1 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(y.j2 == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(y.k == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(rotation_couplings(1.5, RotationAxis::pure_z()), ValidationError);
}

TEST_CASE("amplitude damping couplings at pinned points") {
  const auto g0 = amp_damp_couplings(0.0);
  CHECK(g0.j1 == 0.0);
  CHECK(g0.j2 == 0.0);
  CHECK(g0.k == 1.0);

  const auto g1 = amp_damp_couplings(1.0);
  CHECK(g1.j1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(g1.j2) <= 1e-15);
  CHECK(std::abs(g1.k) <= 1e-15);

  const auto g03 = amp_damp_couplings(0.3);
  CHECK(g03.j1 == doctest::Approx(0.39 / 1.79).epsilon(1e-14));
  CHECK(g03.j2 == doctest::Approx(-0.21 / 1.79).epsilon(1e-14));
  CHECK(g03.k == doctest::Approx(1.19 / 1.79).epsilon(1e-14));
}

TEST_CASE("rotation coupling bounds hold over the sphere") {
  // K in [0,1] and J1 >= |J2| everywhere. Three of the four weights are
  // nonnegative for every axis; W(-,+) = 2R(nx^2 - ny^2)/den turns negative
  // once the axis leans toward Y, which is where the model picks up its
  // complex Boltzmann couplings.
  for (int ir = 0; ir <= 10; ++ir)
    for (int it = 0; it <= 8; ++it)
      for (int ip = 0; ip <= 8; ++ip) {
        const double r = ir / 10.0;
        const RotationAxis axis(kPi * it / 8.0, 2.0 * kPi * ip / 8.0);
        const auto at = rotation_couplings(r, axis);
        CHECK(at.k >= -1e-14);
        CHECK(at.k <= 1.0 + 1e-14);
        CHECK(at.j1 >= std::abs(at.j2) - 1e-14);
        CHECK(at.weight(+1, +1) >= -1e-14);
        CHECK(at.weight(+1, -1) >= -1e-14);
        CHECK(at.weight(-1, -1) >= -1e-14);
        const auto n = axis.unit();
        const double den = 2.0 - r + r * n.x() * n.x();
        CHECK(at.weight(-1, +1) ==
              doctest::Approx(2.0 * r * (n.x() * n.x() - n.y() * n.y()) / den).epsilon(1e-12));
        if (n.y() * n.y() <= n.x() * n.x()) CHECK(at.weight(-1, +1) >= -1e-14);
      }
  for (int ig = 0; ig <= 20; ++ig) {
    const auto at = amp_damp_couplings(ig / 20.0);
    for (int u : {-1, 1})
      for (int v : {-1, 1}) CHECK(at.weight(u, v) >= -1e-14);
  }
}

TEST_CASE("boltzmann form: noiseless point and finite-limit handling") {
  const auto b = boltzmann_form(ATCouplings{0.0, 0.0, 1.0});
  CHECK(std::abs(b.t1) <= 1e-15);
  CHECK(std::abs(b.t2) <= 1e-15);
  CHECK(std::abs(b.tk - Complex(1.0, 0.0)) <= 1e-15);

  const auto s = boltzmann_form(ATCouplings{1.0, 0.0, 0.0});  // gamma = 1 damping
  CHECK(std::abs(s.t1 - Complex(1.0, 0.0)) <= 1e-15);
  CHECK(std::abs(s.t2) <= 1e-15);
  CHECK(std::abs(s.tk) <= 1e-15);
}

TEST_CASE("boltzmann form: damping couplings saturate on the zero-weight surface, pure-Y turns complex") {
  // The damping weight obeys w(-,+) = 1 - J+ - J- - K = 0 identically, so the
  // exponential form is degenerate for every gamma in (0,1): the tanh triple is
  // the real saturated limit (+1, -1, +1), not an interior point.
  for (double g : {0.1, 0.3, 0.7}) {
    const auto at = amp_damp_couplings(g);
    CHECK(std::abs(at.weight(-1, +1)) <= 1e-15);
    const auto damp = boltzmann_form(at);
    CHECK(damp.t1 == Complex(1.0, 0.0));
    CHECK(damp.t2 == Complex(-1.0, 0.0));
    CHECK(damp.tk == Complex(1.0, 0.0));
  }
  const auto y = boltzmann_form(rotation_couplings(0.5, RotationAxis::pure_y()));
  CHECK(std::abs(y.t1.imag()) + std::abs(y.t2.imag()) + std::abs(y.tk.imag()) > 1e-3);
}

TEST_CASE("tanh form reconstructs the linear couplings wherever all weights are nonzero") {
  // At a vanishing weight the tanh triple saturates to +-1 and no longer holds
  // the subleading information, so the identity is scoped to nonzero weights.
  const auto min_weight = [](const ATCouplings& at) {
    double lo = 1e300;
    for (int u : {-1, 1})
      for (int v : {-1, 1}) lo = std::min(lo, std::abs(at.weight(u, v)));
    return lo;
  };
  int covered = 0;
  for (int ir = 1; ir <= 9; ++ir)
    for (int it = 0; it <= 4; ++it)
      for (int ip = 0; ip <= 4; ++ip) {
        const auto at = rotation_couplings(ir / 10.0, RotationAxis(kPi * it / 4.0, kPi * ip / 4.0 * 2.0));
        if (min_weight(at) <= 1e-10) continue;
        ++covered;
        const auto rec = reconstruct_couplings(boltzmann_form(at));
        CHECK(std::abs(rec[0] - Complex(at.j1, 0.0)) <= 1e-10);
        CHECK(std::abs(rec[1] - Complex(at.j2, 0.0)) <= 1e-10);
        CHECK(std::abs(rec[2] - Complex(at.k, 0.0)) <= 1e-10);
      }
  CHECK(covered > 100);
  // generic weights bounded away from zero (the damping family sits on the
  // zero-weight surface and is excluded by the scoping above)
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    ATCouplings at{};
    for (;;) {
      at = {u01(rng) * 1.6 - 0.8, u01(rng) * 1.6 - 0.8, u01(rng) * 1.6 - 0.8};
      if (min_weight(at) > 0.05) break;
    }
    const auto rec = reconstruct_couplings(boltzmann_form(at));
    CHECK(std::abs(rec[0] - Complex(at.j1, 0.0)) <= 1e-10);
    CHECK(std::abs(rec[1] - Complex(at.j2, 0.0)) <= 1e-10);
    CHECK(std::abs(rec[2] - Complex(at.k, 0.0)) <= 1e-10);
  }
}

TEST_CASE("self-duality holds on the (phi=pi/4, theta=pi/2) axis and fails elsewhere") {
  const RotationAxis dual(kPi / 2.0, kPi / 4.0);
  for (double r : {0.5, 0.9}) {
    const auto b = boltzmann_form(rotation_couplings(r, dual));
    CHECK(self_duality_residual(b) <= 1e-12);
  }
  const auto z = boltzmann_form(rotation_couplings(0.5, RotationAxis::pure_z()));
  CHECK(self_duality_residual(z) > 0.1);

  CHECK_THROWS_AS(self_duality_residual(boltzmann_form(amp_damp_couplings(0.3))), ValidationError);
}

TEST_CASE("gamma <-> 1 - gamma swaps j1 and k") {
  for (int i = 0; i <= 100; ++i) {
    const double g = i / 100.0;
    const auto a = amp_damp_couplings(g);
    const auto b = amp_damp_couplings(1.0 - g);
    CHECK(std::abs(a.j1 - b.k) <= 1e-14);
    CHECK(std::abs(a.j2 - b.j2) <= 1e-14);
  }
}

TEST_CASE("cross-term bound") {
  CHECK(cross_term_bound(0.7, RotationAxis::pure_z()) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(cross_term_bound(1.0, RotationAxis(kPi / 2.0, kPi / 4.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cross_term_bound(0.5, RotationAxis(kPi / 4.0, kPi / 2.0)) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  for (int ir = 0; ir <= 5; ++ir)
    for (int it = 0; it <= 7; ++it)
      for (int ip = 0; ip <= 7; ++ip)
        CHECK(cross_term_bound(ir / 5.0, RotationAxis(kPi * it / 7.0, 2.0 * kPi * ip / 7.0)) <= 0.5 + 1e-14);
}

TEST_CASE("rotation weight oracle matches the closed-form map") {
  // dense grid lives in the acceptance suite; spec-pinned points plus a coarse grid here
  for (int ir = 0; ir <= 8; ++ir)
    for (int it = 0; it <= 6; ++it)
      for (int ip = 0; ip <= 6; ++ip) {
        const double r = ir / 8.0;
        const RotationAxis axis(kPi / 2.0 * it / 6.0, kPi / 2.0 * ip / 6.0);
        const auto oracle = weight_oracle_rotation(r, axis);
        const auto closed = rotation_couplings(r, axis);
        CHECK(oracle.max_non_at_residual <= 1e-12);
        CHECK(std::abs(oracle.at.j1 - closed.j1) <= 1e-12);
        CHECK(std::abs(oracle.at.j2 - closed.j2) <= 1e-12);
        CHECK(std::abs(oracle.at.k - closed.k) <= 1e-12);
        for (int slot = 0; slot < 4; ++slot) {
          const int u = slot < 2 ? 1 : -1;
          const int v = (slot % 2 == 0) ? 1 : -1;
          CHECK(std::abs(oracle.table[size_t(slot)] - Complex(closed.weight(u, v), 0.0)) <= 1e-12);
        }
      }
}

TEST_CASE("damping weight oracle: couplings, dropped coefficient, swap symmetry") {
  for (int i = 0; i <= 100; ++i) {
    const double g = i / 100.0;
    const auto oracle = weight_oracle_ampdamp(g);
    const auto closed = amp_damp_couplings(g);
    CHECK(std::abs(oracle.at.j1 - closed.j1) <= 1e-12);
    CHECK(std::abs(oracle.at.j2 - closed.j2) <= 1e-12);
    CHECK(std::abs(oracle.at.k - closed.k) <= 1e-12);
    CHECK(std::abs(oracle.dropped_coeff - g * (1.0 - g) / (g * g - g + 2.0)) <= 1e-12);
  }
  CHECK(weight_oracle_ampdamp(0.0).dropped_coeff == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(weight_oracle_ampdamp(0.5).dropped_coeff == doctest::Approx(0.25 / 1.75).epsilon(1e-13));
  const auto a = weight_oracle_ampdamp(0.3).at;
  const auto b = weight_oracle_ampdamp(0.7).at;
  CHECK(std::abs(a.j1 - b.k) <= 1e-12);
  CHECK(std::abs(a.j2 - b.j2) <= 1e-12);
}
