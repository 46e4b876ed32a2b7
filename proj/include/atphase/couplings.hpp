#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>

#include "atphase/errors.hpp"
#include "atphase/noise.hpp"

namespace atphase {

// Linear-form Ashkin-Teller edge couplings: the edge weight is
//   w(u, v) = 1 + j1 u + j2 v + k u v,   u = s_v s_v', v = tau_v tau_v'.
struct ATCouplings {
  double j1 = 0.0;
  double j2 = 0.0;
  double k = 0.0;

  double weight(int u, int v) const { return 1.0 + j1 * u + j2 * v + k * u * v; }
};

// Exponential (Boltzmann) form, stored as tanh of the couplings so the noiseless
// point K = infinity is representable exactly as tk = 1.
struct BoltzmannCouplings {
  Complex t1{0.0, 0.0};
  Complex t2{0.0, 0.0};
  Complex tk{0.0, 0.0};
};

// Eq.-of-motion of the rotation mapping: with n = (sin t sin p, cos t, sin t cos p),
//   j1 = R (nz^2 + ny^2) / (2 - R + R nx^2), j2 = R (nz^2 - ny^2) / (...),
//   k  = (2 - R - R nx^2) / (2 - R + R nx^2).
inline ATCouplings rotation_couplings(double r, const RotationAxis& axis) {
  if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("rotation_couplings: R must lie in [0,1]");
  const Eigen::Vector3d n = axis.unit();
  const double nx2 = n.x() * n.x(), ny2 = n.y() * n.y(), nz2 = n.z() * n.z();
  const double den = 2.0 - r + r * nx2;
  return {r * (nz2 + ny2) / den, r * (nz2 - ny2) / den, (2.0 - r - r * nx2) / den};
}

// Amplitude damping weight 1 + J+ ss' - J- tt' + K ss'tt' with
// J+- = gamma (1 +- gamma) / (gamma^2 - gamma + 2), K = (gamma^2 - 3 gamma + 2) / (...).
inline ATCouplings amp_damp_couplings(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("amp_damp_couplings: gamma must lie in [0,1]");
  const double den = gamma * gamma - gamma + 2.0;
  return {gamma * (1.0 + gamma) / den, -gamma * (1.0 - gamma) / den, (gamma * gamma - 3.0 * gamma + 2.0) / den};
}

namespace detail {

// tanh(1/4 log[(wa wb)/(wc wd)]) with principal-branch logs, continued to the
// finite limit when weights vanish: a zero is treated as an infinitesimal common
// regulator, so zeros split across numerator and denominator cancel.
inline Complex tanh_quarter_log_ratio(Complex wa, Complex wb, Complex wc, Complex wd) {
  const auto zero = [](Complex w) { return w == Complex(0.0, 0.0); };
  const int zn = zero(wa) + zero(wb);
  const int zd = zero(wc) + zero(wd);
  if (zn > zd) return {-1.0, 0.0};
  if (zn < zd) return {1.0, 0.0};
  const auto root = [&zero](Complex x, Complex y) {
    Complex prod(1.0, 0.0);
    if (!zero(x)) prod *= x;
    if (!zero(y)) prod *= y;
    return std::sqrt(prod);
  };
  const Complex a = root(wa, wb);
  const Complex b = root(wc, wd);
  return (a - b) / (a + b);
}

}  // namespace detail

// Exponential-form couplings from the four weight values. Quarter-log identities:
// J1 = 1/4 log[w(+,+)w(+,-)/(w(-,+)w(-,-))] and cyclic analogues; weights that are
// negative pick up i pi from the principal branch, which is where the model turns
// non-Hermitian.
inline BoltzmannCouplings boltzmann_form(const ATCouplings& at) {
  // Weights at roundoff scale are snapped to exact zeros so families that sit on
  // a zero-weight surface (amplitude damping has w(-,+) = 0 identically) take the
  // deterministic saturated limit instead of tanh values at 1 - O(1e-8).
  double wmax = 0.0;
  for (int u : {-1, 1})
    for (int v : {-1, 1}) wmax = std::max(wmax, std::abs(at.weight(u, v)));
  const auto snap = [wmax](double w) {
    return Complex(std::abs(w) <= 1e-13 * wmax ? 0.0 : w, 0.0);
  };
  const Complex wpp = snap(at.weight(+1, +1));
  const Complex wpm = snap(at.weight(+1, -1));
  const Complex wmp = snap(at.weight(-1, +1));
  const Complex wmm = snap(at.weight(-1, -1));
  if (wpp == 0.0 && wpm == 0.0 && wmp == 0.0 && wmm == 0.0)
    throw NumericalError("boltzmann_form: all four edge weights vanish");
  BoltzmannCouplings b;
  b.t1 = detail::tanh_quarter_log_ratio(wpp, wpm, wmp, wmm);
  b.t2 = detail::tanh_quarter_log_ratio(wpp, wmp, wpm, wmm);
  b.tk = detail::tanh_quarter_log_ratio(wpp, wmm, wpm, wmp);
  return b;
}

// Inverse map through the three ratio identities
//   j1 = (t1 + t2 tk)/(1 + t1 t2 tk) and cyclic.
inline std::array<Complex, 3> reconstruct_couplings(const BoltzmannCouplings& b) {
  const Complex den = 1.0 + b.t1 * b.t2 * b.tk;
  return {(b.t1 + b.t2 * b.tk) / den, (b.t2 + b.t1 * b.tk) / den, (b.tk + b.t1 * b.t2) / den};
}

// |e^{-2K} - sinh(2J)| for isotropic real couplings; zero identifies the
// self-dual axis (phi, theta) = (pi/4, pi/2) at every R.
inline double self_duality_residual(const BoltzmannCouplings& b) {
  const double scale = std::max({std::abs(b.t1), std::abs(b.t2), 1.0});
  if (std::abs(b.t1 - b.t2) > 1e-10 * scale)
    throw ValidationError("self_duality_residual: anisotropic couplings (t1 != t2)");
  if (std::abs(b.t1.imag()) > 1e-12 || std::abs(b.tk.imag()) > 1e-12)
    throw ValidationError("self_duality_residual: complex couplings");
  const double t = b.t1.real();
  const double tk = b.tk.real();
  const double exp_m2k = (1.0 - tk) / (1.0 + tk);
  const double sinh_2j = 2.0 * t / (1.0 - t * t);
  return std::abs(exp_m2k - sinh_2j);
}

// Lambda = lambda max|n_i n_j|, lambda = R/(2-R): the prefactor controlling the
// dropped diagonal-loop cross terms. Never exceeds 1/2 on the unit sphere.
inline double cross_term_bound(double r, const RotationAxis& axis) {
  if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("cross_term_bound: R must lie in [0,1]");
  const Eigen::Vector3d n = axis.unit();
  const double m = std::max({std::abs(n.x() * n.y()), std::abs(n.y() * n.z()), std::abs(n.z() * n.x())});
  return r / (2.0 - r) * m;
}

}  // namespace atphase
