#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "atphase/couplings.hpp"
#include "atphase/errors.hpp"
#include "atphase/noise.hpp"

namespace atphase {

// Brute-force route from a doubled-space edge operator to the effective AT weight:
// the four-z sum
//   w = sum_{z, zb, z', zb'} <z', zb'| M |z, zb>
//       (1 + z u1)(1 + zb u2)(1 + z' u3)(1 + zb' u4)
// over bond variables u1 = x x', u2 = xb xb', u3 = t t', u4 = tb tb', followed by
// the closure tb tb' = u1 u2 u3 and the character transform over (u1, u2, u3).
// Everything here is independent of the closed-form coupling maps and exists to
// pin them down.

namespace detail {

// 8 coefficients of w over the characters 1, u1, u2, u3, u1u2, u2u3, u1u3, u1u2u3.
inline std::array<Complex, 8> bond_character_coefficients(const Eigen::Matrix4cd& m) {
  // z-basis index: bit ordering (z, zb) with 0 -> z=+1.
  const auto zval = [](int bit) { return bit == 0 ? 1 : -1; };
  std::array<Complex, 8> coeff{};
  for (int u1 = -1; u1 <= 1; u1 += 2)
    for (int u2 = -1; u2 <= 1; u2 += 2)
      for (int u3 = -1; u3 <= 1; u3 += 2) {
        const int u4 = u1 * u2 * u3;
        Complex w(0.0, 0.0);
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c) {
            const int zp = zval(r >> 1), zbp = zval(r & 1);
            const int z = zval(c >> 1), zb = zval(c & 1);
            w += m(r, c) * double((1 + z * u1) * (1 + zb * u2) * (1 + zp * u3) * (1 + zbp * u4));
          }
        for (int bits = 0; bits < 8; ++bits) {
          const int chi = ((bits & 1) ? u1 : 1) * ((bits & 2) ? u2 : 1) * ((bits & 4) ? u3 : 1);
          coeff[static_cast<size_t>(bits)] += w * double(chi) / 8.0;
        }
      }
  return coeff;
}

inline Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

}  // namespace detail

struct RotationWeightOracle {
  ATCouplings at;                      // recovered couplings
  std::array<Complex, 4> table{};     // normalized weights at (u,v) = (++, +-, -+, --)
  double max_non_at_residual = 0.0;    // largest character outside the AT sector
};

// Expands the cross-term-free rotation operator 1 + lambda (nx^2 XX - ny^2 YY + nz^2 ZZ)
// through the four-z sum; the result must be of pure AT form.
inline RotationWeightOracle weight_oracle_rotation(double r, const RotationAxis& axis) {
  if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("weight_oracle_rotation: R must lie in [0,1]");
  const double lambda = r / (2.0 - r);
  const Eigen::Vector3d n = axis.unit();
  Eigen::Matrix2cd x = Eigen::Matrix2cd::Zero(), y = Eigen::Matrix2cd::Zero(), z = Eigen::Matrix2cd::Zero();
  x(0, 1) = x(1, 0) = 1.0;
  y(0, 1) = Complex(0.0, -1.0);
  y(1, 0) = Complex(0.0, 1.0);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  const Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity() +
                             lambda * (n.x() * n.x() * detail::kron2(x, x) - n.y() * n.y() * detail::kron2(y, y) +
                                       n.z() * n.z() * detail::kron2(z, z));
  const auto c = detail::bond_character_coefficients(m);
  // AT sector: constant (0), u1u2 = ss' (3), u2u3 = tt' (6), u1u3 = ss'tt' (5).
  RotationWeightOracle out;
  const Complex c0 = c[0];
  out.at = {(c[3] / c0).real(), (c[6] / c0).real(), (c[5] / c0).real()};
  for (int idx : {1, 2, 4, 7})
    out.max_non_at_residual = std::max(out.max_non_at_residual, std::abs(c[static_cast<size_t>(idx)] / c0));
  int slot = 0;
  for (int u : {+1, -1})
    for (int v : {+1, -1})
      out.table[static_cast<size_t>(slot++)] =
          (c[0] + c[3] * double(u) + c[6] * double(v) + c[5] * double(u * v)) / c0;
  return out;
}

struct AmpDampWeightOracle {
  ATCouplings at;
  double dropped_coeff = 0.0;  // coefficient of the discarded (A + B + C + ABC) piece
};

// Enumerates the four-z sum with the exact EdagE of the amplitude damping channel
// and reduces it to the A, B, C bond variables; the (A+B+C+ABC) coefficient is the
// term the thermodynamic-limit argument discards.
inline AmpDampWeightOracle weight_oracle_ampdamp(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("weight_oracle_ampdamp: gamma must lie in [0,1]");
  const Eigen::Matrix4cd e = channel_superoperator(NoiseChannelSpec::amplitude_damping(gamma));
  const Eigen::Matrix4cd m = e.adjoint() * e;
  const auto c = detail::bond_character_coefficients(m);
  const Complex c0 = c[0];
  AmpDampWeightOracle out;
  // A = u1, B = u3, C = u2: CA -> u1u2 (j1 slot), BC -> u2u3 (j2 slot), AB -> u1u3 (k).
  out.at = {(c[3] / c0).real(), (c[6] / c0).real(), (c[5] / c0).real()};
  const double ca = std::abs(c[1] / c0), cb = std::abs(c[4] / c0), cc = std::abs(c[2] / c0),
               cabc = std::abs(c[7] / c0);
  const double spread = std::max({ca, cb, cc, cabc}) - std::min({ca, cb, cc, cabc});
  if (spread > 1e-12)
    throw NumericalError("weight_oracle_ampdamp: dropped-term coefficients are not a single (A+B+C+ABC) multiple");
  out.dropped_coeff = (c[1] / c0).real();
  return out;
}

}  // namespace atphase
