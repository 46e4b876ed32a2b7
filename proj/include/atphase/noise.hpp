#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "atphase/angle_distribution.hpp"
#include "atphase/errors.hpp"

namespace atphase {

using Complex = std::complex<double>;

// Rotation axis in spherical coordinates with the Y-axis as polar axis:
// n = (sin t sin p, cos t, sin t cos p). theta = 0 is the pure Y rotation,
// (theta, phi) = (pi/2, 0) the pure Z rotation.
struct RotationAxis {
  double theta = 0.0;
  double phi = 0.0;

  RotationAxis() = default;
  RotationAxis(double theta_, double phi_) : theta(theta_), phi(phi_) {
    if (!(theta >= 0.0 && theta <= kPi)) throw ValidationError("RotationAxis: theta must lie in [0, pi]");
    if (!std::isfinite(phi)) throw ValidationError("RotationAxis: phi must be finite");
    phi = phi - 2.0 * kPi * std::floor(phi / (2.0 * kPi));
  }

  static RotationAxis pure_x() { return {kPi / 2.0, kPi / 2.0}; }
  static RotationAxis pure_y() { return {0.0, 0.0}; }
  static RotationAxis pure_z() { return {kPi / 2.0, 0.0}; }

  Eigen::Vector3d unit() const {
    return {std::sin(theta) * std::sin(phi), std::cos(theta), std::sin(theta) * std::cos(phi)};
  }
};

struct NoiseChannelSpec {
  enum class Kind { RandomRotation, AmplitudeDamping };

  Kind kind = Kind::RandomRotation;
  RotationAxis axis;
  AngleDistribution dist = AngleDistribution::uniform();
  double gamma = 0.0;

  static NoiseChannelSpec rotation(const RotationAxis& axis, AngleDistribution dist) {
    NoiseChannelSpec s;
    s.kind = Kind::RandomRotation;
    s.axis = axis;
    s.dist = std::move(dist);
    return s;
  }

  static NoiseChannelSpec amplitude_damping(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("amplitude damping: gamma must lie in [0,1]");
    NoiseChannelSpec s;
    s.kind = Kind::AmplitudeDamping;
    s.gamma = gamma;
    return s;
  }
};

namespace detail {

inline Eigen::Matrix2cd pauli_dot(const Eigen::Vector3d& n) {
  const Complex
      I(0.0, 1.0);
  Eigen::Matrix2cd m;
  m << n.z(), n.x() - I * n.y(), n.x() + I * n.y(), -n.z();
  return m;
}

// CJ image of a single Kraus operator: K acting on the ket copy, conj(K) on the
// bra copy. Basis order |0 0b>, |0 1b>, |1 0b>, |1 1b>.
inline Eigen::Matrix4cd kraus_pair(const Eigen::Matrix2cd& k) {
  Eigen::Matrix4cd out;
  const Eigen::Matrix2cd kc = k.conjugate();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out.block<2, 2>(2 * a, 2 * b) = k(a, b) * kc;
  return out;
}

inline Eigen::Matrix2cd rotation_unitary(const Eigen::Vector3d& n, double phi) {
  // exp(-i phi n.sigma) = cos(phi) I - i sin(phi) n.sigma
  return std::cos(phi) * Eigen::Matrix2cd::Identity() - Complex(0.0, 1.0) * std::sin(phi) * pauli_dot(n);
}

}  // namespace detail

// Doubled-space operator E = sum_a K_a (x) conj(K_a) of the single-qubit channel.
// For a random rotation this is the g-weighted quadrature of U(phi) (x) conj(U(phi));
// the conjugation is what flips the axis to n' = (nx, -ny, nz) on the copied factor.
inline Eigen::Matrix4cd channel_superoperator(const NoiseChannelSpec& spec) {
  if (spec.kind == NoiseChannelSpec::Kind::AmplitudeDamping) {
    const double g = spec.gamma;
    Eigen::Matrix2cd k0 = Eigen::Matrix2cd::Zero(), k1 = Eigen::Matrix2cd::Zero();
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - g);
    k1(0, 1) = std::sqrt(g);
    return detail::kraus_pair(k0) + detail::kraus_pair(k1);
  }

  const Eigen::Vector3d n = spec.axis.unit();
  if (spec.dist.kind() == AngleDistribution::Kind::Delta) {
    return detail::kraus_pair(detail::rotation_unitary(n, spec.dist.epsilon()));
  }
  Eigen::Matrix4cd acc = Eigen::Matrix4cd::Zero();
  const double h = 2.0 * kPi / kQuadNodes;
  for (int k = 0; k < kQuadNodes; ++k) {
    const double phi = -kPi + h * k;
    acc += spec.dist.density(phi) * detail::kraus_pair(detail::rotation_unitary(n, phi));
  }
  acc *= h;
  // Spectral radius of a CPTP superoperator is 1; treat violations as quadrature
  // failure. (The Hilbert-Schmidt operator norm genuinely exceeds 1 for
  // amplitude damping, so it is not a usable bound here.)
  const double rho = acc.eigenvalues().cwiseAbs().maxCoeff();
  if (rho > 1.0 + 1e-10) throw NumericalError("channel_superoperator: spectral radius exceeds 1 beyond tolerance");
  return acc;
}

struct StochasticReduction {
  double p = 0.0;            // \int g(phi) sin^2(phi) dphi
  double max_deviation = 0.0;  // entrywise gap to the stochastic n.sigma channel
};

// Compares the rotation superoperator against the stochastic n.sigma channel with
// probability p. For even distributions the two agree identically (the odd
// sin cos moment vanishes); for skewed distributions the deviation is reported,
// not treated as an error.
inline StochasticReduction stochastic_reduction_check(const AngleDistribution& dist, const RotationAxis& axis) {
  double p = 0.0;
  if (dist.kind() == AngleDistribution::Kind::Delta) {
    const double s = std::sin(dist.epsilon());
    p = s * s;
  } else {
    p = periodic_integral([&dist](double phi) {
      const double s = std::sin(phi);
      return dist.density(phi) * s * s;
    });
  }
  const Eigen::Vector3d n = axis.unit();
  const Eigen::Matrix2cd nsigma = detail::pauli_dot(n);
  const Eigen::Matrix4cd stochastic =
      (1.0 - p) * Eigen::Matrix4cd::Identity() + p * detail::kraus_pair(nsigma);
  const Eigen::Matrix4cd rotated = channel_superoperator(NoiseChannelSpec::rotation(axis, dist));
  return {p, (rotated - stochastic).cwiseAbs().maxCoeff()};
}

}  // namespace atphase
