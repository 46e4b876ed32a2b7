#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "atphase/bessel.hpp"
#include "atphase/errors.hpp"

namespace atphase {

inline constexpr double kPi = std::numbers::pi_v<double>;

// Uniform quadrature on the period [-pi, pi). For smooth periodic integrands the
// trapezoidal rule on equispaced nodes is spectrally accurate; 4096 nodes is far
// beyond any concentration parameter used here.
inline constexpr int kQuadNodes = 4096;

template <class F>
auto periodic_integral(F&& f) -> decltype(f(0.0)) {
  const double h = 2.0 * kPi / kQuadNodes;
  decltype(f(0.0)) acc{};
  for (int k = 0; k < kQuadNodes; ++k) acc += f(-kPi + h * k);
  return acc * h;
}

// Probability density on [-pi, pi). The mean of a distribution is carried but is
// irrelevant to every downstream quantity (only |a2| enters the phase diagram).
class AngleDistribution {
 public:
  enum class Kind { Delta, Uniform, VonMises, DoubleVonMises, Tabulated };

  static AngleDistribution delta(double epsilon) {
    AngleDistribution d;
    d.kind_ = Kind::Delta;
    d.epsilon_ = wrap_angle(epsilon);
    return d;
  }

  static AngleDistribution uniform() {
    AngleDistribution d;
    d.kind_ = Kind::Uniform;
    return d;
  }

  static AngleDistribution von_mises(double kappa, double mean) {
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ValidationError("von Mises: kappa must be finite and >= 0");
    AngleDistribution d;
    d.kind_ = Kind::VonMises;
    d.kappa_ = kappa;
    d.mean_ = wrap_angle(mean);
    return d;
  }

  // q h_{kappa,0} + (1-q) h_{kappa,delta_phi}: two equal-width peaks a distance
  // delta_phi apart.
  static AngleDistribution double_von_mises(double q, double kappa, double delta_phi) {
    if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("double von Mises: q must lie in [0,1]");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ValidationError("double von Mises: kappa must be finite and >= 0");
    AngleDistribution d;
    d.kind_ = Kind::DoubleVonMises;
    d.q_ = q;
    d.kappa_ = kappa;
    d.delta_phi_ = delta_phi;
    return d;
  }

  // Piecewise-linear density from (angle, density) samples on [-pi, pi),
  // interpolated periodically. Quadrature drift below 1e-3 is renormalized away
  // (file rounding); anything larger is rejected.
  static AngleDistribution tabulated(std::vector<double> angles, std::vector<double> densities) {
    if (angles.size() != densities.size() || angles.size() < 2)
      throw ValidationError("tabulated density: need matching angle/density columns with >= 2 rows");
    std::vector<size_t> order(angles.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return angles[a] < angles[b]; });
    AngleDistribution d;
    d.kind_ = Kind::Tabulated;
    d.grid_angles_.reserve(angles.size());
    d.grid_densities_.reserve(angles.size());
    for (size_t i : order) {
      const double a = angles[i];
      const double g = densities[i];
      if (!(a >= -kPi && a < kPi)) throw ValidationError("tabulated density: angles must lie in [-pi, pi)");
      if (!std::isfinite(g) || g < -1e-14) throw ValidationError("tabulated density: negative density value");
      d.grid_angles_.push_back(a);
      d.grid_densities_.push_back(std::max(g, 0.0));
    }
    const double z = periodic_integral([&d](double phi) { return d.density(phi); });
    if (std::abs(z - 1.0) > 1e-3) throw ValidationError("tabulated density: integral deviates from 1 by more than 1e-3");
    for (auto& g : d.grid_densities_) g /= z;
    return d;
  }

  Kind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  double kappa() const { return kappa_; }
  double mean() const { return mean_; }
  double q() const { return q_; }
  double delta_phi() const { return delta_phi_; }

  bool has_density() const { return kind_ != Kind::Delta; }

  // Pointwise density; not defined for the Delta variant.
  double density(double phi) const {
    phi = wrap_angle(phi);
    switch (kind_) {
      case Kind::Delta:
        throw ValidationError("Delta distribution has no pointwise density");
      case Kind::Uniform:
        return 1.0 / (2.0 * kPi);
      case Kind::VonMises:
        return von_mises_density(phi, kappa_, mean_);
      case Kind::DoubleVonMises:
        return q_ * von_mises_density(phi, kappa_, 0.0) + (1.0 - q_) * von_mises_density(phi, kappa_, delta_phi_);
      case Kind::Tabulated:
        return interpolate(phi);
    }
    return 0.0;
  }

  static double wrap_angle(double phi) {
    phi = std::fmod(phi + kPi, 2.0 * kPi);
    if (phi < 0.0) phi += 2.0 * kPi;
    return phi - kPi;
  }

 private:
  static double von_mises_density(double phi, double kappa, double mean) {
    // exp(kappa cos(phi - mean)) / (2 pi I0(kappa)), evaluated via the
    // exponentially scaled form so large kappa cannot overflow.
    if (kappa == 0.0) return 1.0 / (2.0 * kPi);
    const double log_i0 = log_bessel_i0(kappa);
    return std::exp(kappa * std::cos(phi - mean) - log_i0) / (2.0 * kPi);
  }

  static double log_bessel_i0(double x) {
    if (x < 20.0) return std::log(std::cyl_bessel_i(0.0, x));
    // log[e^x/sqrt(2 pi x) * S0(x)]
    double sum = 1.0, term = 1.0, prev = 1.0;
    for (int k = 1; k < 60; ++k) {
      term *= -(-(2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
      if (std::abs(term) >= prev) break;
      sum += term;
      prev = std::abs(term);
      if (prev < 1e-17) break;
    }
    return x - 0.5 * std::log(2.0 * kPi * x) + std::log(sum);
  }

  double interpolate(double phi) const {
    const auto& xs = grid_angles_;
    const auto& ys = grid_densities_;
    const size_t n = xs.size();
    auto it = std::upper_bound(xs.begin(), xs.end(), phi);
    double x0, x1, y0, y1;
    if (it == xs.begin() || it == xs.end()) {
      // periodic segment between the last and (first + 2 pi) sample
      x0 = xs[n - 1];
      x1 = xs[0] + 2.0 * kPi;
      y0 = ys[n - 1];
      y1 = ys[0];
      if (phi < x0) phi += 2.0 * kPi;
    } else {
      const size_t i = static_cast<size_t>(it - xs.begin());
      x0 = xs[i - 1];
      x1 = xs[i];
      y0 = ys[i - 1];
      y1 = ys[i];
    }
    const double t = (x1 > x0) ? (phi - x0) / (x1 - x0) : 0.0;
    return y0 + t * (y1 - y0);
  }

  Kind kind_ = Kind::Uniform;
  double epsilon_ = 0.0;
  double kappa_ = 0.0;
  double mean_ = 0.0;
  double q_ = 0.5;
  double delta_phi_ = 0.0;
  std::vector<double> grid_angles_;
  std::vector<double> grid_densities_;
};

// Second Fourier moment a2 = \int g(phi) e^{2 i phi} dphi. Closed forms where the
// moment is known; quadrature only for tabulated densities.
inline std::complex<double> second_fourier_moment(const AngleDistribution& dist) {
  using K = AngleDistribution::Kind;
  const std::complex<double> i2(0.0, 2.0);
  switch (dist.kind()) {
    case K::Delta:
      return std::exp(i2 * dist.epsilon());
    case K::Uniform:
      return {0.0, 0.0};
    case K::VonMises:
      return std::exp(i2 * dist.mean()) * bessel_i_ratio(2, dist.kappa());
    case K::DoubleVonMises: {
      const double rho = bessel_i_ratio(2, dist.kappa());
      return rho * (dist.q() + (1.0 - dist.q()) * std::exp(i2 * dist.delta_phi()));
    }
    case K::Tabulated:
      return periodic_integral([&dist, i2](double phi) { return dist.density(phi) * std::exp(i2 * phi); });
  }
  return {0.0, 0.0};
}

// R = 1 - |a2|^2, the single scalar through which any angle distribution enters
// the effective model. Note: for the double von Mises at q = 1/2 this evaluates
// to 1 - [I2/I0]^2 cos^2(delta_phi); the complementary form is required by the
// noiseless limit (kappa -> inf, delta_phi = 0 must give R = 0).
inline double r_parameter(const AngleDistribution& dist) {
  const double mag2 = std::norm(second_fourier_moment(dist));
  return std::clamp(1.0 - mag2, 0.0, 1.0);
}

}  // namespace atphase
