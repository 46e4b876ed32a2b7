#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "atphase/errors.hpp"

namespace atphase {

// Closed-form solution of the staggered vertex model equivalent to the pure-Y
// rotation weight. The tilted lattice has 2 lx x 2 ly sites; r = R/(2-R) is the
// staggering ratio and epsilon > 1 an arrow-alignment field used to probe the
// symmetry-broken branch.
struct StaggeredVertexParams {
  double r = 0.5;       // R/(2-R), in [0,1]
  double epsilon = 1.0;
  int lx = 8;
  int ly = 8;

  StaggeredVertexParams() = default;
  StaggeredVertexParams(double r_, double epsilon_, int lx_, int ly_)
      : r(r_), epsilon(epsilon_), lx(lx_), ly(ly_) {
    if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("StaggeredVertexParams: r must lie in [0,1]");
    if (!(epsilon >= 1.0)) throw ValidationError("StaggeredVertexParams: epsilon must be >= 1");
    if (lx < 1 || ly < 1) throw ValidationError("StaggeredVertexParams: sizes must be positive");
  }

  static double r_from_big_r(double big_r) {
    if (!(big_r >= 0.0 && big_r <= 1.0)) throw ValidationError("R must lie in [0,1]");
    return big_r / (2.0 - big_r);
  }
};

namespace detail {

inline double log1p_cosh(double x) {
  // 1 + cosh x = 2 cosh^2(x/2)
  const double h = std::abs(x) * 0.5;
  return std::numbers::ln2_v<double> + 2.0 * (h + std::log1p(std::exp(-2.0 * h)) - std::numbers::ln2_v<double>);
}

inline double log_binomial(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

}  // namespace detail

// Two-row transfer element for total arrow imbalance 2p:
//   T(p) = 2 eps^{2p} r^{2 lx} [1 + cosh(2p log r)],
// assembled from the explicit four arrow cases so the r -> 0 powers stay exact
// (0^0 = 1 for the aligned sectors).
inline double transfer_element(int p, const StaggeredVertexParams& params) {
  if (std::abs(p) > params.lx) throw ValidationError("transfer_element: |p| must be <= lx");
  const auto pw = [](double base, int e) { return (e == 0) ? 1.0 : std::pow(base, e); };
  const double eps2p = std::pow(params.epsilon, 2 * p);
  // cases ->-> and <-<- give r^{2 lx} each; -><- gives r^{2 lx + 2p}; <--> gives r^{2 lx - 2p}.
  return eps2p * (2.0 * pw(params.r, 2 * params.lx) + pw(params.r, 2 * params.lx + 2 * p) +
                  pw(params.r, 2 * params.lx - 2 * p));
}

// Thermodynamic correlation length xi = -1/(2 log r) of the staggered model,
// with r = R/(2-R); diverges as [4(1-R)]^{-1} for R -> 1.
inline double exact_correlation_length(double big_r) {
  if (big_r > 1.0) throw ValidationError("exact_correlation_length: R must lie in [0,1]");
  if (big_r == 1.0) return std::numeric_limits<double>::infinity();
  if (big_r == 0.0) return 0.0;
  const double r = StaggeredVertexParams::r_from_big_r(big_r);
  return -1.0 / (2.0 * std::log(r));
}

// The finite-lx expression before the limit:
//   xi = -1 / log[(1 + cosh(2(lx-1) log r)) / (1 + cosh(2 lx log r))].
inline double finite_lx_correlation_length(double big_r, int lx) {
  if (!(big_r > 0.0 && big_r < 1.0)) throw ValidationError("finite_lx_correlation_length: R must lie in (0,1)");
  if (lx < 2) throw ValidationError("finite_lx_correlation_length: lx must be >= 2");
  const double logr = std::log(StaggeredVertexParams::r_from_big_r(big_r));
  const double num = detail::log1p_cosh(2.0 * (lx - 1) * logr);
  const double den = detail::log1p_cosh(2.0 * lx * logr);
  return -1.0 / (num - den);
}

// Arrow-alignment order parameter
//   O = sum_p p C(2lx, lx+p) eps^{2 ly p} [1 + cosh(2p log r)]^{ly}
//       / (lx sum_p C(2lx, lx+p) eps^{2 ly p} [1 + cosh(2p log r)]^{ly}),
// evaluated in log space; ly in the hundreds would otherwise overflow.
inline double order_parameter(const StaggeredVertexParams& params) {
  const int lx = params.lx, ly = params.ly;
  const double logr = (params.r > 0.0) ? std::log(params.r) : -std::numeric_limits<double>::infinity();
  const double logeps = std::log(params.epsilon);
  std::vector<double> logw(static_cast<size_t>(2 * lx + 1));
  double wmax = -std::numeric_limits<double>::infinity();
  for (int p = -lx; p <= lx; ++p) {
    double lw = detail::log_binomial(2 * lx, lx + p) + 2.0 * ly * p * logeps;
    if (params.r > 0.0) {
      lw += ly * detail::log1p_cosh(2.0 * p * logr);
    } else {
      // r = 0: [1 + cosh(2p log r)] -> r^{-2|p|}/2 relative to the common r^{2 lx};
      // only the fully aligned sectors p = +-lx survive the normalization.
      lw += (std::abs(p) == lx) ? -std::numbers::ln2_v<double> : -std::numeric_limits<double>::infinity();
      if (p == 0 && lx == 0) lw = 0.0;
    }
    logw[static_cast<size_t>(p + lx)] = lw;
    wmax = std::max(wmax, lw);
  }
  if (!std::isfinite(wmax)) throw NumericalError("order_parameter: all sectors vanished");
  double num = 0.0, den = 0.0;
  for (int p = -lx; p <= lx; ++p) {
    const double w = std::exp(logw[static_cast<size_t>(p + lx)] - wmax);
    num += p * w;
    den += w;
  }
  return num / (lx * den);
}

// Thermodynamic anyon parameters for R < 1: the two confinement parameters are
// exactly 1 and finite correlation length then forces both condensation
// parameters to vanish.
inline std::array<double, 4> anyon_constants() { return {0.0, 1.0, 0.0, 1.0}; }

// log of the finite-size partition function sum_p C(2lx, lx+p) T(p)^{ly},
// for cross-checks against the lattice route.
inline double log_partition_function(const StaggeredVertexParams& params) {
  const int lx = params.lx, ly = params.ly;
  const double logeps = std::log(params.epsilon);
  if (!(params.r > 0.0)) throw ValidationError("log_partition_function: requires r > 0");
  const double logr = std::log(params.r);
  double lmax = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(static_cast<size_t>(2 * lx + 1));
  for (int p = -lx; p <= lx; ++p) {
    const double log_t = std::numbers::ln2_v<double> + 2.0 * p * logeps + 2.0 * lx * logr + detail::log1p_cosh(2.0 * p * logr);
    const double lw = detail::log_binomial(2 * lx, lx + p) + ly * log_t;
    terms[static_cast<size_t>(p + lx)] = lw;
    lmax = std::max(lmax, lw);
  }
  double acc = 0.0;
  for (double lw : terms) acc += std::exp(lw - lmax);
  return lmax + std::log(acc);
}

}  // namespace atphase
