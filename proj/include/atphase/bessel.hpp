#pragma once

#include <cmath>
#include <vector>

#include "atphase/errors.hpp"

namespace atphase {

// Ratios I_n(x)/I_0(x) of modified Bessel functions of the first kind,
// n = 0..nmax, x >= 0. Downward (Miller) recurrence below x = 20,
// ratio of asymptotic expansions above; both avoid the e^x overflow of
// the raw functions and keep the ratios accurate to ~1e-13.
inline std::vector<double> bessel_i_ratios(int nmax, double x) {
  if (nmax < 0) throw ValidationError("bessel_i_ratios: nmax < 0");
  if (x < 0.0) throw ValidationError("bessel_i_ratios: negative argument");
  std::vector<double> out(static_cast<size_t>(nmax) + 1, 0.0);
  out[0] = 1.0;
  if (x == 0.0) return out;

  if (x < 20.0) {
    // I_{k-1}(x) = (2k/x) I_k(x) + I_{k+1}(x), seeded far above nmax and x.
    const int start = nmax + 2 + static_cast<int>(2.0 * x) + 30;
    double ip1 = 0.0;
    double ik = 1e-280;
    std::vector<double> unnorm(static_cast<size_t>(nmax) + 1, 0.0);
    for (int k = start; k >= 1; --k) {
      const double im1 = (2.0 * k / x) * ik + ip1;
      ip1 = ik;
      ik = im1;
      if (k - 1 <= nmax) unnorm[static_cast<size_t>(k - 1)] = ik;
      if (std::abs(ik) > 1e200) {  // rescale to dodge overflow
        ik *= 1e-200;
        ip1 *= 1e-200;
        for (auto& v : unnorm) v *= 1e-200;
      }
    }
    for (int n = 0; n <= nmax; ++n) out[static_cast<size_t>(n)] = unnorm[static_cast<size_t>(n)] / unnorm[0];
    return out;
  }

  // Asymptotic series I_n(x) ~ e^x/sqrt(2 pi x) * sum_k (-1)^k a_k(n)/x^k,
  // a_k(n) = prod_{j=1..k} (4n^2-(2j-1)^2) / (k! 8^k); shared prefactor cancels
  // in the ratio. Terms are summed until they stop decreasing.
  auto series = [x](int n) {
    const double mu = 4.0 * static_cast<double>(n) * n;
    double sum = 1.0;
    double term = 1.0;
    double prev = std::abs(term);
    for (int k = 1; k < 60; ++k) {
      term *= -(mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
      if (std::abs(term) >= prev) break;
      sum += term;
      prev = std::abs(term);
      if (prev < 1e-17) break;
    }
    return sum;
  };
  const double s0 = series(0);
  for (int n = 0; n <= nmax; ++n) out[static_cast<size_t>(n)] = series(n) / s0;
  return out;
}

inline double bessel_i_ratio(int n, double x) { return bessel_i_ratios(n, x)[static_cast<size_t>(n)]; }

}  // namespace atphase
