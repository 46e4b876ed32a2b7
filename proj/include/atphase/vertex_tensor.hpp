#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>

#include "atphase/couplings.hpp"

namespace atphase {

// Rank-4 site tensor of the AT partition function on the square lattice, legs of
// dimension 4 each. The edge weight matrix W[(s,t),(s',t')] = 1 + j1 ss' + j2 tt'
// + k ss'tt' is diagonalized exactly by the Z2 x Z2 character basis:
//   W = M M^T,  M[m, e] = chi_e(m) sqrt(c_e),  c = (1, j1, j2, k),
// so the leg factor is an exact Autonne-Takagi split of the (complex symmetric)
// weight; negative couplings make M complex. Absorbing one factor per leg gives a
// totally leg-permutation-symmetric tensor
//   A[i,j,k,l] = sum_m M[m,i] M[m,j] M[m,k] M[m,l],
// whose closed contraction over any torus reproduces the partition function.
struct VertexTensor {
  Eigen::Matrix4cd leg_factor;                 // M above
  std::array<std::complex<double>, 256> a{};   // plain tensor
  std::array<std::complex<double>, 256> a_s{};     // s impurity
  std::array<std::complex<double>, 256> a_tau{};   // tau impurity
  std::array<std::complex<double>, 256> a_stau{};  // s tau impurity
  ATCouplings source;

  static size_t idx(int i, int j, int k, int l) {
    return static_cast<size_t>(((i * 4 + j) * 4 + k) * 4 + l);
  }
  std::complex<double> operator()(int i, int j, int k, int l) const { return a[idx(i, j, k, l)]; }
};

inline VertexTensor build_vertex_tensor(const ATCouplings& at) {
  VertexTensor t;
  t.source = at;
  const std::array<std::complex<double>, 4> c = {1.0, at.j1, at.j2, at.k};
  const auto spin_s = [](int m) { return (m & 1) ? -1.0 : 1.0; };
  const auto spin_tau = [](int m) { return (m & 2) ? -1.0 : 1.0; };
  for (int m = 0; m < 4; ++m)
    for (int e = 0; e < 4; ++e) {
      const double chi = ((e & 1) ? spin_s(m) : 1.0) * ((e & 2) ? spin_tau(m) : 1.0);
      t.leg_factor(m, e) = chi * std::sqrt(c[static_cast<size_t>(e)]);
    }
  for (int m = 0; m < 4; ++m) {
    const double s = spin_s(m), tau = spin_tau(m);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            const std::complex<double> w =
                t.leg_factor(m, i) * t.leg_factor(m, j) * t.leg_factor(m, k) * t.leg_factor(m, l);
            t.a[VertexTensor::idx(i, j, k, l)] += w;
            t.a_s[VertexTensor::idx(i, j, k, l)] += s * w;
            t.a_tau[VertexTensor::idx(i, j, k, l)] += tau * w;
            t.a_stau[VertexTensor::idx(i, j, k, l)] += s * tau * w;
          }
  }
  return t;
}

}  // namespace atphase
