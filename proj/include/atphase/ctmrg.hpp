#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "atphase/vertex_tensor.hpp"

namespace atphase {

struct CtmrgOptions {
  int bond_dim = 32;
  double tol = 1e-10;     // corner-spectrum change between sweeps
  int max_iters = 5000;
};

// Converged corner/edge environment of the one-site translationally invariant
// network. The fully symmetric tensor admits the single-corner, single-edge
// scheme: corner stays complex symmetric, the edge is stored as four chi x chi
// symmetric slices over the physical leg.
struct CtmEnvironment {
  Eigen::MatrixXcd corner;
  std::array<Eigen::MatrixXcd, 4> edge;
  Eigen::VectorXd spectrum;  // corner singular values, normalized, descending
  int bond_dim = 0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Takagi factorization m = u diag(s) u^T of a complex symmetric matrix
// (SVD plus a con-eigenvector phase correction, blockwise on degenerate
// singular groups).
void takagi_factorize(const Eigen::MatrixXcd& m, Eigen::MatrixXcd& u, Eigen::VectorXd& s);

// Iterates corner/edge absorption with truncated Takagi projection until the
// corner spectrum is stationary. Non-convergence is reported in the returned
// environment, not thrown.
CtmEnvironment ctmrg_converge(const VertexTensor& t, const CtmrgOptions& opts);

struct Observables {
  std::complex<double> m_s{0.0, 0.0};
  std::complex<double> m_tau{0.0, 0.0};
  std::complex<double> m_stau{0.0, 0.0};
  double xi = 0.0;
  bool xi_finite = true;
  double entropy = 0.0;
  double indicator = 0.0;  // |<s tau>| + (|<s>| + |<tau>|)/2
};

Observables measure(const CtmEnvironment& env, const VertexTensor& t);

// Partition function per site from environment window ratios,
// log(Z11 Z00 / Z10^2); invariant under the per-iteration normalizations.
double free_energy_per_site(const CtmEnvironment& env, const VertexTensor& t);

struct CentralChargeFit {
  double c = 0.0;
  double r_squared = 0.0;
};

// Least-squares fit of S against (1/6) log xi across a bond-dimension ladder.
CentralChargeFit central_charge_fit(const std::vector<std::pair<double, double>>& xi_entropy);

}  // namespace atphase
