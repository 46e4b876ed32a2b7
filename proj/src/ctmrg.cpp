#include "atphase/ctmrg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "atphase/errors.hpp"

namespace atphase {

namespace {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Principal square root of a small (near-)unitary matrix via its spectral
// decomposition. Used on the degenerate blocks of the con-eigenvector phase
// matrix, which are symmetric unitary.
Matrix principal_sqrt(const Matrix& g) {
  if (g.rows() == 1) return g.array().sqrt().matrix();
  Eigen::ComplexEigenSolver<Matrix> es(g);
  const Vector lam = es.eigenvalues();
  const Matrix w = es.eigenvectors();
  Vector root(lam.size());
  for (long i = 0; i < lam.size(); ++i) root[i] = std::sqrt(lam[i]);
  const Matrix out = w * root.asDiagonal() * w.inverse();
  if (!out.allFinite()) return Matrix::Identity(g.rows(), g.cols());
  return out;
}

}  // namespace

void takagi_factorize(const Eigen::MatrixXcd& m, Eigen::MatrixXcd& u, Eigen::VectorXd& s) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::BDCSVD<Matrix> svd(sym, Eigen::ComputeThinU | Eigen::ComputeThinV);
  s = svd.singularValues();
  const Matrix& u0 = svd.matrixU();
  const Matrix& v0 = svd.matrixV();
  // For symmetric input the SVD bases differ by a symmetric unitary phase
  // G = U0^dag conj(V0), block-diagonal on singular groups; its principal square
  // root Q gives con-eigenvectors U = U0 Q with sym = U diag(s) U^T.
  const Matrix g = u0.adjoint() * v0.conjugate();
  const long n = s.size();
  u = u0;
  const double scale = (n > 0) ? std::max(s[0], 1e-300) : 1.0;
  long start = 0;
  while (start < n) {
    long end = start + 1;
    while (end < n && std::abs(s[end - 1] - s[end]) <= 1e-7 * scale) ++end;
    const long len = end - start;
    // Numerically-null directions carry arbitrary SVD bases; they are truncated
    // by every caller, so no phase correction is attempted there.
    if (s[start] > 1e-14 * scale) {
      const Matrix q = principal_sqrt(g.block(start, start, len, len));
      u.middleCols(start, len) = u0.middleCols(start, len) * q;
    }
    start = end;
  }
}

namespace {

// Complex-orthogonal eigenbasis of a complex symmetric matrix: m = R diag(l) R^T
// with R^T R = 1, eigenvalues ordered by descending modulus. Eigenvectors of a
// symmetric matrix for distinct eigenvalues are automatically orthogonal under
// the bilinear form u^T v; equal-eigenvalue groups are Gram-Schmidted in that
// form. Returns false near a defective point (a kept vector with u^T u ~ 0),
// where the caller falls back to the Takagi basis.
bool con_orthogonal_eigenbasis(const Matrix& m, long needed, Matrix& r, Eigen::VectorXcd& lam) {
  Eigen::ComplexEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) return false;
  const long n = m.rows();
  std::vector<long> order(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&es](long a, long b) { return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]); });
  r.resize(n, n);
  lam.resize(n);
  for (long i = 0; i < n; ++i) {
    r.col(i) = es.eigenvectors().col(order[static_cast<size_t>(i)]);
    lam[i] = es.eigenvalues()[order[static_cast<size_t>(i)]];
  }
  const double scale = std::abs(lam[0]);
  const long check = std::min(n, needed);
  long start = 0;
  while (start < n) {
    long end = start + 1;
    while (end < n && std::abs(lam[end] - lam[start]) <= 1e-10 * std::max(scale, 1e-300)) ++end;
    for (long i = start; i < end; ++i) {
      for (long j = start; j < i; ++j) {
        const std::complex<double> c = r.col(j).transpose() * r.col(i);
        r.col(i) -= c * r.col(j);
      }
      const std::complex<double> q = r.col(i).transpose() * r.col(i);
      const double nrm2 = r.col(i).norm();
      if (i < check && std::abs(q) < 1e-10 * nrm2 * nrm2) return false;
      if (std::abs(q) > 0.0) r.col(i) /= std::sqrt(q);
    }
    start = end;
  }
  if (!r.leftCols(check).allFinite()) return false;
  return true;
}

// Enlarged corner: Cbig[(a x'),(b y')] = sum_{c,d} A[c,d,a,b] (E_c C E_d)[x',y'].
Matrix enlarge_corner(const Matrix& corner, const std::array<Matrix, 4>& edge, const VertexTensor& t) {
  const long chi = corner.rows();
  std::array<Matrix, 4> f;
  for (int d = 0; d < 4; ++d) f[static_cast<size_t>(d)] = corner * edge[static_cast<size_t>(d)];
  Matrix big = Matrix::Zero(4 * chi, 4 * chi);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Matrix block = Matrix::Zero(chi, chi);
      for (int c = 0; c < 4; ++c) {
        Matrix ec_f = Matrix::Zero(chi, chi);
        for (int d = 0; d < 4; ++d) {
          const auto w = t(c, d, a, b);
          if (w != std::complex<double>(0.0, 0.0)) ec_f += w * f[static_cast<size_t>(d)];
        }
        block += edge[static_cast<size_t>(c)] * ec_f;
      }
      big.block(a * chi, b * chi, chi, chi) = block;
    }
  return big;
}

// Enlarged edge slice e: Ebig_e[(a x),(b y)] = sum_c A[c,a,e,b] E_c[x,y].
Matrix enlarge_edge_slice(const std::array<Matrix, 4>& edge, const VertexTensor& t, int e) {
  const long chi = edge[0].rows();
  Matrix big = Matrix::Zero(4 * chi, 4 * chi);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Matrix block = Matrix::Zero(chi, chi);
      for (int c = 0; c < 4; ++c) {
        const auto w = t(c, a, e, b);
        if (w != std::complex<double>(0.0, 0.0)) block += w * edge[static_cast<size_t>(c)];
      }
      big.block(a * chi, b * chi, chi, chi) = block;
    }
  return big;
}

Eigen::VectorXd normalized_spectrum(const Eigen::VectorXd& s, int pad) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(pad);
  const double norm = s.norm();
  const long n = std::min<long>(s.size(), pad);
  if (norm > 0.0)
    for (long i = 0; i < n; ++i) out[i] = s[i] / norm;
  return out;
}

}  // namespace

CtmEnvironment ctmrg_converge(const VertexTensor& t, const CtmrgOptions& opts) {
  if (opts.bond_dim < 4) throw ValidationError("ctmrg_converge: bond dimension must be >= 4");
  if (!(opts.tol > 0.0)) throw ValidationError("ctmrg_converge: tolerance must be positive");

  // Fixed-boundary start: outer legs projected onto the (s, tau) = (+, +) product
  // state. This seeds one symmetry-broken branch, so ordered phases report their
  // spontaneous order parameter instead of the symmetric mixture.
  Eigen::Vector4cd boundary;
  for (int i = 0; i < 4; ++i) boundary[i] = t.leg_factor(0, i);

  CtmEnvironment env;
  env.corner = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) env.corner(i, j) += t(i, j, c, d) * boundary[c] * boundary[d];
  for (int e = 0; e < 4; ++e) {
    Matrix slice = Matrix::Zero(4, 4);
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y)
        for (int c = 0; c < 4; ++c) slice(x, y) += t(c, x, e, y) * boundary[c];
    env.edge[static_cast<size_t>(e)] = slice;
  }

  Eigen::VectorXd prev = normalized_spectrum(Eigen::VectorXd::Ones(1), opts.bond_dim + 4);
  env.residual = 1.0;
  for (env.iterations = 1; env.iterations <= opts.max_iters; ++env.iterations) {
    const Matrix big = enlarge_corner(env.corner, env.edge, t);

    // Spectral truncation in the complex-orthogonal eigenbasis: the inserted
    // cut operator R_chi R_chi^T is a genuine two-sided spectral projector of
    // the corner, which an SVD-based isometry pair cannot provide once the
    // corner is non-normal. Near-defective corners fall back to the Takagi
    // basis (exact for real tensors, a controlled truncation otherwise).
    Matrix r;
    Eigen::VectorXcd lam;
    Eigen::VectorXd s;
    const bool spectral_ok = con_orthogonal_eigenbasis(big, std::min<long>(opts.bond_dim + 3, big.rows()), r, lam);
    if (spectral_ok) {
      s = lam.cwiseAbs();
    } else {
      takagi_factorize(big, r, s);
    }

    long keep = std::min<long>(opts.bond_dim, s.size());
    const double scale = std::max(s[0], 1e-300);
    while (keep > 1 && s[keep - 1] < 1e-14 * scale) --keep;
    // Never cut inside a degenerate multiplet; widen by up to 3 states. Null
    // directions do not count as a multiplet.
    int widened = 0;
    while (keep < s.size() && widened < 3 && s[keep] > 1e-14 * scale &&
           std::abs(s[keep - 1] - s[keep]) <= 1e-8 * scale) {
      ++keep;
      ++widened;
    }

    const Matrix p = spectral_ok ? Matrix(r.leftCols(keep)) : Matrix(r.leftCols(keep).conjugate());
    Matrix corner_new = p.transpose() * big * p;
    std::array<Matrix, 4> edge_new;
    double edge_scale = 0.0;
    for (int e = 0; e < 4; ++e) {
      edge_new[static_cast<size_t>(e)] = p.transpose() * enlarge_edge_slice(env.edge, t, e) * p;
      edge_scale = std::max(edge_scale, edge_new[static_cast<size_t>(e)].cwiseAbs().maxCoeff());
    }
    corner_new /= scale;
    if (edge_scale > 0.0)
      for (auto& e : edge_new) e /= edge_scale;

    env.corner = std::move(corner_new);
    env.edge = std::move(edge_new);

    const Eigen::VectorXd cur = normalized_spectrum(s.head(keep), opts.bond_dim + 4);
    env.residual = (cur - prev).cwiseAbs().maxCoeff();
    prev = cur;
    env.spectrum = s.head(keep) / s.head(keep).norm();
    env.bond_dim = static_cast<int>(keep);
    if (env.residual <= opts.tol) {
      env.converged = true;
      break;
    }
  }
  env.iterations = std::min(env.iterations, opts.max_iters);
  return env;
}

namespace {

// Ring of 4 corners and 4 edges around one site, reduced to the weighted sum
// sum_{abcd} Tr(F_a F_b F_c F_d) T[a,b,c,d] with F_a = C E_a.
std::complex<double> ring_contract(const CtmEnvironment& env, const std::array<std::complex<double>, 256>& tensor) {
  std::array<Matrix, 4> f;
  for (int a = 0; a < 4; ++a) f[static_cast<size_t>(a)] = env.corner * env.edge[static_cast<size_t>(a)];
  std::array<Matrix, 16> ff;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) ff[static_cast<size_t>(a * 4 + b)] = f[static_cast<size_t>(a)] * f[static_cast<size_t>(b)];
  std::complex<double> acc(0.0, 0.0);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          const auto w = tensor[VertexTensor::idx(a, b, c, d)];
          if (w == std::complex<double>(0.0, 0.0)) continue;
          acc += w * (ff[static_cast<size_t>(a * 4 + b)].transpose().cwiseProduct(ff[static_cast<size_t>(c * 4 + d)])).sum();
        }
  return acc;
}

// Leading eigenvalues (by magnitude) of the edge channel V -> sum_a E_a V E_a,
// by Arnoldi iteration seeded with the corner.
std::array<std::complex<double>, 2> edge_channel_eigenvalues(const CtmEnvironment& env) {
  const long chi = env.corner.rows();
  const long dim = chi * chi;
  const long m = std::min<long>(dim, 48);
  const auto apply = [&env](const Matrix& v) {
    Matrix out = Matrix::Zero(v.rows(), v.cols());
    for (const auto& e : env.edge) out += e * v * e;
    return out;
  };
  std::vector<Matrix> basis;
  Matrix v0 = env.corner;
  if (v0.cwiseAbs().maxCoeff() == 0.0) v0 = Matrix::Identity(chi, chi);
  v0 /= v0.norm();
  basis.push_back(v0);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m + 1, m);
  long built = 0;
  for (long j = 0; j < m; ++j) {
    Matrix w = apply(basis[static_cast<size_t>(j)]);
    for (int pass = 0; pass < 2; ++pass)
      for (long i = 0; i <= j; ++i) {
        const std::complex<double> c = (basis[static_cast<size_t>(i)].conjugate().cwiseProduct(w)).sum();
        if (pass == 0)
          h(i, j) += c;
        w -= c * basis[static_cast<size_t>(i)];
      }
    const double nw = w.norm();
    h(j + 1, j) = nw;
    built = j + 1;
    if (nw < 1e-14) break;
    basis.push_back(w / nw);
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h.topLeftCorner(built, built));
  std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](auto a, auto b) { return std::abs(a) > std::abs(b); });
  std::array<std::complex<double>, 2> out{{0.0, 0.0}};
  if (!ev.empty()) out[0] = ev[0];
  if (ev.size() > 1) out[1] = ev[1];
  return out;
}

}  // namespace

Observables measure(const CtmEnvironment& env, const VertexTensor& t) {
  Observables obs;
  const std::complex<double> z = ring_contract(env, t.a);
  if (z == std::complex<double>(0.0, 0.0)) throw NumericalError("measure: vanishing one-site window");
  obs.m_s = ring_contract(env, t.a_s) / z;
  obs.m_tau = ring_contract(env, t.a_tau) / z;
  obs.m_stau = ring_contract(env, t.a_stau) / z;
  obs.indicator = std::abs(obs.m_stau) + 0.5 * (std::abs(obs.m_s) + std::abs(obs.m_tau));

  const auto lam = edge_channel_eigenvalues(env);
  const double a0 = std::abs(lam[0]), a1 = std::abs(lam[1]);
  if (a0 <= 0.0 || a1 <= 0.0) {
    obs.xi = 0.0;
  } else if (a0 - a1 <= 1e-14 * a0) {
    obs.xi_finite = false;
    obs.xi = std::numeric_limits<double>::infinity();
  } else {
    obs.xi = 1.0 / std::log(a0 / a1);
  }

  // Entanglement entropy of the half plane from the quarter spectrum: the
  // reduced density matrix is the normalized fourth power of the corner.
  const Eigen::VectorXd& s = env.spectrum;
  double z4 = 0.0;
  for (long i = 0; i < s.size(); ++i) z4 += std::pow(s[i], 4.0);
  double entropy = 0.0;
  for (long i = 0; i < s.size(); ++i) {
    const double p = std::pow(s[i], 4.0) / z4;
    if (p > 1e-300) entropy -= p * std::log(p);
  }
  obs.entropy = entropy;
  return obs;
}

double free_energy_per_site(const CtmEnvironment& env, const VertexTensor& t) {
  const std::complex<double> z11 = ring_contract(env, t.a);
  const Matrix c2 = env.corner * env.corner;
  const std::complex<double> z00 = (c2.transpose().cwiseProduct(c2)).sum();  // Tr(C^4)
  std::complex<double> z10(0.0, 0.0);
  for (const auto& e : env.edge) z10 += (e * c2 * e * c2).trace();
  if (z10 == std::complex<double>(0.0, 0.0)) throw NumericalError("free_energy_per_site: vanishing half window");
  return (std::log(z11) + std::log(z00) - 2.0 * std::log(z10)).real();
}

CentralChargeFit central_charge_fit(const std::vector<std::pair<double, double>>& xi_entropy) {
  if (xi_entropy.size() < 4) throw ValidationError("central_charge_fit: need at least 4 points");
  const auto n = static_cast<double>(xi_entropy.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [xi, s] : xi_entropy) {
    if (!(xi > 0.0) || !std::isfinite(xi)) throw ValidationError("central_charge_fit: xi must be positive and finite");
    const double x = std::log(xi) / 6.0;
    sx += x;
    sy += s;
    sxx += x * x;
    sxy += x * s;
    syy += s * s;
  }
  const double varx = sxx - sx * sx / n;
  if (varx <= 1e-12 * std::max(1.0, sxx)) throw NumericalError("central_charge_fit: degenerate abscissae");
  const double slope = (sxy - sx * sy / n) / varx;
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0.0;
  const double mean_y = sy / n;
  double ss_tot = 0.0;
  for (const auto& [xi, s] : xi_entropy) {
    const double x = std::log(xi) / 6.0;
    const double r = s - (slope * x + intercept);
    ss_res += r * r;
    ss_tot += (s - mean_y) * (s - mean_y);
  }
  return {slope, ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0};
}

}  // namespace atphase
