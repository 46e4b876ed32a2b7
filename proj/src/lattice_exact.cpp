#include "atphase/lattice_exact.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

namespace atphase {

namespace {

inline int spin_s(int m) { return (m & 1) ? -1 : +1; }
inline int spin_tau(int m) { return (m & 2) ? -1 : +1; }

inline double flipped_weight(const ATCouplings& at, const ChannelSet& f, int u, int v) {
  return 1.0 + (f.j1 ? -at.j1 : at.j1) * u + (f.j2 ? -at.j2 : at.j2) * v + (f.k ? -at.k : at.k) * u * v;
}

inline double site_value(SiteOp op, int m) {
  switch (op) {
    case SiteOp::S:
      return spin_s(m);
    case SiteOp::Tau:
      return spin_tau(m);
    case SiteOp::STau:
      return spin_s(m) * spin_tau(m);
  }
  return 1.0;
}

// One column-to-column step: diagonal of intra-column (vertical) edge weights and
// site insertions, then the tensor product of per-row 4x4 horizontal hop matrices.
struct ColumnOp {
  std::vector<double> diagonal;                    // 4^lx
  std::vector<Eigen::Matrix4d> hop;                // lx matrices, mode x
};

ColumnOp build_column_op(const TorusSpec& torus, const ATCouplings& at, const EdgeFlips& flips,
                         const std::vector<SiteInsertion>& insertions, int y) {
  const int lx = torus.lx;
  const size_t dim = size_t(1) << (2 * lx);
  ColumnOp op;
  op.diagonal.assign(dim, 1.0);
  for (size_t c = 0; c < dim; ++c) {
    double w = 1.0;
    for (int x = 0; x < lx; ++x) {
      const int m = int((c >> (2 * x)) & 3);
      const int mn = int((c >> (2 * ((x + 1) % lx))) & 3);
      w *= flipped_weight(at, flips.vertical(x, y), spin_s(m) * spin_s(mn), spin_tau(m) * spin_tau(mn));
    }
    for (const auto& ins : insertions)
      if (ins.y == y) w *= site_value(ins.op, int((c >> (2 * ins.x)) & 3));
    op.diagonal[c] = w;
  }
  op.hop.resize(static_cast<size_t>(lx));
  for (int x = 0; x < lx; ++x) {
    Eigen::Matrix4d& h = op.hop[static_cast<size_t>(x)];
    for (int mp = 0; mp < 4; ++mp)
      for (int m = 0; m < 4; ++m)
        h(mp, m) = flipped_weight(at, flips.horizontal(x, y), spin_s(m) * spin_s(mp), spin_tau(m) * spin_tau(mp));
  }
  return op;
}

// In-place v <- (tensor product of hop matrices) (diag * v) on a contiguous block
// of column vectors of length dim.
void apply_column_op(const ColumnOp& op, Complex* data, size_t dim, size_t ncols) {
  const int lx = int(op.hop.size());
  for (size_t j = 0; j < ncols; ++j) {
    Complex* v = data + j * dim;
    for (size_t c = 0; c < dim; ++c) v[c] *= op.diagonal[c];
    for (int x = 0; x < lx; ++x) {
      const Eigen::Matrix4d& h = op.hop[static_cast<size_t>(x)];
      const size_t stride = size_t(1) << (2 * x);
      const size_t block = stride * 4;
      for (size_t base = 0; base < dim; base += block) {
        for (size_t off = 0; off < stride; ++off) {
          Complex* p = v + base + off;
          const Complex a0 = p[0], a1 = p[stride], a2 = p[2 * stride], a3 = p[3 * stride];
          p[0] = h(0, 0) * a0 + h(0, 1) * a1 + h(0, 2) * a2 + h(0, 3) * a3;
          p[stride] = h(1, 0) * a0 + h(1, 1) * a1 + h(1, 2) * a2 + h(1, 3) * a3;
          p[2 * stride] = h(2, 0) * a0 + h(2, 1) * a1 + h(2, 2) * a2 + h(2, 3) * a3;
          p[3 * stride] = h(3, 0) * a0 + h(3, 1) * a1 + h(3, 2) * a2 + h(3, 3) * a3;
        }
      }
    }
  }
}

}  // namespace

void EdgeFlips::add_defect_loops(const DefectPattern& d) {
  // Defect lines are dual non-contractible loops: the flips sit on every edge
  // crossing a fixed cut, one cut per direction. (Flipping the edges of a primal
  // loop instead is gauge-trivial on width-2 tori.)
  if (d.a)
    for (int x = 0; x < lx_; ++x) flip_horizontal(x, ly_ - 1, d.channels);
  if (d.b)
    for (int y = 0; y < ly_; ++y) flip_vertical(lx_ - 1, y, d.channels);
}

void EdgeFlips::add_dual_path(std::array<int, 2> from, std::array<int, 2> to, const ChannelSet& c) {
  // Plaquette (x, y) sits at (x + 1/2, y + 1/2). Walk +x first, then +y; a +x
  // step from plaquette (x, .) crosses the horizontal edge (x+1, y)-(x+1, y+1),
  // a +y step crosses the vertical edge (x, y+1)-(x+1, y+1).
  int x = from[0], y = from[1];
  while (x != to[0]) {
    flip_horizontal(x + 1, y, c);
    x = (x + 1) % lx_;
  }
  while (y != to[1]) {
    flip_vertical(x, y + 1, c);
    y = (y + 1) % ly_;
  }
}

Complex lattice_trace(const TorusSpec& torus, const ATCouplings& at, const EdgeFlips& flips,
                      const std::vector<SiteInsertion>& insertions) {
  const int lx = torus.lx;
  const int ly = torus.ly;
  const size_t dim = size_t(1) << (2 * lx);

  std::vector<ColumnOp> ops;
  ops.reserve(static_cast<size_t>(ly));
  for (int y = 0; y < ly; ++y) ops.push_back(build_column_op(torus, at, flips, insertions, y));

  if (lx <= 6) {
    // Batched: accumulate T_{ly-1} ... T_0 applied to the identity, then trace.
    std::vector<Complex> p(dim * dim, Complex(0.0, 0.0));
    for (size_t c = 0; c < dim; ++c) p[c * dim + c] = 1.0;
    for (int y = 0; y < ly; ++y) apply_column_op(ops[static_cast<size_t>(y)], p.data(), dim, dim);
    Complex z(0.0, 0.0);
    for (size_t c = 0; c < dim; ++c) z += p[c * dim + c];
    return z;
  }

  Complex z(0.0, 0.0);
  std::vector<Complex> v(dim);
  for (size_t c = 0; c < dim; ++c) {
    std::fill(v.begin(), v.end(), Complex(0.0, 0.0));
    v[c] = 1.0;
    for (int y = 0; y < ly; ++y) apply_column_op(ops[static_cast<size_t>(y)], v.data(), dim, 1);
    z += v[c];
  }
  return z;
}

Complex partition_function(const TorusSpec& torus, const ATCouplings& at, const DefectPattern& defects) {
  EdgeFlips flips(torus);
  flips.add_defect_loops(defects);
  return lattice_trace(torus, at, flips, {});
}

Complex order_correlator(const TorusSpec& torus, const ATCouplings& at, const SeamSpec& seam) {
  if (seam.kind != SeamSpec::Kind::OrderString) throw ValidationError("order_correlator: seam is not an order string");
  if (seam.from == seam.to) throw ValidationError("order_correlator: endpoints must be distinct");
  EdgeFlips flips(torus);
  const Complex z = lattice_trace(torus, at, flips, {});
  if (z == Complex(0.0, 0.0)) throw NumericalError("order_correlator: vanishing partition function");
  const std::vector<SiteInsertion> ins = {{seam.from[0], seam.from[1], seam.op}, {seam.to[0], seam.to[1], seam.op}};
  return lattice_trace(torus, at, flips, ins) / z;
}

Complex disorder_correlator(const TorusSpec& torus, const ATCouplings& at, const SeamSpec& seam) {
  if (seam.kind != SeamSpec::Kind::DisorderSeam) throw ValidationError("disorder_correlator: seam is not a dual path");
  EdgeFlips plain(torus);
  const Complex z = lattice_trace(torus, at, plain, {});
  if (z == Complex(0.0, 0.0)) throw NumericalError("disorder_correlator: vanishing partition function");
  EdgeFlips flips(torus);
  flips.add_dual_path(seam.from, seam.to, seam.channels);
  return lattice_trace(torus, at, flips, {}) / z;
}

AnyonParameters anyon_parameters(const TorusSpec& torus, const ATCouplings& at) {
  const std::array<int, 2> origin{0, 0};
  const std::array<int, 2> far{torus.lx / 2, torus.ly / 2};
  AnyonParameters p;
  p.ii_ee = order_correlator(torus, at, SeamSpec::order_string(origin, far, SiteOp::S));
  p.ei_ei = order_correlator(torus, at, SeamSpec::order_string(origin, far, SiteOp::STau));
  // Disorder of the tau spins flips the channels odd in tau; the m Ib parameter
  // pairs it with the s disorder, flipping the channels odd under the joint flip.
  p.ii_mm = disorder_correlator(torus, at, SeamSpec::disorder_seam(origin, far, channels_tau_and_stau()));
  p.mi_mi = disorder_correlator(torus, at, SeamSpec::disorder_seam(origin, far, channels_s_and_tau()));
  return p;
}

CoherentInfo renyi2_coherent_info_detailed(const TorusSpec& torus, const ATCouplings& at) {
  CoherentInfo out;
  Complex num(0.0, 0.0), den(0.0, 0.0);
  int slot = 0;
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; b <= 1; ++b) {
      DefectPattern dn{channels_s_and_tau(), a != 0, b != 0};
      DefectPattern dd{channels_tau_and_stau(), a != 0, b != 0};
      out.z_num[static_cast<size_t>(slot)] = partition_function(torus, at, dn);
      out.z_den[static_cast<size_t>(slot)] = partition_function(torus, at, dd);
      num += out.z_num[static_cast<size_t>(slot)];
      den += out.z_den[static_cast<size_t>(slot)];
      ++slot;
    }
  double scale = 0.0;
  for (int i = 0; i < 4; ++i) scale = std::max({scale, std::abs(out.z_num[size_t(i)]), std::abs(out.z_den[size_t(i)])});
  if (std::abs(num) <= 1e-14 * scale)
    throw NumericalError("renyi2_coherent_info: degenerate sector sum (channels s&tau)");
  if (std::abs(den) <= 1e-14 * scale)
    throw NumericalError("renyi2_coherent_info: degenerate sector sum (channels tau&stau)");
  const Complex logratio = std::log(num / den);
  out.value = logratio.real();
  out.imag_magnitude = std::abs(logratio.imag());
  const double bound = 2.0 * std::log(2.0) + 1e-9;
  if (out.value > bound || out.value < -bound)
    throw NumericalError("renyi2_coherent_info: value " + std::to_string(out.value) + " outside [-2 log 2, 2 log 2]");
  return out;
}

double renyi2_coherent_info(const TorusSpec& torus, const ATCouplings& at) {
  return renyi2_coherent_info_detailed(torus, at).value;
}

double cylinder_free_energy_per_site(int lx, const ATCouplings& at) {
  const TorusSpec torus(lx, 1);
  EdgeFlips flips(torus);
  const ColumnOp op = build_column_op(torus, at, flips, {}, 0);
  const size_t dim = size_t(1) << (2 * lx);

  // Power iteration; the dominant eigenvalue is simple away from criticality.
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(static_cast<long>(dim));
  for (size_t c = 0; c < dim; ++c) v[static_cast<long>(c)] += Complex(1e-3 * std::cos(double(c)), 0.0);
  v.normalize();
  Complex lambda(0.0, 0.0);
  for (int it = 0; it < 20000; ++it) {
    Eigen::VectorXcd w = v;
    apply_column_op(op, w.data(), dim, 1);
    const Complex next = v.dot(w);  // <v, T v> with unit v
    const double wn = w.norm();
    if (wn == 0.0) throw NumericalError("cylinder_free_energy_per_site: transfer matrix annihilated the iterate");
    v = w / wn;
    if (it > 10 && std::abs(next - lambda) <= 1e-14 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::log(std::abs(lambda)) / double(lx);
}

double plane_free_energy_estimate(int lx, const ATCouplings& at) {
  if (lx < 3) throw ValidationError("plane_free_energy_estimate: need lx >= 3");
  const double f0 = cylinder_free_energy_per_site(lx - 2, at);
  const double f1 = cylinder_free_energy_per_site(lx - 1, at);
  const double f2 = cylinder_free_energy_per_site(lx, at);
  const double d1 = f1 - f0, d2 = f2 - f1;
  const double dd = d2 - d1;
  if (std::abs(dd) < 1e-300) return f2;
  const double aitken = f2 - d2 * d2 / dd;
  return std::isfinite(aitken) ? aitken : f2;
}

}  // namespace atphase
