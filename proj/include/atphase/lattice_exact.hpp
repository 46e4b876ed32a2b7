#pragma once

#include <array>
#include <complex>
#include <vector>

#include "atphase/couplings.hpp"
#include "atphase/errors.hpp"

namespace atphase {

// Finite lx x ly torus. Sites (x, y) carry an (s, tau) spin pair; vertical edges
// connect (x, y)-(x+1 mod lx, y) within a column, horizontal edges connect
// (x, y)-(x, y+1 mod ly) between columns. The column transfer matrix acts on the
// 4^lx states of one column, which caps lx.
struct TorusSpec {
  int lx = 2;
  int ly = 2;

  TorusSpec() = default;
  TorusSpec(int lx_, int ly_) : lx(lx_), ly(ly_) {
    if (lx < 1 || ly < 1) throw ValidationError("TorusSpec: dimensions must be positive");
    if (lx > 10) throw CapacityError("TorusSpec: lx > 10 exceeds the 4^lx transfer-matrix capacity");
  }
  int sites() const { return lx * ly; }
};

// Which interaction channels have their sign flipped on a marked edge.
struct ChannelSet {
  bool j1 = false;
  bool j2 = false;
  bool k = false;
};

// s and tau channels: the defect of the numerator sectors (flips under a joint
// s, tau spin flip).
inline ChannelSet channels_s_and_tau() { return {true, true, false}; }
// tau and s tau channels: the defect of the denominator sectors (tau spin flip).
inline ChannelSet channels_tau_and_stau() { return {false, true, true}; }

// Sign flips along non-contractible loops: a marks the loop winding in the
// column (y) direction, b the loop winding in the row (x) direction.
struct DefectPattern {
  ChannelSet channels;
  bool a = false;
  bool b = false;
};

enum class SiteOp { S, Tau, STau };

struct SeamSpec {
  enum class Kind { OrderString, DisorderSeam };
  Kind kind = Kind::OrderString;
  std::array<int, 2> from{0, 0};
  std::array<int, 2> to{0, 0};
  SiteOp op = SiteOp::S;        // OrderString: which spin product is inserted
  ChannelSet channels;          // DisorderSeam: which channels flip across the path

  static SeamSpec order_string(std::array<int, 2> i, std::array<int, 2> j, SiteOp op) {
    SeamSpec s;
    s.kind = Kind::OrderString;
    s.from = i;
    s.to = j;
    s.op = op;
    return s;
  }
  // Plaquettes addressed by their lower-left corner site.
  static SeamSpec disorder_seam(std::array<int, 2> i, std::array<int, 2> j, ChannelSet channels) {
    SeamSpec s;
    s.kind = Kind::DisorderSeam;
    s.from = i;
    s.to = j;
    s.channels = channels;
    return s;
  }
};

// Per-edge channel-flip masks for one torus.
class EdgeFlips {
 public:
  explicit EdgeFlips(const TorusSpec& torus)
      : lx_(torus.lx), ly_(torus.ly), vertical_(static_cast<size_t>(lx_ * ly_)), horizontal_(static_cast<size_t>(lx_ * ly_)) {}

  void flip_vertical(int x, int y, const ChannelSet& c) { merge(vertical_[index(x, y)], c); }
  void flip_horizontal(int x, int y, const ChannelSet& c) { merge(horizontal_[index(x, y)], c); }
  const ChannelSet& vertical(int x, int y) const { return vertical_[index(x, y)]; }
  const ChannelSet& horizontal(int x, int y) const { return horizontal_[index(x, y)]; }

  // Marks the edges of the two non-contractible primal loops selected by the pattern.
  void add_defect_loops(const DefectPattern& d);
  // Marks the edges crossed by an L-shaped dual path between two plaquettes.
  void add_dual_path(std::array<int, 2> from, std::array<int, 2> to, const ChannelSet& c);

 private:
  static void merge(ChannelSet& lhs, const ChannelSet& rhs) {
    lhs.j1 ^= rhs.j1;
    lhs.j2 ^= rhs.j2;
    lhs.k ^= rhs.k;
  }
  size_t index(int x, int y) const { return static_cast<size_t>(((y % ly_ + ly_) % ly_) * lx_ + ((x % lx_ + lx_) % lx_)); }
  int lx_, ly_;
  std::vector<ChannelSet> vertical_;
  std::vector<ChannelSet> horizontal_;
};

// Diagonal spin insertions at sites.
struct SiteInsertion {
  int x = 0;
  int y = 0;
  SiteOp op = SiteOp::S;
};

// Exact Z with arbitrary edge flips and site insertions, by dense column
// transfer matrices. O(ly lx 16^lx) time; lx <= 6 uses a batched product, larger
// sizes fall back to a per-basis-vector trace.
Complex lattice_trace(const TorusSpec& torus, const ATCouplings& at, const EdgeFlips& flips,
                      const std::vector<SiteInsertion>& insertions);

Complex partition_function(const TorusSpec& torus, const ATCouplings& at, const DefectPattern& defects);

Complex order_correlator(const TorusSpec& torus, const ATCouplings& at, const SeamSpec& seam);
Complex disorder_correlator(const TorusSpec& torus, const ATCouplings& at, const SeamSpec& seam);

// (<<I Ib | e eb>>, <<e Ib | e Ib>>, <<I Ib | m mb>>, <<m Ib | m Ib>>) at maximal
// separation: order correlators of s and s tau, then the tau and s+tau disorder
// seams.
struct AnyonParameters {
  Complex ii_ee, ei_ei, ii_mm, mi_mi;
};
AnyonParameters anyon_parameters(const TorusSpec& torus, const ATCouplings& at);

struct CoherentInfo {
  double value = 0.0;                  // Re log(sum_num / sum_den)
  double imag_magnitude = 0.0;         // |Im log(...)|, nonzero flags sign-structured weights
  std::array<Complex, 4> z_num{};     // (a,b) = (0,0), (0,1), (1,0), (1,1), channels s&tau
  std::array<Complex, 4> z_den{};     // same order, channels tau&stau
};
CoherentInfo renyi2_coherent_info_detailed(const TorusSpec& torus, const ATCouplings& at);
double renyi2_coherent_info(const TorusSpec& torus, const ATCouplings& at);

// Free energy per site of the infinite cylinder of circumference lx, from the
// dominant eigenvalue of the column transfer matrix: f = log|lambda_max| / lx.
double cylinder_free_energy_per_site(int lx, const ATCouplings& at);
// Aitken-extrapolated estimate of the plane free energy from circumferences
// {lx-2, lx-1, lx}.
double plane_free_energy_estimate(int lx, const ATCouplings& at);

// Coupling-level spin relabelings (each preserves Z on any torus):
// exchange of the s and s tau channels,
inline ATCouplings exchange_s_stau(const ATCouplings& at) { return {at.k, at.j2, at.j1}; }
// and of the tau and s tau channels.
inline ATCouplings exchange_tau_stau(const ATCouplings& at) { return {at.j1, at.k, at.j2}; }
// tau -> -tau on one sublattice; preserves Z only on bipartite (even lx, even ly) tori.
inline ATCouplings sublattice_tau_flip(const ATCouplings& at) { return {at.j1, -at.j2, -at.k}; }
// The pure-Y weight in its staggered-vertex form: exchange tau with s tau, then
// flip tau on one sublattice.
inline ATCouplings y_axis_staggered_form(const ATCouplings& at) { return sublattice_tau_flip(exchange_tau_stau(at)); }

}  // namespace atphase
