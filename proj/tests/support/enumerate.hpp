#pragma once

// Brute-force partition sums for small tori: loops over all 4^(lx ly) spin
// configurations and multiplies edge weights directly. Independent of the
// transfer-matrix path in the library; used only as a test oracle.

#include <complex>
#include <vector>

#include "atphase/lattice_exact.hpp"

namespace atphase::testing {

inline std::complex<double> enumerate_trace(const TorusSpec& torus, const ATCouplings& at, const EdgeFlips& flips,
                                            const std::vector<SiteInsertion>& insertions) {
  const int lx = torus.lx, ly = torus.ly;
  const int n = lx * ly;
  if (2 * n > 26) throw ValidationError("enumerate_trace: too many sites for brute force");
  const auto spin_s = [](int m) { return (m & 1) ? -1 : +1; };
  const auto spin_tau = [](int m) { return (m & 2) ? -1 : +1; };
  const auto weight = [&at](const ChannelSet& f, int u, int v) {
    return 1.0 + (f.j1 ? -at.j1 : at.j1) * u + (f.j2 ? -at.j2 : at.j2) * v + (f.k ? -at.k : at.k) * u * v;
  };
  std::complex<double> z(0.0, 0.0);
  const size_t total = size_t(1) << (2 * n);
  for (size_t cfg = 0; cfg < total; ++cfg) {
    double w = 1.0;
    const auto m_at = [&](int x, int y) {
      const int site = ((y % ly + ly) % ly) * lx + ((x % lx + lx) % lx);
      return int((cfg >> (2 * site)) & 3);
    };
    for (int y = 0; y < ly && w != 0.0; ++y)
      for (int x = 0; x < lx; ++x) {
        const int m = m_at(x, y);
        const int mv = m_at(x + 1, y);
        const int mh = m_at(x, y + 1);
        w *= weight(flips.vertical(x, y), spin_s(m) * spin_s(mv), spin_tau(m) * spin_tau(mv));
        w *= weight(flips.horizontal(x, y), spin_s(m) * spin_s(mh), spin_tau(m) * spin_tau(mh));
      }
    for (const auto& ins : insertions) {
      const int m = m_at(ins.x, ins.y);
      switch (ins.op) {
        case SiteOp::S:
          w *= spin_s(m);
          break;
        case SiteOp::Tau:
          w *= spin_tau(m);
          break;
        case SiteOp::STau:
          w *= spin_s(m) * spin_tau(m);
          break;
      }
    }
    z += w;
  }
  return z;
}

inline std::complex<double> enumerate_partition_function(const TorusSpec& torus, const ATCouplings& at,
                                                         const DefectPattern& defects) {
  EdgeFlips flips(torus);
  flips.add_defect_loops(defects);
  return enumerate_trace(torus, at, flips, {});
}

}  // namespace atphase::testing
