#include "atphase/phase_scan.hpp"

#include <algorithm>
#include <cmath>

#include "atphase/angle_distribution.hpp"
#include "atphase/bessel.hpp"
#include "atphase/errors.hpp"

namespace atphase {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::PO:
      return "PO";
    case Phase::FM:
      return "FM";
    case Phase::PM:
      return "PM";
    case Phase::Unclassified:
      return "UNCLASSIFIED";
  }
  return "UNCLASSIFIED";
}

Phase classify(const Observables& obs) {
  const double ind = obs.indicator;
  if (ind >= 0.75 && ind <= 1.25 && std::abs(obs.m_s) < 0.1 && std::abs(obs.m_tau) < 0.1) return Phase::PO;
  if (ind > 1.6) return Phase::FM;
  if (ind < 0.25) return Phase::PM;
  return Phase::Unclassified;
}

CouplingPath CouplingPath::rotation_ray(const RotationAxis& axis) {
  return {"rotation theta=" + std::to_string(axis.theta) + " phi=" + std::to_string(axis.phi),
          [axis](double r) { return rotation_couplings(r, axis); }};
}

CouplingPath CouplingPath::amp_damp_line() {
  return {"amplitude-damping", [](double g) { return amp_damp_couplings(g); }};
}

ParallelFor serial_executor() {
  return [](int n, const std::function<void(int)>& body) {
    for (int i = 0; i < n; ++i) body(i);
  };
}

namespace {

ScanRecord evaluate_point(const ATCouplings& at, double param, const RotationAxis* axis, const CtmrgOptions& opts) {
  ScanRecord rec;
  rec.param = param;
  if (axis != nullptr) {
    rec.theta = axis->theta;
    rec.phi = axis->phi;
  } else {
    rec.is_gamma_line = true;
  }
  rec.bond_dim = opts.bond_dim;
  const VertexTensor t = build_vertex_tensor(at);
  const CtmEnvironment env = ctmrg_converge(t, opts);
  rec.iterations = env.iterations;
  rec.residual = env.residual;
  rec.converged = env.converged;
  rec.obs = measure(env, t);
  rec.phase = classify(rec.obs);
  return rec;
}

}  // namespace

RayScanResult ray_scan(const RotationAxis& axis, const std::vector<double>& r_grid, const CtmrgOptions& opts,
                       const ParallelFor& pfor) {
  if (!std::is_sorted(r_grid.begin(), r_grid.end())) throw ValidationError("ray_scan: grid must be sorted");
  for (double r : r_grid)
    if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("ray_scan: grid values must lie in [0,1]");

  RayScanResult out;
  out.records.resize(r_grid.size());
  pfor(static_cast<int>(r_grid.size()), [&](int i) {
    out.records[static_cast<size_t>(i)] =
        evaluate_point(rotation_couplings(r_grid[static_cast<size_t>(i)], axis), r_grid[static_cast<size_t>(i)], &axis, opts);
    out.records[static_cast<size_t>(i)].grid_index = i;
  });

  int best = -1;
  double best_xi = -1.0;
  for (size_t i = 0; i < out.records.size(); ++i) {
    const auto& rec = out.records[i];
    if (rec.obs.xi_finite && std::isfinite(rec.obs.xi) && rec.obs.xi > best_xi) {
      best_xi = rec.obs.xi;
      best = static_cast<int>(i);
    }
  }
  out.boundary.method = BoundaryEstimate::Method::RayMax;
  out.boundary.line = "rotation theta=" + std::to_string(axis.theta) + " phi=" + std::to_string(axis.phi);
  if (best >= 0) {
    out.boundary.critical = r_grid[static_cast<size_t>(best)];
    const double step_lo = best > 0 ? r_grid[static_cast<size_t>(best)] - r_grid[static_cast<size_t>(best - 1)] : 0.0;
    const double step_hi = best + 1 < static_cast<int>(r_grid.size())
                               ? r_grid[static_cast<size_t>(best + 1)] - r_grid[static_cast<size_t>(best)]
                               : 0.0;
    out.boundary.bracket = std::max(step_lo, step_hi);
    out.boundary.interior = best > 0 && best + 1 < static_cast<int>(r_grid.size());
  }
  return out;
}

BoundaryEstimate bisect_boundary(const CouplingPath& path, double lo, double hi, const CtmrgOptions& opts, double tol) {
  if (!(tol > 0.0)) throw ValidationError("bisect_boundary: tolerance must be positive");
  if (!(lo < hi)) throw ValidationError("bisect_boundary: need lo < hi");
  ScanRecord left = evaluate_point(path.couplings(lo), lo, nullptr, opts);
  ScanRecord right = evaluate_point(path.couplings(hi), hi, nullptr, opts);
  if (left.phase == right.phase)
    throw ValidationError("bisect_boundary: endpoints classify to the same phase (" + std::string(phase_name(left.phase)) + ")");

  double ind_left = left.obs.indicator;
  double ind_right = right.obs.indicator;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const ScanRecord rec = evaluate_point(path.couplings(mid), mid, nullptr, opts);
    bool go_right;
    if (rec.phase == left.phase && rec.phase != right.phase) {
      go_right = true;
    } else if (rec.phase == right.phase && rec.phase != left.phase) {
      go_right = false;
    } else {
      // Indicator-proximity tie break for the unclassified strip at the boundary.
      go_right = std::abs(rec.obs.indicator - ind_left) <= std::abs(rec.obs.indicator - ind_right);
    }
    if (go_right) {
      lo = mid;
      ind_left = rec.obs.indicator;
    } else {
      hi = mid;
      ind_right = rec.obs.indicator;
    }
  }
  BoundaryEstimate out;
  out.method = BoundaryEstimate::Method::Bisection;
  out.line = path.label;
  out.critical = 0.5 * (lo + hi);
  out.bracket = hi - lo;
  out.left_phase = left.phase;
  out.right_phase = right.phase;
  return out;
}

double fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("fit_power_law: need matching samples");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw NumericalError("fit_power_law: nonpositive sample");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double varx = sxx - sx * sx / n;
  if (varx <= 0.0) throw NumericalError("fit_power_law: degenerate abscissae");
  return (sxy - sx * sy / n) / varx;
}

double beta_exponent_fit(const std::vector<double>& gamma_values, double gamma_c2, const CtmrgOptions& opts,
                         const ParallelFor& pfor) {
  std::vector<double> t;
  for (double g : gamma_values) {
    const double dt = g - gamma_c2;
    if (dt < 1e-3 - 1e-12 || dt > 5e-2 + 1e-12)
      throw ValidationError("beta_exponent_fit: gamma - gamma_c2 must lie in [1e-3, 5e-2]");
    t.push_back(dt);
  }
  if (t.size() < 5) throw ValidationError("beta_exponent_fit: need at least 5 points");
  std::vector<double> mags(t.size(), 0.0);
  pfor(static_cast<int>(gamma_values.size()), [&](int i) {
    const ScanRecord rec =
        evaluate_point(amp_damp_couplings(gamma_values[static_cast<size_t>(i)]), gamma_values[static_cast<size_t>(i)], nullptr, opts);
    mags[static_cast<size_t>(i)] = std::abs(rec.obs.m_s);
  });
  return fit_power_law(t, mags);
}

VonMisesBoundary von_mises_boundary(const RotationAxis& /*axis*/, double r_c, int kappa_points, double kappa_max) {
  if (!(r_c > 0.0 && r_c <= 1.0)) throw ValidationError("von_mises_boundary: r_c must lie in (0,1]");
  VonMisesBoundary out;
  if (r_c >= 1.0) {
    out.empty = true;
    out.diagnostic = "R = 1 is reached only at delta_phi = pi/2; no boundary curve in the (kappa, delta_phi) plane";
    return out;
  }
  const double target = std::sqrt(1.0 - r_c);  // need I2/I0 >= target
  // I2/I0 increases monotonically from 0 toward 1; bisect for the onset.
  double lo = 1e-8, hi = kappa_max;
  if (bessel_i_ratio(2, hi) < target) {
    out.empty = true;
    out.diagnostic = "r_c unreachable below kappa_max";
    return out;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bessel_i_ratio(2, mid) < target ? lo : hi) = mid;
  }
  out.kappa_min = hi;
  for (int i = 0; i < kappa_points; ++i) {
    const double f = static_cast<double>(i) / (kappa_points - 1);
    const double kappa = out.kappa_min * std::pow(kappa_max / out.kappa_min, f);
    const double rho = bessel_i_ratio(2, kappa);
    const double c2 = (1.0 - r_c) / (rho * rho);
    if (c2 > 1.0) continue;
    out.curve.emplace_back(kappa, std::acos(std::sqrt(c2)));
  }
  return out;
}

}  // namespace atphase
