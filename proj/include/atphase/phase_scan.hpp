#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "atphase/couplings.hpp"
#include "atphase/ctmrg.hpp"

namespace atphase {

enum class Phase { PO, FM, PM, Unclassified };

const char* phase_name(Phase p);

// Plateau thresholds on the indicator |<s tau>| + (|<s>| + |<tau>|)/2, which
// approaches 0 / 1 / 2 deep in the PM / PO / FM phases. Values near a boundary
// stay Unclassified on purpose.
Phase classify(const Observables& obs);

// One sweep point.
struct ScanRecord {
  int grid_index = 0;
  double param = 0.0;  // R or gamma
  double theta = 0.0;
  double phi = 0.0;
  bool is_gamma_line = false;
  int bond_dim = 0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  Observables obs;
  Phase phase = Phase::Unclassified;
};

struct BoundaryEstimate {
  enum class Method { RayMax, Bisection };
  Method method = Method::RayMax;
  std::string line;          // which axis or gamma line
  double critical = 0.0;
  double bracket = 0.0;
  bool interior = true;      // RayMax: maximum away from the grid ends
  Phase left_phase = Phase::Unclassified;
  Phase right_phase = Phase::Unclassified;
};

// A one-parameter family of couplings (rotation ray at fixed axis, or the
// amplitude damping line).
struct CouplingPath {
  std::string label;
  std::function<ATCouplings(double)> couplings;

  static CouplingPath rotation_ray(const RotationAxis& axis);
  static CouplingPath amp_damp_line();
};

// Optional executor for embarrassingly parallel grids; the CLI owns the worker
// pool and passes one in, library callers default to serial.
using ParallelFor = std::function<void(int, const std::function<void(int)>&)>;
ParallelFor serial_executor();

struct RayScanResult {
  std::vector<ScanRecord> records;
  BoundaryEstimate boundary;
};

// CTMRG at every grid point of a rotation ray; the boundary estimate is the grid
// point of maximal finite xi. Per-point non-convergence is flagged in the record.
RayScanResult ray_scan(const RotationAxis& axis, const std::vector<double>& r_grid, const CtmrgOptions& opts,
                       const ParallelFor& pfor = serial_executor());

// Bisection on the phase label. Midpoints that classify as neither endpoint
// label (the honest outcome near a continuous boundary) are assigned to the
// endpoint whose measured indicator is closer.
BoundaryEstimate bisect_boundary(const CouplingPath& path, double lo, double hi, const CtmrgOptions& opts,
                                 double tol);

// Least-squares slope of log|<s>| against log(gamma - gamma_c2); the magnet
// grows as (gamma - gamma_c2)^beta past the second damping transition.
double beta_exponent_fit(const std::vector<double>& gamma_values, double gamma_c2, const CtmrgOptions& opts,
                         const ParallelFor& pfor = serial_executor());

// Pure fit helper shared with synthetic-data tests: slope of log y vs log x.
double fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

struct VonMisesBoundary {
  bool empty = false;
  std::string diagnostic;
  double kappa_min = 0.0;                              // below this no solution exists
  std::vector<std::pair<double, double>> curve;        // (kappa, delta_phi)
};

// Solves r_parameter(DoubleVonMises(1/2, kappa, dphi)) = r_c for dphi(kappa):
// cos^2(dphi) = (1 - r_c) / [I2/I0]^2, which has solutions once the peaks are
// sharp enough. r_c = 1 is reached only on the measure-zero line dphi = pi/2, so
// no boundary exists and the curve is empty.
VonMisesBoundary von_mises_boundary(const RotationAxis& axis, double r_c, int kappa_points = 64,
                                    double kappa_max = 100.0);

}  // namespace atphase
