// atphase: maps single-qubit coherent noise onto Ashkin-Teller statistical
// mechanics, contracts the result with CTMRG or exact transfer matrices, and
// sweeps phase diagrams. One subcommand per module responsibility.

#include <CLI11.hpp>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include "atphase/angle_distribution.hpp"
#include "atphase/couplings.hpp"
#include "atphase/ctmrg.hpp"
#include "atphase/lattice_exact.hpp"
#include "atphase/noise.hpp"
#include "atphase/phase_scan.hpp"
#include "atphase/serialize.hpp"
#include "atphase/staggered_vertex.hpp"
#include "atphase/weight_oracle.hpp"

namespace {

using namespace atphase;

struct GridSpec {
  double lo = 0.0, hi = 1.0;
  int n = 2;
};

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  char c1 = 0, c2 = 0;
  std::istringstream ss(text);
  if (!(ss >> g.lo >> c1 >> g.hi >> c2 >> g.n) || c1 != ':' || c2 != ':' || g.n < 1)
    throw ValidationError("grid must be lo:hi:count, got '" + text + "'");
  return g;
}

std::vector<double> grid_values(const GridSpec& g) {
  std::vector<double> v(static_cast<size_t>(g.n));
  for (int i = 0; i < g.n; ++i)
    v[static_cast<size_t>(i)] = (g.n == 1) ? g.lo : g.lo + (g.hi - g.lo) * i / double(g.n - 1);
  return v;
}

TorusSpec parse_torus(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw ValidationError("torus must be LXxLY, e.g. 3x3");
  return TorusSpec(std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1)));
}

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ATPHASE_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

ParallelFor pool_executor(int workers) {
  return [workers](int n, const std::function<void(int)>& body) {
    const int nthreads = std::max(1, std::min(workers, n));
    if (nthreads == 1) {
      for (int i = 0; i < n; ++i) body(i);
      return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t)
      threads.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
      });
    for (auto& th : threads) th.join();
  };
}

std::filesystem::path resolve_out(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative())
    if (const char* env = std::getenv("ATPHASE_OUT")) p = std::filesystem::path(env) / p;
  return p;
}

void emit(const std::string& out_path, const std::string& content, const std::string& summary) {
  if (out_path.empty()) {
    std::cout << content << '\n';
  } else {
    const auto p = resolve_out(out_path);
    atomic_write(p, content + "\n");
    std::cout << summary << " -> " << p.string() << '\n';
  }
}

// Shared noise selection: either a rotation ray point (R, axis) or a damping
// strength; distributions enter through --dist / the config file and reduce to R.
struct NoiseArgs {
  std::string noise = "rotation";  // rotation | ampdamp
  double r = 0.0;
  bool has_r = false;
  double gamma = 0.0;
  double theta = kPi / 2.0;
  double phi = 0.0;
  std::string axis;  // x|y|z shortcut
  std::string dist_json;

  void attach(CLI::App* cmd, bool with_dist = true) {
    cmd->add_option("--noise", noise, "noise family: rotation | ampdamp");
    auto* r_opt = cmd->add_option("--R", r, "rotation noise strength R in [0,1]");
    cmd->add_option("--gamma", gamma, "damping parameter in [0,1]");
    cmd->add_option("--theta", theta, "axis polar angle (Y polar axis)");
    cmd->add_option("--phi", phi, "axis azimuthal angle");
    cmd->add_option("--axis", axis, "axis shortcut: x | y | z");
    if (with_dist) cmd->add_option("--dist", dist_json, "angle distribution JSON; its R overrides --R");
    cmd->callback([this, r_opt] { has_r = has_r || r_opt->count() > 0; });
  }

  RotationAxis rotation_axis() const {
    if (axis == "x") return RotationAxis::pure_x();
    if (axis == "y") return RotationAxis::pure_y();
    if (axis == "z") return RotationAxis::pure_z();
    if (!axis.empty()) throw ValidationError("unknown axis shortcut: " + axis);
    return {theta, phi};
  }

  double rotation_r() const {
    if (!dist_json.empty()) return r_parameter(angle_distribution_from_json(Json::parse(dist_json)));
    return r;
  }

  ATCouplings couplings() const {
    if (noise == "rotation") return rotation_couplings(rotation_r(), rotation_axis());
    if (noise == "ampdamp") return amp_damp_couplings(gamma);
    throw ValidationError("unknown noise family: " + noise);
  }

  Json source_json() const {
    if (noise == "ampdamp") return {{"kind", "amplitude_damping"}, {"gamma", gamma}};
    Json j = {{"kind", "rotation"}, {"R", rotation_r()}, {"theta", rotation_axis().theta}, {"phi", rotation_axis().phi}};
    if (!dist_json.empty()) j["distribution"] = Json::parse(dist_json);
    return j;
  }
};

Json observables_json(const ScanRecord& rec) { return scan_record_to_json(rec); }

ScanRecord run_point(const ATCouplings& at, double param, const CtmrgOptions& opts) {
  ScanRecord rec;
  rec.param = param;
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

int main(int argc, char** argv) {
  CLI::App app{"toric-code coherent-noise phase engine"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; command flags override its values");
  int workers_opt = 0;
  app.add_option("--workers", workers_opt, "worker threads for sweeps (default: cores, env ATPHASE_WORKERS)");
  bool deterministic = false;
  app.add_flag("--deterministic", deterministic, "pin worker count to 1 for byte-identical output");

  NoiseArgs noise;
  CtmrgOptions ctm;
  std::string out_path;
  std::string torus_text = "3x3";

  // map-couplings
  auto* cmd_map = app.add_subcommand("map-couplings", "noise spec -> AT couplings (linear and tanh form)");
  noise.attach(cmd_map);
  cmd_map->add_option("--out", out_path, "output file (default: stdout)");

  // noise-check
  auto* cmd_noise = app.add_subcommand("noise-check", "R parameter and stochastic-reduction deviation");
  noise.attach(cmd_noise);
  cmd_noise->add_option("--out", out_path, "output file");

  // ctmrg-point
  auto* cmd_point = app.add_subcommand("ctmrg-point", "converge one CTMRG point and measure");
  noise.attach(cmd_point);
  cmd_point->add_option("--D", ctm.bond_dim, "bond dimension");
  cmd_point->add_option("--tol", ctm.tol, "corner-spectrum tolerance");
  cmd_point->add_option("--max-iters", ctm.max_iters, "sweep cap");
  cmd_point->add_option("--out", out_path, "output file");

  // sweep
  auto* cmd_sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  std::string preset = "ray";
  std::string gamma_grid_text, r_grid_text = "0:1:25";
  cmd_sweep->add_option("--preset", preset, "ray | ampdamp-line | coarse-3d");
  noise.attach(cmd_sweep, false);
  cmd_sweep->add_option("--gamma-grid", gamma_grid_text, "gamma grid lo:hi:n (ampdamp-line)");
  cmd_sweep->add_option("--R-grid", r_grid_text, "R grid lo:hi:n (ray)");
  cmd_sweep->add_option("--D", ctm.bond_dim, "bond dimension");
  cmd_sweep->add_option("--tol", ctm.tol, "corner-spectrum tolerance");
  cmd_sweep->add_option("--max-iters", ctm.max_iters, "sweep cap");
  cmd_sweep->add_option("--out", out_path, "output CSV file");

  // bisect
  auto* cmd_bisect = app.add_subcommand("bisect", "locate a phase boundary on a coupling line");
  double lo = 0.0, hi = 1.0, btol = 2e-3;
  noise.attach(cmd_bisect, false);
  cmd_bisect->add_option("--lo", lo, "left end of the bracket")->required();
  cmd_bisect->add_option("--hi", hi, "right end of the bracket")->required();
  cmd_bisect->add_option("--tol", btol, "bracket tolerance");
  cmd_bisect->add_option("--D", ctm.bond_dim, "bond dimension");
  cmd_bisect->add_option("--max-iters", ctm.max_iters, "sweep cap");
  cmd_bisect->add_option("--out", out_path, "output file");

  // coherent-info
  auto* cmd_ci = app.add_subcommand("coherent-info", "Renyi-2 coherent information on a finite torus");
  noise.attach(cmd_ci);
  cmd_ci->add_option("--torus", torus_text, "torus LXxLY (lx <= 10)");
  cmd_ci->add_option("--out", out_path, "output file");

  // anyon-params
  auto* cmd_anyon = app.add_subcommand("anyon-params", "condensation/confinement parameters on a torus");
  noise.attach(cmd_anyon);
  cmd_anyon->add_option("--torus", torus_text, "torus LXxLY (lx <= 10)");
  cmd_anyon->add_option("--out", out_path, "output file");

  // staggered-vertex
  auto* cmd_sv = app.add_subcommand("staggered-vertex", "closed-form pure-Y solution: CSV of (R, xi, xi_lx, O)");
  std::string sv_grid_text = "0.05:0.95:19";
  int sv_lx = 32, sv_ly = 400;
  double sv_eps = 1.0 + 1e-6;
  cmd_sv->add_option("--R-grid", sv_grid_text, "R grid lo:hi:n");
  cmd_sv->add_option("--lx", sv_lx, "half-width of the tilted lattice");
  cmd_sv->add_option("--ly", sv_ly, "half-height of the tilted lattice");
  cmd_sv->add_option("--epsilon", sv_eps, "arrow-alignment field (> 1 breaks the symmetry)");
  cmd_sv->add_option("--out", out_path, "output CSV file");

  // fit-central-charge
  auto* cmd_cfit = app.add_subcommand("fit-central-charge", "finite-entanglement scaling across a D ladder");
  std::vector<int> ladder = {10, 16, 24, 32, 48, 64};
  noise.attach(cmd_cfit);
  cmd_cfit->add_option("--D-ladder", ladder, "bond dimensions");
  cmd_cfit->add_option("--tol", ctm.tol, "corner-spectrum tolerance");
  cmd_cfit->add_option("--max-iters", ctm.max_iters, "sweep cap");
  cmd_cfit->add_option("--out", out_path, "output file");

  // fit-beta
  auto* cmd_beta = app.add_subcommand("fit-beta", "order-parameter exponent past the second damping transition");
  double gamma_c2 = 0.513;
  std::string beta_grid_text = "";
  std::vector<double> beta_gammas;
  cmd_beta->add_option("--gamma-c2", gamma_c2, "second critical damping");
  cmd_beta->add_option("--gammas", beta_gammas, "explicit gamma list");
  cmd_beta->add_option("--gamma-grid", beta_grid_text, "or a grid lo:hi:n");
  cmd_beta->add_option("--D", ctm.bond_dim, "bond dimension");
  cmd_beta->add_option("--max-iters", ctm.max_iters, "sweep cap");
  cmd_beta->add_option("--out", out_path, "output file");

  // Config file defaults: applied before flag parsing wins.
  try {
    for (int i = 1; i + 1 < argc; ++i)
      if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ValidationError("cannot open config file: " + config_path);
      Json cfg = Json::parse(in);
      if (cfg.contains("noise")) noise.noise = cfg["noise"].get<std::string>();
      if (cfg.contains("R")) {
        noise.r = cfg["R"].get<double>();
        noise.has_r = true;
      }
      if (cfg.contains("gamma")) noise.gamma = cfg["gamma"].get<double>();
      if (cfg.contains("theta")) noise.theta = cfg["theta"].get<double>();
      if (cfg.contains("phi")) noise.phi = cfg["phi"].get<double>();
      if (cfg.contains("distribution")) noise.dist_json = cfg["distribution"].dump();
      if (cfg.contains("D")) ctm.bond_dim = cfg["D"].get<int>();
      if (cfg.contains("tol")) ctm.tol = cfg["tol"].get<double>();
      if (cfg.contains("max_iters")) ctm.max_iters = cfg["max_iters"].get<int>();
      if (cfg.contains("workers")) workers_opt = cfg["workers"].get<int>();
      if (cfg.contains("torus")) torus_text = cfg["torus"].get<std::string>();
      if (cfg.contains("out")) out_path = cfg["out"].get<std::string>();
    }
  } catch (const Json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  CLI11_PARSE(app, argc, argv);

  const int workers = deterministic ? 1 : worker_count(workers_opt);
  const ParallelFor pfor = pool_executor(workers);

  try {
    if (cmd_map->parsed()) {
      const ATCouplings at = noise.couplings();
      const BoltzmannCouplings b = boltzmann_form(at);
      Json j = couplings_record(at, noise.source_json());
      j["tanh_j1"] = complex_to_json(b.t1);
      j["tanh_j2"] = complex_to_json(b.t2);
      j["tanh_k"] = complex_to_json(b.tk);
      emit(out_path, j.dump(2), "couplings");
    } else if (cmd_noise->parsed()) {
      if (noise.noise != "rotation") throw ValidationError("noise-check applies to rotation noise");
      const AngleDistribution dist = noise.dist_json.empty()
                                         ? AngleDistribution::uniform()
                                         : angle_distribution_from_json(Json::parse(noise.dist_json));
      const auto a2 = second_fourier_moment(dist);
      const auto red = stochastic_reduction_check(dist, noise.rotation_axis());
      Json j = {{"R", r_parameter(dist)},
                {"a2", complex_to_json(a2)},
                {"p", red.p},
                {"max_deviation", red.max_deviation},
                {"distribution", angle_distribution_to_json(dist)}};
      emit(out_path, j.dump(2), "noise-check");
    } else if (cmd_point->parsed()) {
      const ATCouplings at = noise.couplings();
      ScanRecord rec = run_point(at, noise.noise == "rotation" ? noise.rotation_r() : noise.gamma, ctm);
      Json j = observables_json(rec);
      j["couplings"] = couplings_to_json(at);
      emit(out_path, j.dump(2), "ctmrg-point");
    } else if (cmd_sweep->parsed()) {
      std::ostringstream csv;
      csv << kScanCsvHeader << '\n';
      if (preset == "ampdamp-line") {
        const auto gammas = grid_values(parse_grid(gamma_grid_text.empty() ? "0:1:101" : gamma_grid_text));
        std::vector<ScanRecord> recs(gammas.size());
        pfor(static_cast<int>(gammas.size()), [&](int i) {
          recs[static_cast<size_t>(i)] = run_point(amp_damp_couplings(gammas[static_cast<size_t>(i)]),
                                                   gammas[static_cast<size_t>(i)], ctm);
          recs[static_cast<size_t>(i)].grid_index = i;
          recs[static_cast<size_t>(i)].is_gamma_line = true;
        });
        for (const auto& r : recs) csv << scan_record_to_csv(r) << '\n';
        emit(out_path, csv.str(), "sweep " + std::to_string(gammas.size()) + " points");
      } else if (preset == "ray") {
        const auto rs = grid_values(parse_grid(r_grid_text));
        const auto res = ray_scan(noise.rotation_axis(), rs, ctm, pfor);
        for (const auto& r : res.records) csv << scan_record_to_csv(r) << '\n';
        csv << "# ray-max boundary: R=" << format_csv_double(res.boundary.critical)
            << " bracket=" << format_csv_double(res.boundary.bracket) << " interior=" << res.boundary.interior << '\n';
        emit(out_path, csv.str(), "sweep " + std::to_string(rs.size()) + " points");
      } else if (preset == "coarse-3d") {
        // 5 x 5 x 9 (theta, phi, R) smoke grid; long-running at large D.
        std::vector<std::array<double, 3>> points;
        for (int it = 0; it < 5; ++it)
          for (int ip = 0; ip < 5; ++ip)
            for (int ir = 0; ir < 9; ++ir)
              points.push_back({kPi / 2.0 * it / 4.0, kPi / 2.0 * ip / 4.0, ir / 8.0});
        std::vector<ScanRecord> recs(points.size());
        pfor(static_cast<int>(points.size()), [&](int i) {
          const auto& p = points[static_cast<size_t>(i)];
          const RotationAxis ax(p[0], p[1]);
          recs[static_cast<size_t>(i)] = run_point(rotation_couplings(p[2], ax), p[2], ctm);
          recs[static_cast<size_t>(i)].grid_index = i;
          recs[static_cast<size_t>(i)].theta = ax.theta;
          recs[static_cast<size_t>(i)].phi = ax.phi;
        });
        for (const auto& r : recs) csv << scan_record_to_csv(r) << '\n';
        emit(out_path, csv.str(), "sweep " + std::to_string(points.size()) + " points");
      } else {
        throw ValidationError("unknown preset: " + preset);
      }
    } else if (cmd_bisect->parsed()) {
      const CouplingPath path = noise.noise == "ampdamp" ? CouplingPath::amp_damp_line()
                                                         : CouplingPath::rotation_ray(noise.rotation_axis());
      const auto est = bisect_boundary(path, lo, hi, ctm, btol);
      Json j = {{"line", est.line},
                {"critical", est.critical},
                {"bracket", est.bracket},
                {"method", "BISECTION"},
                {"left_phase", phase_name(est.left_phase)},
                {"right_phase", phase_name(est.right_phase)},
                {"D", ctm.bond_dim}};
      emit(out_path, j.dump(2), "bisect");
    } else if (cmd_ci->parsed() || cmd_anyon->parsed()) {
      const TorusSpec torus = parse_torus(torus_text);
      const ATCouplings at = noise.couplings();
      if (cmd_ci->parsed()) {
        const auto ci = renyi2_coherent_info_detailed(torus, at);
        Json sectors;
        const std::array<std::string, 4> tag = {"00", "01", "10", "11"};
        for (int i = 0; i < 4; ++i) {
          sectors["s_tau"][tag[static_cast<size_t>(i)]] = complex_to_json(ci.z_num[static_cast<size_t>(i)]);
          sectors["tau_stau"][tag[static_cast<size_t>(i)]] = complex_to_json(ci.z_den[static_cast<size_t>(i)]);
        }
        Json j = {{"torus", {{"lx", torus.lx}, {"ly", torus.ly}}},
                  {"couplings", couplings_to_json(at)},
                  {"sectors", sectors},
                  {"ic2", ci.value},
                  {"imag_magnitude", ci.imag_magnitude}};
        emit(out_path, j.dump(2), "coherent-info ic2=" + format_csv_double(ci.value));
      } else {
        const auto p = anyon_parameters(torus, at);
        Json j = {{"torus", {{"lx", torus.lx}, {"ly", torus.ly}}},
                  {"couplings", couplings_to_json(at)},
                  {"ii_ee", complex_to_json(p.ii_ee)},
                  {"ei_ei", complex_to_json(p.ei_ei)},
                  {"ii_mm", complex_to_json(p.ii_mm)},
                  {"mi_mi", complex_to_json(p.mi_mi)}};
        emit(out_path, j.dump(2), "anyon-params");
      }
    } else if (cmd_sv->parsed()) {
      const auto rs = grid_values(parse_grid(sv_grid_text));
      std::ostringstream csv;
      csv << "R,xi_exact,xi_finite_lx,order_parameter\n";
      for (double big_r : rs) {
        const double xi = exact_correlation_length(big_r);
        const double xil = (big_r > 0.0 && big_r < 1.0) ? finite_lx_correlation_length(big_r, sv_lx) : xi;
        const StaggeredVertexParams p(StaggeredVertexParams::r_from_big_r(big_r), sv_eps, sv_lx, sv_ly);
        csv << format_csv_double(big_r) << ',' << format_csv_double(xi) << ',' << format_csv_double(xil) << ','
            << format_csv_double(order_parameter(p)) << '\n';
      }
      emit(out_path, csv.str(), "staggered-vertex " + std::to_string(rs.size()) + " rows");
    } else if (cmd_cfit->parsed()) {
      const ATCouplings at = noise.couplings();
      const VertexTensor t = build_vertex_tensor(at);
      std::vector<std::pair<double, double>> pts(ladder.size());
      std::vector<Json> detail(ladder.size());
      pfor(static_cast<int>(ladder.size()), [&](int i) {
        CtmrgOptions o = ctm;
        o.bond_dim = ladder[static_cast<size_t>(i)];
        const CtmEnvironment env = ctmrg_converge(t, o);
        const Observables obs = measure(env, t);
        pts[static_cast<size_t>(i)] = {obs.xi, obs.entropy};
        detail[static_cast<size_t>(i)] = {{"D", o.bond_dim}, {"xi", obs.xi}, {"entropy", obs.entropy}};
      });
      const auto fit = central_charge_fit(pts);
      Json j = {{"c", fit.c}, {"r_squared", fit.r_squared}, {"points", detail}, {"couplings", couplings_to_json(at)}};
      emit(out_path, j.dump(2), "central charge c=" + format_csv_double(fit.c));
    } else if (cmd_beta->parsed()) {
      std::vector<double> gammas = beta_gammas;
      if (!beta_grid_text.empty())
        for (double g : grid_values(parse_grid(beta_grid_text))) gammas.push_back(g);
      if (gammas.empty())
        for (double dt : {1.5e-3, 3e-3, 6e-3, 1.2e-2, 2.4e-2, 4.8e-2}) gammas.push_back(gamma_c2 + dt);
      const double slope = beta_exponent_fit(gammas, gamma_c2, ctm, pfor);
      Json j = {{"beta", slope}, {"gamma_c2", gamma_c2}, {"D", ctm.bond_dim}, {"points", gammas}};
      emit(out_path, j.dump(2), "fit-beta beta=" + format_csv_double(slope));
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const Json::exception& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
