#include "atphase/serialize.hpp"

#include <unistd.h>

#include <cstdio>
#include <sstream>

namespace atphase {

std::string format_csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::vector<std::pair<double, double>> read_two_column_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open CSV file: " + path.string());
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (auto& ch : line)
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    std::istringstream ss(line);
    double a = 0.0, b = 0.0;
    if (ss >> a >> b) rows.emplace_back(a, b);
  }
  if (rows.empty()) throw ValidationError("CSV file has no numeric rows: " + path.string());
  return rows;
}

AngleDistribution angle_distribution_from_json(const Json& j, const std::filesystem::path& base_dir) {
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "delta") return AngleDistribution::delta(j.value("epsilon", 0.0));
  if (variant == "uniform") return AngleDistribution::uniform();
  if (variant == "von_mises") return AngleDistribution::von_mises(j.at("kappa").get<double>(), j.value("mean", 0.0));
  if (variant == "double_von_mises")
    return AngleDistribution::double_von_mises(j.value("q", 0.5), j.at("kappa").get<double>(),
                                               j.at("delta_phi").get<double>());
  if (variant == "tabulated") {
    std::filesystem::path p = j.at("path").get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    const auto rows = read_two_column_csv(p);
    std::vector<double> angles, densities;
    angles.reserve(rows.size());
    densities.reserve(rows.size());
    for (const auto& [a, g] : rows) {
      angles.push_back(a);
      densities.push_back(g);
    }
    return AngleDistribution::tabulated(std::move(angles), std::move(densities));
  }
  throw ValidationError("unknown distribution variant: " + variant);
}

Json angle_distribution_to_json(const AngleDistribution& dist) {
  using K = AngleDistribution::Kind;
  switch (dist.kind()) {
    case K::Delta:
      return {{"variant", "delta"}, {"epsilon", dist.epsilon()}};
    case K::Uniform:
      return {{"variant", "uniform"}};
    case K::VonMises:
      return {{"variant", "von_mises"}, {"kappa", dist.kappa()}, {"mean", dist.mean()}};
    case K::DoubleVonMises:
      return {{"variant", "double_von_mises"}, {"q", dist.q()}, {"kappa", dist.kappa()}, {"delta_phi", dist.delta_phi()}};
    case K::Tabulated:
      return {{"variant", "tabulated"}};
  }
  return {};
}

NoiseChannelSpec noise_spec_from_json(const Json& j, const std::filesystem::path& base_dir) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "rotation") {
    const RotationAxis axis(j.value("theta", 0.0), j.value("phi", 0.0));
    return NoiseChannelSpec::rotation(axis, angle_distribution_from_json(j.at("distribution"), base_dir));
  }
  if (kind == "amplitude_damping") return NoiseChannelSpec::amplitude_damping(j.at("gamma").get<double>());
  throw ValidationError("unknown noise kind: " + kind);
}

Json noise_spec_to_json(const NoiseChannelSpec& spec) {
  if (spec.kind == NoiseChannelSpec::Kind::AmplitudeDamping)
    return {{"kind", "amplitude_damping"}, {"gamma", spec.gamma}};
  return {{"kind", "rotation"},
          {"theta", spec.axis.theta},
          {"phi", spec.axis.phi},
          {"distribution", angle_distribution_to_json(spec.dist)}};
}

Json couplings_to_json(const ATCouplings& at) { return {{"j1", at.j1}, {"j2", at.j2}, {"k", at.k}}; }

Json couplings_record(const ATCouplings& at, const Json& source) {
  Json j = couplings_to_json(at);
  j["source"] = source;
  return j;
}

Json complex_to_json(const std::complex<double>& z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Json scan_record_to_json(const ScanRecord& rec) {
  return {{"index", rec.grid_index},
          {"param", rec.param},
          {"theta", rec.theta},
          {"phi", rec.phi},
          {"d", rec.bond_dim},
          {"iterations", rec.iterations},
          {"residual", rec.residual},
          {"converged", rec.converged},
          {"m_s", complex_to_json(rec.obs.m_s)},
          {"m_tau", complex_to_json(rec.obs.m_tau)},
          {"m_stau", complex_to_json(rec.obs.m_stau)},
          {"indicator", rec.obs.indicator},
          {"xi", rec.obs.xi_finite ? Json(rec.obs.xi) : Json("inf")},
          {"entropy", rec.obs.entropy},
          {"phase", phase_name(rec.phase)}};
}

const char* const kScanCsvHeader =
    "index,param,theta,phi,D,iterations,residual,converged,"
    "re_m_s,im_m_s,re_m_tau,im_m_tau,re_m_stau,im_m_stau,"
    "abs_m_s,abs_m_tau,abs_m_stau,indicator,xi,entropy,phase";

std::string scan_record_to_csv(const ScanRecord& rec) {
  std::ostringstream out;
  const auto f = format_csv_double;
  out << rec.grid_index << ',' << f(rec.param) << ',' << f(rec.theta) << ',' << f(rec.phi) << ',' << rec.bond_dim
      << ',' << rec.iterations << ',' << f(rec.residual) << ',' << (rec.converged ? 1 : 0) << ','
      << f(rec.obs.m_s.real()) << ',' << f(rec.obs.m_s.imag()) << ',' << f(rec.obs.m_tau.real()) << ','
      << f(rec.obs.m_tau.imag()) << ',' << f(rec.obs.m_stau.real()) << ',' << f(rec.obs.m_stau.imag()) << ','
      << f(std::abs(rec.obs.m_s)) << ',' << f(std::abs(rec.obs.m_tau)) << ',' << f(std::abs(rec.obs.m_stau)) << ','
      << f(rec.obs.indicator) << ',' << (rec.obs.xi_finite ? f(rec.obs.xi) : std::string("inf")) << ','
      << f(rec.obs.entropy) << ',' << phase_name(rec.phase);
  return out.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::filesystem::create_directories(dir);
  const auto tmp = dir / (path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw NumericalError("cannot open temporary output file: " + tmp.string());
    out << content;
    if (!out.good()) throw NumericalError("failed writing: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace atphase
