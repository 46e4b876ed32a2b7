#pragma once

#include <complex>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "atphase/angle_distribution.hpp"
#include "atphase/couplings.hpp"
#include "atphase/errors.hpp"
#include "atphase/lattice_exact.hpp"
#include "atphase/phase_scan.hpp"

namespace atphase {

using Json = nlohmann::json;

// Noise spec config block, e.g.
//   {"variant": "double_von_mises", "q": 0.5, "kappa": 3.0, "delta_phi": 1.5707963}
//   {"variant": "tabulated", "path": "dist.csv"}
// Tabulated CSV is two columns: angle_radians, density.
AngleDistribution angle_distribution_from_json(const Json& j, const std::filesystem::path& base_dir = ".");
Json angle_distribution_to_json(const AngleDistribution& dist);

NoiseChannelSpec noise_spec_from_json(const Json& j, const std::filesystem::path& base_dir = ".");
Json noise_spec_to_json(const NoiseChannelSpec& spec);

Json couplings_to_json(const ATCouplings& at);
Json couplings_record(const ATCouplings& at, const Json& source);

Json complex_to_json(const std::complex<double>& z);

Json scan_record_to_json(const ScanRecord& rec);

// CSV row for one sweep point, in the documented column order:
// index,param,theta,phi,D,iterations,residual,converged,
// re_m_s,im_m_s,re_m_tau,im_m_tau,re_m_stau,im_m_stau,abs_m_s,abs_m_tau,abs_m_stau,
// indicator,xi,entropy,phase
extern const char* const kScanCsvHeader;
std::string scan_record_to_csv(const ScanRecord& rec);

// Writes via a temp file in the same directory plus rename, so readers never see
// partial output.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string format_csv_double(double v);

std::vector<std::pair<double, double>> read_two_column_csv(const std::filesystem::path& path);

}  // namespace atphase
