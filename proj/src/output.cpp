#include "giantatom/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace giantatom {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

std::string format_value(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

void write_site_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  auto out = open_out(path);
  out << "t";
  for (int m = traj.sites.first; m <= traj.sites.last; ++m) out << "," << m;
  out << ",xi2,norm\n";
  for (std::size_t s = 0; s < traj.size(); ++s) {
    out << format_value(traj.times[s]);
    for (const auto& v : traj.site_amplitudes[s]) out << "," << format_value(std::norm(v));
    out << "," << format_value(std::norm(traj.atom_amplitudes[s])) << "," << format_value(traj.norms[s]) << "\n";
  }
  finish(out, path);
}

void write_bloch_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  if (traj.bloch_amplitudes.size() != traj.size()) {
    throw DataError("trajectory from backend '" + traj.backend + "' has no Bloch snapshots");
  }
  auto out = open_out(path);
  out << "t";
  for (int k = -traj.d; k < traj.d; ++k) out << "," << k;
  out << ",chi2,norm\n";
  for (std::size_t s = 0; s < traj.size(); ++s) {
    out << format_value(traj.times[s]);
    for (const auto& c : traj.bloch_amplitudes[s]) out << "," << format_value(std::norm(c));
    out << "," << format_value(std::norm(traj.atom_amplitudes[s])) << "," << format_value(traj.norms[s]) << "\n";
  }
  finish(out, path);
}

void write_reduced_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  if (traj.reduced_states.size() != traj.size()) {
    throw DataError("trajectory from backend '" + traj.backend + "' has no reduced snapshots");
  }
  auto out = open_out(path);
  const std::size_t n = traj.size() ? traj.reduced_states.front().j_s_plus.size() : 0;
  out << "t";
  for (const char* name : {"js_plus", "js_minus", "j0_plus", "j0_minus"}) {
    for (std::size_t k = 0; k < n; ++k) out << "," << name << "_" << k;
  }
  out << ",chi2,norm_s,norm_0\n";
  for (std::size_t s = 0; s < traj.size(); ++s) {
    const auto& r = traj.reduced_states[s];
    out << format_value(traj.times[s]);
    for (const auto* vec : {&r.j_s_plus, &r.j_s_minus, &r.j_0_plus, &r.j_0_minus}) {
      for (const auto& v : *vec) out << "," << format_value(std::norm(v));
    }
    out << "," << format_value(std::norm(r.chi)) << "," << format_value(r.norm_s()) << ","
        << format_value(r.norm_0()) << "\n";
  }
  finish(out, path);
}

void write_bound_state(const std::filesystem::path& path, const BoundState& bs, double eta) {
  auto out = open_out(path);
  out << "# d = " << bs.d << "\n";
  out << "# omega_mod = " << format_value(bs.omega_mod) << "\n";
  out << "# x_s = " << format_value(bs.x_s) << "\n";
  out << "# atom_weight = " << format_value(bs.atom_weight) << "\n";
  out << "# photon_weight = " << format_value(bs.photon_weight) << "\n";
  out << "k,omega_k,j_s_minus\n";
  for (std::size_t k = 0; k < bs.j_s_minus.size(); ++k) {
    double wk = 2.0 * eta * std::cos(static_cast<double>(k) * kPi / bs.d);
    out << k << "," << format_value(wk) << "," << format_value(bs.j_s_minus[k]) << "\n";
  }
  finish(out, path);
}

void write_scan(const std::filesystem::path& path, const std::vector<BoundStateScanRow>& rows) {
  auto out = open_out(path);
  out << "omega,atom_weight,photon_weight,localization_share\n";
  for (const auto& r : rows) {
    out << format_value(r.omega_mod) << "," << format_value(r.atom_weight) << ","
        << format_value(r.photon_weight) << "," << format_value(r.localization_share) << "\n";
  }
  finish(out, path);
}

void write_localization(const std::filesystem::path& path, const LocalizationMetric& metric) {
  auto out = open_out(path);
  out << "t,p_loc\n";
  for (std::size_t i = 0; i < metric.times.size(); ++i) {
    out << format_value(metric.times[i]) << "," << format_value(metric.series[i]) << "\n";
  }
  finish(out, path);
}

void write_spectrum(const std::filesystem::path& path, const std::vector<SpectrumPoint>& spectrum) {
  auto out = open_out(path);
  out << "omega,density\n";
  for (const auto& p : spectrum) out << format_value(p.omega) << "," << format_value(p.density) << "\n";
  finish(out, path);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace giantatom
