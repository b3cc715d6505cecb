#include "giantatom/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>
#include <variant>

#include <json.hpp>

#include "giantatom/analysis.hpp"
#include "giantatom/boundstate.hpp"
#include "giantatom/dynamics_k.hpp"
#include "giantatom/dynamics_real.hpp"
#include "giantatom/dynamics_reduced.hpp"
#include "giantatom/output.hpp"

namespace giantatom {

namespace fs = std::filesystem;

namespace {

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

class OutputSet {
 public:
  OutputSet(fs::path dir, RunManifest& manifest) : dir_(std::move(dir)), manifest_(manifest) {}

  template <class Writer>
  void add(const std::string& name, Writer&& writer) {
    fs::path path = dir_ / name;
    writer(path);
    manifest_.files.push_back({name, sha256_hex(read_text(path))});
  }

 private:
  fs::path dir_;
  RunManifest& manifest_;
};

Trajectory propagate(const RunConfig& cfg) {
  switch (cfg.backend) {
    case Backend::Real: return run_real(cfg.model, cfg.lattice, cfg.excitation, cfg.integrator);
    case Backend::KSpace:
      return run_kspace(cfg.model, cfg.lattice, cfg.excitation, cfg.integrator, KCoupling::ModeSeparated);
    case Backend::KSpaceExact:
      return run_kspace(cfg.model, cfg.lattice, cfg.excitation, cfg.integrator, KCoupling::Exact);
    case Backend::Reduced: return run_reduced(cfg.model, cfg.lattice, cfg.excitation, cfg.integrator, cfg.reduced);
    case Backend::BoundState: break;
  }
  throw ConfigError("backend has no time evolution");
}

// Largest deviation of the norm from its first value after any injection has finished.
double norm_drift(const RunConfig& cfg, const Trajectory& traj) {
  double t_from = 0.0;
  if (auto* drive = std::get_if<BoundaryDrive>(&cfg.excitation); drive && cfg.backend == Backend::Real) {
    t_from = drive->t0 + 6.0 * drive->tau;
  }
  double ref = std::numeric_limits<double>::quiet_NaN();
  double drift = 0.0;
  for (std::size_t s = 0; s < traj.size(); ++s) {
    if (traj.times[s] < t_from) continue;
    if (std::isnan(ref)) ref = traj.norms[s];
    drift = std::max(drift, std::abs(traj.norms[s] - ref));
  }
  return drift;
}

void write_trajectory_files(OutputSet& files, const Trajectory& traj) {
  files.add("trajectory.csv", [&](const fs::path& p) { write_site_trajectory(p, traj); });
  if (traj.bloch_amplitudes.size() == traj.size() && !traj.empty()) {
    files.add("bloch.csv", [&](const fs::path& p) { write_bloch_trajectory(p, traj); });
  }
  if (traj.reduced_states.size() == traj.size() && !traj.empty()) {
    files.add("reduced.csv", [&](const fs::path& p) { write_reduced_trajectory(p, traj); });
  }
}

void analyse(const RunConfig& cfg, const Trajectory& traj, OutputSet& files, RunManifest& manifest) {
  auto& m = manifest.metrics;
  if (traj.empty()) return;
  const auto& a = cfg.analysis;
  auto loc = localization_fraction(traj, a.window_halfwidth, a.threshold_fraction, a.include_atom);
  files.add("localization.csv", [&](const fs::path& p) { write_localization(p, loc); });
  m.emplace_back("retention_time", loc.retention_time);
  m.emplace_back("p_loc_peak", loc.peak);
  m.emplace_back("p_loc_peak_time", loc.peak_time);

  double peak_atom = 0.0;
  for (std::size_t s = 0; s < traj.size(); ++s) peak_atom = std::max(peak_atom, traj.atom_probability(s));
  m.emplace_back("peak_atom_probability", peak_atom);
  m.emplace_back("injected_norm", traj.injected_norm);
  m.emplace_back("final_norm", traj.norms.back());
  m.emplace_back("norm_drift", norm_drift(cfg, traj));

  if (a.decay_t_start && a.decay_t_end) {
    try {
      auto fit = decay_fit(traj, *a.decay_t_start, *a.decay_t_end);
      m.emplace_back("late_decay_rate", fit.rate);
      m.emplace_back("decay_goodness", fit.goodness);
    } catch (const DataError& e) {
      manifest.notes.push_back(std::string("decay fit skipped: ") + e.what());
    }
  }
  if (a.detector_site) {
    try {
      auto spec = detector_spectrum(traj, *a.detector_site, traj.times.front(), traj.times.back());
      files.add("spectrum.csv", [&](const fs::path& p) { write_spectrum(p, spec); });
    } catch (const Error& e) {
      manifest.notes.push_back(std::string("spectrum skipped: ") + e.what());
    }
  }
}

void bound_state(const RunConfig& cfg, OutputSet& files, RunManifest& manifest) {
  auto bs = solve_bound_state(cfg.model, cfg.lattice.d);
  files.add("boundstate.csv", [&](const fs::path& p) { write_bound_state(p, bs, cfg.model.eta); });
  auto& m = manifest.metrics;
  m.emplace_back("x_s", bs.x_s);
  m.emplace_back("atom_weight", bs.atom_weight);
  m.emplace_back("photon_weight", bs.photon_weight);
  m.emplace_back("localization_share", localization_share(bs));
  m.emplace_back("stationarity_residual", verify_stationarity(bs, cfg.model));
}

std::string metrics_text(const RunManifest& manifest) {
  std::ostringstream out;
  out << "backend: " << manifest.backend << "\n";
  if (!manifest.preset.empty()) out << "preset: " << manifest.preset << "\n";
  out << "status: " << manifest.status << "\n";
  for (const auto& [name, value] : manifest.metrics) out << name << " = " << format_value(value) << "\n";
  for (const auto& note : manifest.notes) out << "note: " << note << "\n";
  return out.str();
}

std::string metrics_csv(const RunManifest& manifest) {
  std::ostringstream out;
  out << "metric,value\n";
  for (const auto& [name, value] : manifest.metrics) out << name << "," << format_value(value) << "\n";
  return out.str();
}

void finalize(const fs::path& dir, RunManifest& manifest, std::chrono::steady_clock::time_point start) {
  OutputSet files(dir, manifest);
  files.add("metrics.txt", [&](const fs::path& p) { write_text(p, metrics_text(manifest)); });
  files.add("metrics.csv", [&](const fs::path& p) { write_text(p, metrics_csv(manifest)); });
  manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text(dir / "manifest.json", manifest.to_json());
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : Error("configuration invalid: " + join(report.violations, "; ")), report_(std::move(report)) {}

double RunManifest::metric(const std::string& name) const {
  for (const auto& [key, value] : metrics) {
    if (key == name) return value;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["config_digest"] = config_digest;
  j["backend"] = backend;
  j["preset"] = preset.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(preset);
  j["output_dir"] = output_dir.string();
  j["wall_seconds"] = wall_seconds;
  j["status"] = status;
  auto& prov = j["provenance"] = nlohmann::ordered_json::object();
  for (const auto& key : artifact_defaults) prov[key] = "artifact default";
  auto& f = j["files"] = nlohmann::ordered_json::array();
  for (const auto& file : files) f.push_back({{"name", file.name}, {"sha256", file.sha256}});
  auto& m = j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : metrics) {
    m[key] = std::isfinite(value) ? nlohmann::ordered_json(value) : nlohmann::ordered_json(nullptr);
  }
  j["notes"] = notes;
  return j.dump(2) + "\n";
}

RunManifest run(const RunConfig& cfg, const fs::path& output_dir) {
  auto start = std::chrono::steady_clock::now();
  auto report = validate(cfg.model, cfg.lattice, cfg.excitation, cfg.integrator);
  if (!report.ok()) throw ValidationError(std::move(report));

  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create " + output_dir.string() + ": " + ec.message());

  RunManifest manifest;
  const std::string resolved = to_ini(cfg);
  manifest.config_digest = sha256_hex(resolved);
  manifest.backend = to_string(cfg.backend);
  manifest.preset = cfg.preset;
  manifest.output_dir = output_dir;
  manifest.artifact_defaults = cfg.artifact_defaults;
  manifest.notes = report.warnings;

  OutputSet files(output_dir, manifest);
  files.add("config.ini", [&](const fs::path& p) { write_text(p, resolved); });

  if (cfg.backend == Backend::BoundState) {
    bound_state(cfg, files, manifest);
    finalize(output_dir, manifest, start);
    return manifest;
  }

  Trajectory traj;
  try {
    traj = propagate(cfg);
  } catch (DivergenceError& e) {
    manifest.status = "partial: diverged";
    std::ostringstream note;
    note << "diverged at step " << e.step() << " (t = " << e.time() << ")";
    manifest.notes.push_back(note.str());
    if (e.partial()) {
      write_trajectory_files(files, *e.partial());
      analyse(cfg, *e.partial(), files, manifest);
    }
    finalize(output_dir, manifest, start);
    throw;
  }
  for (const auto& note : traj.notes) manifest.notes.push_back(note);
  write_trajectory_files(files, traj);
  analyse(cfg, traj, files, manifest);
  finalize(output_dir, manifest, start);
  return manifest;
}

std::vector<std::string> sweep_axes() { return {"omega_mod", "kappa", "tau"}; }

std::vector<SweepRow> sweep(const RunConfig& base, const std::string& axis, const std::vector<double>& values,
                            const fs::path& output_dir, unsigned workers) {
  std::string key;
  if (axis == "omega_mod") key = "model.omega_mod";
  else if (axis == "kappa") key = "model.kappa";
  else if (axis == "tau") key = "excitation.tau";
  else throw ConfigError("axis '" + axis + "' is not sweepable (omega_mod, kappa, tau)");
  if (axis == "tau" && !std::holds_alternative<BoundaryDrive>(base.excitation)) {
    throw ConfigError("sweep over tau requires a boundary drive excitation");
  }

  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create " + output_dir.string() + ": " + ec.message());

  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      SweepRow& row = rows[i];
      row.value = values[i];
      row.output_dir = output_dir / (axis + "_" + std::to_string(i));
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.retention_time = row.late_decay_rate = row.localization_share = row.peak_atom_probability = nan;
      try {
        RunConfig cfg = base;
        std::ostringstream v;
        v.precision(17);
        v << values[i];
        set_value(cfg, key, v.str());
        auto manifest = run(cfg, row.output_dir);
        row.status = manifest.status;
        row.retention_time = manifest.metric("retention_time");
        row.late_decay_rate = manifest.metric("late_decay_rate");
        row.peak_atom_probability = manifest.metric("peak_atom_probability");
        try {
          row.localization_share = localization_share(solve_bound_state(cfg.model, cfg.lattice.d));
        } catch (const Error&) {
        }
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
      }
    }
  };

  unsigned n = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, values.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker);
  }

  std::ostringstream csv;
  csv << "value,status,retention_time,late_decay_rate,localization_share,peak_atom_probability\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    for (auto& c : status) {
      if (c == ',' || c == '\n') c = ';';
    }
    csv << format_value(r.value) << "," << status << "," << format_value(r.retention_time) << ","
        << format_value(r.late_decay_rate) << "," << format_value(r.localization_share) << ","
        << format_value(r.peak_atom_probability) << "\n";
  }
  write_text(output_dir / "sweep.csv", csv.str());
  return rows;
}

fs::path resolve_output_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "giantatom_out";
}

}  // namespace giantatom
