#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "giantatom/config.hpp"
#include "giantatom/model.hpp"

namespace giantatom {

/// Raised by run() when validate() reports violations.
class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

struct OutputFile {
  std::string name;
  std::string sha256;
};

struct RunManifest {
  std::string config_digest;
  std::string backend;
  std::string preset;
  std::filesystem::path output_dir;
  double wall_seconds = 0.0;
  std::string status = "ok";  ///< "ok" or "partial: diverged"
  std::vector<OutputFile> files;
  std::vector<std::string> artifact_defaults;
  std::vector<std::string> notes;
  std::vector<std::pair<std::string, double>> metrics;

  double metric(const std::string& name) const;  ///< NaN when absent
  std::string to_json() const;
};

/// Validates, runs the selected backend, and writes trajectory, metrics and
/// manifest files into `output_dir` (created if needed).
///
/// Throws ValidationError, DivergenceError (after writing the partial outputs
/// and a manifest flagged "partial: diverged") or IoError.
RunManifest run(const RunConfig& cfg, const std::filesystem::path& output_dir);

/// Axes accepted by sweep().
std::vector<std::string> sweep_axes();

struct SweepRow {
  double value = 0.0;
  std::string status;
  double retention_time = 0.0;
  double late_decay_rate = 0.0;
  double localization_share = 0.0;
  double peak_atom_probability = 0.0;
  std::filesystem::path output_dir;
};

/// Runs `base` once per value of `axis` (omega_mod, kappa or tau), each in its
/// own subdirectory, on up to `workers` threads (0 = hardware concurrency).
/// Rows come back in value order; failed runs keep their error in `status`.
/// Writes `sweep.csv` into `output_dir`.
std::vector<SweepRow> sweep(const RunConfig& base, const std::string& axis,
                            const std::vector<double>& values, const std::filesystem::path& output_dir,
                            unsigned workers = 0);

/// `--out` wins, then $GIANTATOM_OUTPUT_DIR, then ./giantatom_out.
std::filesystem::path resolve_output_dir(const std::string& flag_value);

inline constexpr const char* kOutputDirEnv = "GIANTATOM_OUTPUT_DIR";

}  // namespace giantatom
