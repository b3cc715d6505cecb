#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "giantatom/dynamics_reduced.hpp"
#include "giantatom/errors.hpp"
#include "giantatom/model.hpp"

namespace giantatom {

enum class Backend { Real, KSpace, KSpaceExact, Reduced, BoundState };

const char* to_string(Backend b);
Backend parse_backend(const std::string& name);

struct AnalysisConfig {
  int window_halfwidth = 10;
  double threshold_fraction = 0.3;
  bool include_atom = false;
  std::optional<double> decay_t_start;
  std::optional<double> decay_t_end;
  std::optional<int> detector_site;
};

/// Fully resolved run description: everything a backend needs plus provenance.
struct RunConfig {
  ModelParams model;
  LatticeSpec lattice;
  ExcitationSpec excitation = BoundaryDrive{};
  IntegratorConfig integrator;
  AnalysisConfig analysis;
  ReducedOptions reduced;
  Backend backend = Backend::Real;
  std::string preset;
  /// Keys whose values were chosen by this tool rather than taken from the
  /// model's published parameter set (dt, t_end, windows, ...).
  std::vector<std::string> artifact_defaults;
};

/// Configuration text that failed to parse; carries the 1-based position.
class ConfigParseError : public ConfigError {
 public:
  ConfigParseError(const std::string& source, int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

std::vector<std::string> preset_names();
/// fig2a, fig2b (boundary drive, 401 sites) and fig3 (wavepacket, d = 500).
RunConfig make_preset(const std::string& name);

/// Assigns `section.key` from text, e.g. set_value(cfg, "model.omega_mod", "2.05").
/// ConfigError for unknown keys or malformed values.
void set_value(RunConfig& cfg, const std::string& dotted_key, const std::string& value);

/// Parses INI text with sections [run], [model], [lattice], [excitation],
/// [integrator], [analysis], [reduced]. A `preset` key in [run] seeds the
/// configuration before the remaining keys are applied.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>",
                       std::optional<RunConfig> base = std::nullopt);
RunConfig load_config(const std::filesystem::path& path, std::optional<RunConfig> base = std::nullopt);

/// Canonical INI rendering of every resolved value; stable across runs.
std::string to_ini(const RunConfig& cfg);

std::string sha256_hex(const std::string& bytes);

}  // namespace giantatom
