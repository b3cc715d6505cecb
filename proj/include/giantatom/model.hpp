#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "giantatom/types.hpp"

namespace giantatom {

struct RealState;

/// Physical constants shared by every backend. All rates are in the same units
/// as `eta`; the presets use eta = 1 so times read directly in units of 1/eta.
struct ModelParams {
  double eta = 1.0;
  double omega_mod = 3.0;
  double kappa = 0.5;
  std::vector<int> coupled_sites{-1, 0, 1};

  /// True when the atom touches exactly the sites {-1, 0, +1} (required by the
  /// mode-separated k-space and reduced backends).
  bool has_standard_sites() const;
};

/// Geometry for real-space runs ([m_min, m_max]) and Bloch-space runs
/// (-d <= m < d, i.e. 2d sites).
struct LatticeSpec {
  int m_min = -200;
  int m_max = 200;
  int d = 500;

  SiteRange real_sites() const { return {m_min, m_max}; }
  SiteRange bloch_sites() const { return {-d, d - 1}; }
};

/// Gaussian source e^{-(t-t0)^2/tau^2} injected at one site.
struct BoundaryDrive {
  int drive_site = -200;
  double t0 = 25.0;
  double tau = 7.0710678118654752;  // 5 sqrt(2)
};

/// Gaussian wavepacket e^{-(m-m0)^2 / 2 delta_m^2} e^{i k0 pi (m-m0)}.
struct InitialWavepacket {
  int m0 = -250;
  double delta_m = 10.0;
  double k0 = -0.5;  ///< phase advance per site in units of pi
};

using ExcitationSpec = std::variant<BoundaryDrive, InitialWavepacket>;

struct IntegratorConfig {
  double dt = 0.005;
  double t_end = 250.0;
  int snapshot_stride = 20;

  /// Number of fixed steps needed to reach t_end.
  std::size_t steps() const;
};

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
  bool mentions(const std::string& needle) const;
};

/// Checks every configuration invariant and returns the list of violations.
/// Never throws.
ValidationReport validate(const ModelParams& params, const LatticeSpec& lattice,
                          const ExcitationSpec& exc, const IntegratorConfig& integ);

/// S(t) = exp(-(t - t0)^2 / tau^2). Throws ConfigError for a wavepacket excitation.
double gaussian_drive(double t, const ExcitationSpec& exc);
double gaussian_drive(double t, const BoundaryDrive& drive);

/// Warning text when the packet centre is closer than 5 delta_m to either end of `sites`.
std::optional<std::string> wavepacket_clearance_warning(const SiteRange& sites,
                                                        const InitialWavepacket& packet);

/// Normalized Gaussian wavepacket on `sites` with the atom in its ground state.
/// Throws ConfigError when the excitation is not a wavepacket or m0 lies outside `sites`.
RealState build_wavepacket(const SiteRange& sites, const ExcitationSpec& exc);

}  // namespace giantatom
