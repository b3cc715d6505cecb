#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "giantatom/analysis.hpp"
#include "giantatom/boundstate.hpp"
#include "giantatom/errors.hpp"
#include "giantatom/trajectory.hpp"

namespace giantatom {

/// Failure to create or write an output file.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Decimal rendering used by every columnar file (13 significant digits).
std::string format_value(double x);

/// `t, m_first..m_last, xi2, norm`
void write_site_trajectory(const std::filesystem::path& path, const Trajectory& traj);
/// `t, k=-d..d-1 as |C_k|^2, chi2, norm`
void write_bloch_trajectory(const std::filesystem::path& path, const Trajectory& traj);
/// `t, |J_{k,s+}|^2.., |J_{k,s-}|^2.., |J_{k,0+}|^2.., |J_{k,0-}|^2.., chi2, norm_s, norm_0`
void write_reduced_trajectory(const std::filesystem::path& path, const Trajectory& traj);
/// `k, omega_k, j_s_minus` plus a commented header with x_s and weights.
void write_bound_state(const std::filesystem::path& path, const BoundState& bs, double eta);
/// `omega, atom_weight, photon_weight, localization_share`
void write_scan(const std::filesystem::path& path, const std::vector<BoundStateScanRow>& rows);
/// `t, p_loc`
void write_localization(const std::filesystem::path& path, const LocalizationMetric& metric);
/// `omega, density`
void write_spectrum(const std::filesystem::path& path, const std::vector<SpectrumPoint>& spectrum);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace giantatom
