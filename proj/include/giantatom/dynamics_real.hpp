#pragma once

#include <optional>
#include <span>
#include <vector>

#include "giantatom/model.hpp"
#include "giantatom/states.hpp"
#include "giantatom/trajectory.hpp"

namespace giantatom {

/// Right-hand side of the real-space working equations on a fixed site range:
///
///   dv_m/dt = -i eta (v_{m+1} + v_{m-1}) - i kappa xi e^{i m Omega t} [m coupled] - i S(t) [m = drive site]
///   dxi/dt  = -i kappa sum_{m coupled} v_m e^{-i m Omega t}
///
/// Amplitudes beyond the array are zero (hard wall). The packed layout is
/// [v_first .. v_last, xi].
class RealGenerator {
 public:
  RealGenerator(const ModelParams& params, SiteRange sites,
                std::optional<BoundaryDrive> drive = std::nullopt);

  void operator()(double t, std::span<const Complex> y, std::span<Complex> dydt) const;

  std::size_t packed_size() const { return sites_.size() + 1; }
  const SiteRange& sites() const { return sites_; }

 private:
  double eta_;
  double kappa_;
  double omega_;
  SiteRange sites_;
  std::vector<int> coupled_;             // site labels m
  std::vector<std::size_t> coupled_idx_;  // array offsets
  std::optional<BoundaryDrive> drive_;
  std::size_t drive_idx_ = 0;
};

std::vector<Complex> pack(const RealState& state);
void unpack(std::span<const Complex> packed, RealState& state);

/// Time derivative of `state` at time t. A BoundaryDrive in `drive` adds the
/// source -i S(t) at its drive site; any other excitation variant is a ConfigError.
RealState rhs_real(const RealState& state, double t, const ModelParams& params,
                   const std::optional<ExcitationSpec>& drive = std::nullopt);

/// One classical RK4 step of size dt; advances state.t by dt.
RealState step_rk4(const RealState& state, const ModelParams& params,
                   const std::optional<ExcitationSpec>& drive, double dt);

/// Integrates from t = 0 to integ.t_end on lattice.real_sites().
///
/// Boundary-driven runs start from vacuum and are renormalized by the total
/// probability measured at t0 + 6 tau (after injection has ceased); wavepacket
/// runs start from build_wavepacket() and are not rescaled.
Trajectory run_real(const ModelParams& params, const LatticeSpec& lattice,
                    const ExcitationSpec& exc, const IntegratorConfig& integ);

}  // namespace giantatom
