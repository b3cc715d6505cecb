#pragma once

#include <optional>
#include <string>
#include <vector>

#include "giantatom/model.hpp"
#include "giantatom/states.hpp"

namespace giantatom {

/// Stationary (zero-energy) solution of the isolated localized subsystem:
/// j_{k,s+} = 0 and j_{k,s-} = 2 kappa x_s / (sqrt(2d) (Omega - omega_k)).
///
/// Normalized in the reduced model's inner product, with x_s real and positive.
struct BoundState {
  int d = 0;
  double omega_mod = 0.0;
  double x_s = 0.0;
  std::vector<double> j_s_minus;
  double atom_weight = 0.0;
  double photon_weight = 0.0;
};

/// Singularity guard for |Omega - omega_k| (in units of eta).
inline constexpr double kResonanceGuard = 1e-9;

/// SingularityError naming k when Omega hits an s-sector omega_k;
/// ConfigError for kappa <= 0 or d not a multiple of 4.
BoundState solve_bound_state(const ModelParams& params, int d);

struct BoundStateScanRow {
  double omega_mod = 0.0;
  double atom_weight = 0.0;
  double photon_weight = 0.0;
  double localization_share = 0.0;
  std::optional<std::string> error;
};

/// Solves the bound state for each Omega in order. Singular entries carry
/// `error` and NaN weights; the scan continues.
std::vector<BoundStateScanRow> atom_weight_scan(const ModelParams& params, int d,
                                                const std::vector<double>& omega_list);

/// Weighted probability held by the lowest 10% of sector indices (rounded up).
double localization_share(const BoundState& bs);

/// Reduced state with the bound-state amplitudes and an empty propagating sector.
ReducedState embed(const BoundState& bs);

/// Largest |derivative| of the localized sector and chi with sector coupling
/// off. The propagating sector is still driven by chi and is not included.
double stationarity_residual(const ReducedState& state, const ModelParams& params);

double verify_stationarity(const BoundState& bs, const ModelParams& params);

}  // namespace giantatom
