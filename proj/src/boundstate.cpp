#include "giantatom/boundstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "giantatom/dynamics_reduced.hpp"
#include "giantatom/errors.hpp"

namespace giantatom {

BoundState solve_bound_state(const ModelParams& params, int d) {
  if (d <= 0 || d % 4 != 0) {
    std::ostringstream os;
    os << "bound state needs d divisible by 4 (got d = " << d << ")";
    throw ConfigError(os.str());
  }
  if (!(params.kappa > 0.0)) throw ConfigError("bound state needs kappa > 0");

  const std::size_t n = static_cast<std::size_t>(d / 4);
  BoundState bs;
  bs.d = d;
  bs.omega_mod = params.omega_mod;
  bs.j_s_minus.resize(n);

  // j_k = (2 kappa / sqrt(2d)) x / (Omega - omega_k); start from x = 1 and normalize.
  const double gain = 2.0 * params.kappa / std::sqrt(2.0 * d);
  double photon = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double detuning = localized_detuning(static_cast<int>(k), d, params);
    if (std::abs(detuning) < kResonanceGuard * params.eta) {
      std::ostringstream os;
      os << "Omega = " << params.omega_mod << " is resonant with localized mode k = " << k
         << " (omega_k = " << params.omega_mod - detuning << ")";
      throw SingularityError(os.str(), static_cast<int>(k));
    }
    bs.j_s_minus[k] = gain / detuning;
    photon += ReducedState::weight(k) * bs.j_s_minus[k] * bs.j_s_minus[k];
  }
  const double scale = 1.0 / std::sqrt(1.0 + photon);
  bs.x_s = scale;
  for (double& j : bs.j_s_minus) j *= scale;
  bs.atom_weight = scale * scale;
  bs.photon_weight = photon * scale * scale;
  return bs;
}

double localization_share(const BoundState& bs) {
  const std::size_t n = bs.j_s_minus.size();
  const std::size_t lowest = (n + 9) / 10;
  double share = 0.0;
  for (std::size_t k = 0; k < lowest && k < n; ++k)
    share += ReducedState::weight(k) * bs.j_s_minus[k] * bs.j_s_minus[k];
  return share;
}

std::vector<BoundStateScanRow> atom_weight_scan(const ModelParams& params, int d,
                                                const std::vector<double>& omega_list) {
  std::vector<BoundStateScanRow> rows;
  rows.reserve(omega_list.size());
  for (double omega : omega_list) {
    BoundStateScanRow row;
    row.omega_mod = omega;
    ModelParams p = params;
    p.omega_mod = omega;
    try {
      const BoundState bs = solve_bound_state(p, d);
      row.atom_weight = bs.atom_weight;
      row.photon_weight = bs.photon_weight;
      row.localization_share = localization_share(bs);
    } catch (const Error& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.atom_weight = row.photon_weight = row.localization_share = nan;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ReducedState embed(const BoundState& bs) {
  ReducedState state(bs.d);
  for (std::size_t k = 0; k < bs.j_s_minus.size(); ++k) state.j_s_minus[k] = bs.j_s_minus[k];
  state.chi = bs.x_s;
  return state;
}

double stationarity_residual(const ReducedState& state, const ModelParams& params) {
  const ReducedState rate = rhs_reduced(state, params, SectorCoupling::Off);
  double worst = std::abs(rate.chi);
  for (const auto* arr : {&rate.j_s_plus, &rate.j_s_minus})
    for (const Complex& z : *arr) worst = std::max(worst, std::abs(z));
  return worst;
}

double verify_stationarity(const BoundState& bs, const ModelParams& params) {
  ModelParams p = params;
  p.omega_mod = bs.omega_mod;
  return stationarity_residual(embed(bs), p);
}

}  // namespace giantatom
