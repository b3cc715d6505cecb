#include "giantatom/dynamics_reduced.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "giantatom/dynamics_k.hpp"
#include "giantatom/errors.hpp"
#include "integrate.hpp"

namespace giantatom {

double localized_detuning(int k, int d, const ModelParams& params) {
  return params.omega_mod - 2.0 * params.eta * std::cos(k * kPi / d);
}

double propagating_rate(int k, int d, const ModelParams& params) {
  return -2.0 * params.eta * std::sin(k * kPi / d);
}

namespace {

void require_multiple_of_four(int d) {
  if (d <= 0 || d % 4 != 0) {
    std::ostringstream os;
    os << "reduced model needs d divisible by 4 (got d = " << d << ")";
    throw DimensionError(os.str());
  }
}

}  // namespace

ReducedState construct_J(const KState& kstate, const ModelParams& params) {
  require_multiple_of_four(kstate.d);
  if (kstate.c.size() != static_cast<std::size_t>(2 * kstate.d))
    throw DimensionError("KState must hold exactly 2d amplitudes");
  const int d = kstate.d;
  ReducedState out(d, kstate.t);
  out.chi = kstate.chi;

  const Complex up = std::polar(1.0, params.omega_mod * kstate.t);
  for (int k = 0; k < d / 4; ++k) {
    const double theta = k * kPi / d;
    const Complex a = kstate.at(k) * std::polar(1.0, -theta) + kstate.at(-k) * std::polar(1.0, theta);
    const Complex b = kstate.at(d - k) * std::polar(1.0, kPi - theta) +
                      kstate.at(-(d - k)) * std::polar(1.0, -(kPi - theta));
    const Complex u = kstate.at(d / 2 - k) + kstate.at(-(d / 2 - k));
    const Complex v = kstate.at(d / 2 + k) + kstate.at(-(d / 2 + k));
    const auto i = static_cast<std::size_t>(k);
    out.j_s_plus[i] = 0.5 * (a * up + b * std::conj(up));
    out.j_s_minus[i] = 0.5 * (a * up - b * std::conj(up));
    out.j_0_plus[i] = 0.5 * (u + v);
    out.j_0_minus[i] = 0.5 * (u - v);
  }
  return out;
}

KState reconstruct_bloch(const ReducedState& state, const ModelParams& params) {
  require_multiple_of_four(state.d);
  const int d = state.d;
  KState out(d, state.t);
  out.chi = state.chi;

  const Complex up = std::polar(1.0, params.omega_mod * state.t);
  for (int k = 0; k < d / 4; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const Complex a = (state.j_s_plus[i] + state.j_s_minus[i]) * std::conj(up);
    const Complex b = (state.j_s_plus[i] - state.j_s_minus[i]) * up;
    if (k == 0) {
      // Both brackets collapse onto a single mode each: a = 2 C_0, b = -2 C_{-d}, u = v = C_{d/2} + C_{-d/2}.
      out.at(0) = 0.5 * a;
      out.at(-d) = -0.5 * b;
      out.at(d / 2) = 0.5 * state.j_0_plus[i];
      out.at(-d / 2) = 0.5 * state.j_0_plus[i];
      continue;
    }
    const double theta = k * kPi / d;
    out.at(k) = 0.5 * a * std::polar(1.0, theta);
    out.at(-k) = 0.5 * a * std::polar(1.0, -theta);
    out.at(d - k) = 0.5 * b * std::polar(1.0, -(kPi - theta));
    out.at(-(d - k)) = 0.5 * b * std::polar(1.0, kPi - theta);
    const Complex u = state.j_0_plus[i] + state.j_0_minus[i];
    const Complex v = state.j_0_plus[i] - state.j_0_minus[i];
    out.at(d / 2 - k) = 0.5 * u;
    out.at(-(d / 2 - k)) = 0.5 * u;
    out.at(d / 2 + k) = 0.5 * v;
    out.at(-(d / 2 + k)) = 0.5 * v;
  }
  return out;
}

ReducedGenerator::ReducedGenerator(const ModelParams& params, int d, SectorCoupling coupling)
    : n_(0), coupling_(0.0), sector_coupling_(coupling) {
  require_multiple_of_four(d);
  n_ = static_cast<std::size_t>(d / 4);
  coupling_ = params.kappa / std::sqrt(2.0 * d);
  detuning_.resize(n_);
  rate_.resize(n_);
  for (int k = 0; k < d / 4; ++k) {
    detuning_[static_cast<std::size_t>(k)] = localized_detuning(k, d, params);
    rate_[static_cast<std::size_t>(k)] = propagating_rate(k, d, params);
  }
}

void ReducedGenerator::operator()(double /*t*/, std::span<const Complex> y,
                                  std::span<Complex> dydt) const {
  const std::size_t n = n_;
  const Complex* sp = y.data();
  const Complex* sm = sp + n;
  const Complex* zp = sm + n;
  const Complex* zm = zp + n;
  const Complex chi = y[4 * n];
  const Complex drive = 2.0 * coupling_ * chi;

  Complex sum_s{}, sum_0{};
  for (std::size_t k = 0; k < n; ++k) {
    const double w = k == 0 ? 1.0 : 2.0;
    dydt[k] = -kI * (drive - detuning_[k] * sm[k]);
    dydt[n + k] = kI * detuning_[k] * sp[k];
    dydt[2 * n + k] = -kI * (drive - rate_[k] * zm[k]);
    dydt[3 * n + k] = kI * rate_[k] * zp[k];
    sum_s += w * sp[k];
    sum_0 += w * zp[k];
  }
  Complex source = sum_s;
  if (sector_coupling_ == SectorCoupling::On) source += sum_0;
  dydt[4 * n] = -kI * coupling_ * source;
}

std::vector<Complex> pack(const ReducedState& state) {
  const std::size_t n = state.sector_size();
  std::vector<Complex> y(4 * n + 1);
  std::copy(state.j_s_plus.begin(), state.j_s_plus.end(), y.begin());
  std::copy(state.j_s_minus.begin(), state.j_s_minus.end(), y.begin() + static_cast<long>(n));
  std::copy(state.j_0_plus.begin(), state.j_0_plus.end(), y.begin() + static_cast<long>(2 * n));
  std::copy(state.j_0_minus.begin(), state.j_0_minus.end(), y.begin() + static_cast<long>(3 * n));
  y.back() = state.chi;
  return y;
}

void unpack(std::span<const Complex> packed, ReducedState& state) {
  const std::size_t n = (packed.size() - 1) / 4;
  auto slice = [&](std::size_t i) {
    return std::vector<Complex>(packed.begin() + static_cast<long>(i * n),
                                packed.begin() + static_cast<long>((i + 1) * n));
  };
  state.j_s_plus = slice(0);
  state.j_s_minus = slice(1);
  state.j_0_plus = slice(2);
  state.j_0_minus = slice(3);
  state.chi = packed.back();
}

ReducedState rhs_reduced(const ReducedState& state, const ModelParams& params, SectorCoupling coupling) {
  const ReducedGenerator gen(params, state.d, coupling);
  if (state.sector_size() != static_cast<std::size_t>(state.d / 4))
    throw DimensionError("reduced arrays must have length d/4");
  const std::vector<Complex> y = pack(state);
  std::vector<Complex> dy(y.size());
  gen(state.t, y, dy);
  ReducedState out(state.d, state.t);
  unpack(dy, out);
  return out;
}

Trajectory run_reduced(const ModelParams& params, const LatticeSpec& lattice,
                       const ExcitationSpec& exc, const IntegratorConfig& integ, ReducedOptions options) {
  if (!std::holds_alternative<InitialWavepacket>(exc))
    throw ConfigError("the reduced backend needs an InitialWavepacket excitation");
  if (!params.has_standard_sites())
    throw ConfigError("the reduced model requires coupled sites {-1, 0, +1}");
  const int d = lattice.d;
  require_multiple_of_four(d);

  const BlochTransform transform(d);
  const KState initial = transform.forward(build_wavepacket(lattice.bloch_sites(), exc));
  const ReducedState j0 = construct_J(initial, params);

  // Part of the initial state outside the atom-coupled subspace; it evolves freely.
  std::vector<Complex> complement(initial.c.size());
  if (options.reconstruction == Reconstruction::WithFreeComplement) {
    const KState coupled = reconstruct_bloch(j0, params);
    for (std::size_t i = 0; i < complement.size(); ++i) complement[i] = initial.c[i] - coupled.c[i];
  }
  std::vector<double> omega(initial.c.size());
  for (int k = -d; k < d; ++k) omega[static_cast<std::size_t>(k + d)] = omega_k(k, d, params.eta);

  const ReducedGenerator gen(params, d, options.sector_coupling);
  std::vector<Complex> y = pack(j0);

  auto traj = std::make_shared<Trajectory>();
  traj->backend = "reduced";
  traj->sites = lattice.bloch_sites();
  traj->d = d;
  traj->notes.push_back(
      "real-space view reconstructed from the collective variables: each J value is shared equally by "
      "the Bloch modes it aggregates (atom-coupled combination only)");
  if (options.reconstruction == Reconstruction::WithFreeComplement)
    traj->notes.push_back("plus the atom-decoupled part of the initial state, evolved freely");
  if (options.sector_coupling == SectorCoupling::Off)
    traj->notes.push_back("propagating sector decoupled from the atom");

  try {
    detail::integrate(gen, y, integ, [&](std::size_t step, double t, std::span<const Complex> state) {
      if (!detail::is_snapshot(step, integ)) return;
      ReducedState rs(d, t);
      unpack(state, rs);
      KState c = reconstruct_bloch(rs, params);
      if (options.reconstruction == Reconstruction::WithFreeComplement) {
        for (std::size_t i = 0; i < c.c.size(); ++i)
          c.c[i] += complement[i] * std::polar(1.0, -omega[i] * t);
      }
      std::vector<Complex> v(c.c.size());
      transform.inverse(c.c, v);
      traj->times.push_back(t);
      traj->norms.push_back(c.norm());
      traj->bloch_amplitudes.push_back(std::move(c.c));
      traj->site_amplitudes.push_back(std::move(v));
      traj->atom_amplitudes.push_back(rs.chi);
      traj->reduced_states.push_back(std::move(rs));
    });
  } catch (DivergenceError& e) {
    traj->notes.push_back("partial: integration diverged");
    e.set_partial(traj);
    throw;
  }
  return std::move(*traj);
}

}  // namespace giantatom
