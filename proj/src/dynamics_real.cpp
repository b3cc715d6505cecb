#include "giantatom/dynamics_real.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "giantatom/errors.hpp"
#include "integrate.hpp"

namespace giantatom {

RealGenerator::RealGenerator(const ModelParams& params, SiteRange sites,
                             std::optional<BoundaryDrive> drive)
    : eta_(params.eta),
      kappa_(params.kappa),
      omega_(params.omega_mod),
      sites_(sites),
      coupled_(params.coupled_sites),
      drive_(drive) {
  for (int m : coupled_) {
    if (!sites_.contains(m)) {
      std::ostringstream os;
      os << "coupled site " << m << " outside lattice [" << sites_.first << ", " << sites_.last << "]";
      throw ConfigError(os.str());
    }
    coupled_idx_.push_back(sites_.index(m));
  }
  if (drive_) {
    if (!sites_.contains(drive_->drive_site)) throw ConfigError("drive site outside lattice");
    drive_idx_ = sites_.index(drive_->drive_site);
  }
}

void RealGenerator::operator()(double t, std::span<const Complex> y, std::span<Complex> dydt) const {
  const std::size_t n = sites_.size();
  const Complex xi = y[n];

  if (n == 1) {
    dydt[0] = Complex{};
  } else {
    dydt[0] = -kI * eta_ * y[1];
    for (std::size_t i = 1; i + 1 < n; ++i) dydt[i] = -kI * eta_ * (y[i + 1] + y[i - 1]);
    dydt[n - 1] = -kI * eta_ * y[n - 2];
  }

  // e^{i m Omega t} as integer powers of one root; the atom touches only a few sites.
  const Complex base = std::polar(1.0, omega_ * t);
  Complex dxi{};
  for (std::size_t j = 0; j < coupled_.size(); ++j) {
    Complex phase{1.0, 0.0};
    const int m = coupled_[j];
    for (int p = 0; p < std::abs(m); ++p) phase *= base;
    if (m < 0) phase = std::conj(phase);
    const std::size_t i = coupled_idx_[j];
    dydt[i] += -kI * kappa_ * xi * phase;
    dxi += y[i] * std::conj(phase);
  }
  dydt[n] = -kI * kappa_ * dxi;

  if (drive_) dydt[drive_idx_] += -kI * gaussian_drive(t, *drive_);
}

std::vector<Complex> pack(const RealState& state) {
  std::vector<Complex> y(state.v.size() + 1);
  std::copy(state.v.begin(), state.v.end(), y.begin());
  y.back() = state.xi;
  return y;
}

void unpack(std::span<const Complex> packed, RealState& state) {
  state.v.assign(packed.begin(), packed.end() - 1);
  state.xi = packed.back();
}

namespace {

std::optional<BoundaryDrive> drive_from(const std::optional<ExcitationSpec>& exc) {
  if (!exc) return std::nullopt;
  const auto* drive = std::get_if<BoundaryDrive>(&*exc);
  if (drive == nullptr) throw ConfigError("a source term requires a BoundaryDrive excitation");
  return *drive;
}

void check_dims(const RealState& state) {
  if (state.v.size() != state.sites.size()) {
    std::ostringstream os;
    os << "state holds " << state.v.size() << " amplitudes for " << state.sites.size() << " sites";
    throw DimensionError(os.str());
  }
}

}  // namespace

RealState rhs_real(const RealState& state, double t, const ModelParams& params,
                   const std::optional<ExcitationSpec>& drive) {
  check_dims(state);
  const RealGenerator gen(params, state.sites, drive_from(drive));
  const std::vector<Complex> y = pack(state);
  std::vector<Complex> dy(y.size());
  gen(t, y, dy);
  RealState out(state.sites, t);
  unpack(dy, out);
  return out;
}

RealState step_rk4(const RealState& state, const ModelParams& params,
                   const std::optional<ExcitationSpec>& drive, double dt) {
  check_dims(state);
  const RealGenerator gen(params, state.sites, drive_from(drive));
  std::vector<Complex> y = pack(state);
  Rk4Stepper stepper(y.size());
  stepper.step(gen, state.t, dt, std::span<Complex>(y));
  check_finite(y, 1, state.t + dt);
  RealState out(state.sites, state.t + dt);
  unpack(y, out);
  return out;
}

Trajectory run_real(const ModelParams& params, const LatticeSpec& lattice,
                    const ExcitationSpec& exc, const IntegratorConfig& integ) {
  const SiteRange sites = lattice.real_sites();
  const auto* drive = std::get_if<BoundaryDrive>(&exc);

  std::vector<Complex> y;
  if (drive != nullptr) {
    y.assign(sites.size() + 1, Complex{});
  } else {
    y = pack(build_wavepacket(sites, exc));
  }
  const RealGenerator gen(params, sites, drive ? std::optional<BoundaryDrive>(*drive) : std::nullopt);

  auto traj = std::make_shared<Trajectory>();
  traj->backend = "real";
  traj->sites = sites;

  const double t_injected = drive ? drive->t0 + 6.0 * drive->tau : 0.0;
  bool injected = drive == nullptr;
  double injected_norm = 1.0;

  auto record = [&](double t, std::span<const Complex> state) {
    traj->times.push_back(t);
    traj->site_amplitudes.emplace_back(state.begin(), state.end() - 1);
    traj->atom_amplitudes.push_back(state.back());
    double norm = 0.0;
    for (const Complex& z : state) norm += std::norm(z);
    traj->norms.push_back(norm);
  };

  try {
    detail::integrate(gen, y, integ, [&](std::size_t step, double t, std::span<const Complex> state) {
      if (!injected && t >= t_injected) {
        injected = true;
        injected_norm = 0.0;
        for (const Complex& z : state) injected_norm += std::norm(z);
      }
      if (detail::is_snapshot(step, integ)) record(t, state);
    });
  } catch (DivergenceError& e) {
    traj->notes.push_back("partial: integration diverged");
    e.set_partial(traj);
    throw;
  }

  if (drive != nullptr) {
    if (!injected) {
      injected_norm = traj->norms.empty() ? 1.0 : traj->norms.back();
      traj->notes.push_back("t_end precedes t0 + 6 tau; normalized by the final norm");
    }
    if (injected_norm > 0.0) {
      const double scale = 1.0 / std::sqrt(injected_norm);
      for (auto& snap : traj->site_amplitudes)
        for (Complex& z : snap) z *= scale;
      for (Complex& z : traj->atom_amplitudes) z *= scale;
      for (double& n : traj->norms) n /= injected_norm;
    }
    traj->injected_norm = injected_norm;
    traj->notes.push_back("probabilities normalized by the injected norm measured at t0 + 6 tau");
  }
  return std::move(*traj);
}

}  // namespace giantatom
