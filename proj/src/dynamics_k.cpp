#include "giantatom/dynamics_k.hpp"

#include <cmath>
#include <cstdlib>
#include <memory>
#include <sstream>

#include "giantatom/errors.hpp"
#include "integrate.hpp"

namespace giantatom {

Dispersion::Dispersion(int d, double eta) : d_(d), eta_(eta) {
  if (d <= 0) throw ConfigError("Bloch lattice half-extent d must be positive");
}

void Dispersion::check(int k) const {
  if (k < -d_ || k > d_ - 1) {
    std::ostringstream os;
    os << "Bloch index k = " << k << " outside [" << -d_ << ", " << d_ - 1 << "]";
    throw IndexError(os.str());
  }
}

double Dispersion::omega(int k) const {
  check(k);
  return 2.0 * eta_ * std::cos(k * kPi / d_);
}

double Dispersion::group_velocity(int k) const {
  check(k);
  return -2.0 * eta_ * std::sin(k * kPi / d_);
}

double omega_k(int k, int d, double eta) { return Dispersion(d, eta).omega(k); }
double group_velocity(int k, int d, double eta) { return Dispersion(d, eta).group_velocity(k); }

int coupled_site(Region r) {
  switch (r) {
    case Region::K0: return 0;
    case Region::KPlus1: return 1;
    case Region::KMinus1: return -1;
  }
  return 0;
}

const char* to_string(Region r) {
  switch (r) {
    case Region::K0: return "K0";
    case Region::KPlus1: return "K+1";
    case Region::KMinus1: return "K-1";
  }
  return "?";
}

Region region_of(int k, int d) {
  if (k < -d || k > d - 1) {
    std::ostringstream os;
    os << "Bloch index k = " << k << " outside [" << -d << ", " << d - 1 << "]";
    throw IndexError(os.str());
  }
  // omega_k >= sqrt(2) eta  <=>  |k| <= d/4;  omega_k <= -sqrt(2) eta  <=>  |k| >= 3d/4.
  const long q = std::labs(static_cast<long>(k));
  if (4 * q <= d) return Region::KMinus1;
  if (4 * q >= 3L * d) return Region::KPlus1;
  return Region::K0;
}

Region region_of(int k, const ModelParams& /*params*/, int d) { return region_of(k, d); }

BlochTransform::BlochTransform(int d) : d_(d), scale_(1.0 / std::sqrt(2.0 * d)) {
  if (d <= 0) throw ConfigError("Bloch lattice half-extent d must be positive");
  roots_.resize(static_cast<std::size_t>(2 * d));
  for (int j = 0; j < 2 * d; ++j) roots_[static_cast<std::size_t>(j)] = std::polar(1.0, -kPi * j / d);
}

void BlochTransform::forward(std::span<const Complex> v, std::span<Complex> c) const {
  const int n = 2 * d_;
  for (int ik = 0; ik < n; ++ik) {
    const long k = ik - d_;
    Complex acc{};
    for (int im = 0; im < n; ++im) {
      const long m = im - d_;
      long idx = (m * k) % n;
      if (idx < 0) idx += n;
      acc += v[static_cast<std::size_t>(im)] * roots_[static_cast<std::size_t>(idx)];
    }
    c[static_cast<std::size_t>(ik)] = acc * scale_;
  }
}

void BlochTransform::inverse(std::span<const Complex> c, std::span<Complex> v) const {
  const int n = 2 * d_;
  for (int im = 0; im < n; ++im) {
    const long m = im - d_;
    Complex acc{};
    for (int ik = 0; ik < n; ++ik) {
      const long k = ik - d_;
      long idx = (m * k) % n;
      if (idx < 0) idx += n;
      acc += c[static_cast<std::size_t>(ik)] * std::conj(roots_[static_cast<std::size_t>(idx)]);
    }
    v[static_cast<std::size_t>(im)] = acc * scale_;
  }
}

KState BlochTransform::forward(const RealState& state) const {
  const SiteRange ring{-d_, d_ - 1};
  if (state.v.size() != state.sites.size()) throw DimensionError("state amplitude count mismatch");
  if (state.sites.size() > 0 && (!ring.contains(state.sites.first) || !ring.contains(state.sites.last))) {
    std::ostringstream os;
    os << "sites [" << state.sites.first << ", " << state.sites.last << "] do not fit the Bloch lattice ["
       << ring.first << ", " << ring.last << "]";
    throw DimensionError(os.str());
  }
  std::vector<Complex> padded(ring.size());
  for (std::size_t i = 0; i < state.v.size(); ++i) padded[ring.index(state.sites.site(i))] = state.v[i];
  KState out(d_, state.t);
  forward(padded, out.c);
  out.chi = state.xi;
  return out;
}

RealState BlochTransform::inverse(const KState& state) const {
  if (state.d != d_ || state.c.size() != static_cast<std::size_t>(2 * d_))
    throw DimensionError("KState extent does not match the transform");
  RealState out(SiteRange{-d_, d_ - 1}, state.t);
  inverse(state.c, out.v);
  out.xi = state.chi;
  return out;
}

KState bloch_transform(const RealState& state, int d) { return BlochTransform(d).forward(state); }

RealState inverse_bloch_transform(const KState& kstate) { return BlochTransform(kstate.d).inverse(kstate); }

KGenerator::KGenerator(const ModelParams& params, int d, KCoupling coupling)
    : d_(d),
      coupling_(params.kappa / std::sqrt(2.0 * d)),
      omega_mod_(params.omega_mod),
      mode_(coupling),
      sites_(params.coupled_sites) {
  if (d <= 0) throw ConfigError("Bloch lattice half-extent d must be positive");
  const std::size_t n = static_cast<std::size_t>(2 * d);
  const Dispersion disp(d, params.eta);
  omega_.resize(n);
  gain_.resize(n);
  for (int k = -d; k < d; ++k) omega_[static_cast<std::size_t>(k + d)] = disp.omega(k);

  if (mode_ == KCoupling::ModeSeparated) {
    if (!params.has_standard_sites())
      throw ConfigError("the mode-separated Bloch model requires coupled sites {-1, 0, +1}");
    site_of_mode_.resize(n);
    static_phase_.resize(n);
    for (int k = -d; k < d; ++k) {
      const int m = coupled_site(region_of(k, d));
      site_of_mode_[static_cast<std::size_t>(k + d)] = m;
      static_phase_[static_cast<std::size_t>(k + d)] = std::polar(1.0, -kPi * m * k / d);
    }
  } else {
    site_phase_.resize(sites_.size() * n);
    for (std::size_t j = 0; j < sites_.size(); ++j)
      for (int k = -d; k < d; ++k)
        site_phase_[j * n + static_cast<std::size_t>(k + d)] = std::polar(1.0, -kPi * sites_[j] * k / d);
  }
}

void KGenerator::operator()(double t, std::span<const Complex> y, std::span<Complex> dydt) const {
  const std::size_t n = omega_.size();
  const Complex chi = y[n];

  // gain_k = sum over the sites mode k couples through of e^{-i m k pi/d} e^{i m Omega t}.
  if (mode_ == KCoupling::ModeSeparated) {
    const Complex up = std::polar(1.0, omega_mod_ * t);
    const Complex table[3] = {std::conj(up), Complex{1.0, 0.0}, up};  // m = -1, 0, +1
    for (std::size_t i = 0; i < n; ++i) gain_[i] = static_phase_[i] * table[site_of_mode_[i] + 1];
  } else {
    std::fill(gain_.begin(), gain_.end(), Complex{});
    for (std::size_t j = 0; j < sites_.size(); ++j) {
      const Complex time_phase = std::polar(1.0, sites_[j] * omega_mod_ * t);
      const Complex* row = site_phase_.data() + j * n;
      for (std::size_t i = 0; i < n; ++i) gain_[i] += row[i] * time_phase;
    }
  }

  Complex dchi{};
  for (std::size_t i = 0; i < n; ++i) {
    dydt[i] = -kI * (omega_[i] * y[i] + coupling_ * gain_[i] * chi);
    dchi += std::conj(gain_[i]) * y[i];
  }
  dydt[n] = -kI * coupling_ * dchi;
}

std::vector<Complex> pack(const KState& state) {
  std::vector<Complex> y(state.c.size() + 1);
  std::copy(state.c.begin(), state.c.end(), y.begin());
  y.back() = state.chi;
  return y;
}

void unpack(std::span<const Complex> packed, KState& state) {
  state.c.assign(packed.begin(), packed.end() - 1);
  state.chi = packed.back();
}

KState rhs_kspace(const KState& state, double t, const ModelParams& params, KCoupling coupling) {
  if (state.c.size() != static_cast<std::size_t>(2 * state.d))
    throw DimensionError("KState must hold exactly 2d amplitudes");
  const KGenerator gen(params, state.d, coupling);
  const std::vector<Complex> y = pack(state);
  std::vector<Complex> dy(y.size());
  gen(t, y, dy);
  KState out(state.d, t);
  unpack(dy, out);
  return out;
}

Trajectory run_kspace(const ModelParams& params, const LatticeSpec& lattice,
                      const ExcitationSpec& exc, const IntegratorConfig& integ, KCoupling coupling) {
  if (!std::holds_alternative<InitialWavepacket>(exc))
    throw ConfigError("the Bloch-space backend needs an InitialWavepacket excitation");
  const int d = lattice.d;
  const BlochTransform transform(d);
  const KGenerator gen(params, d, coupling);
  std::vector<Complex> y = pack(transform.forward(build_wavepacket(lattice.bloch_sites(), exc)));

  auto traj = std::make_shared<Trajectory>();
  traj->backend = coupling == KCoupling::Exact ? "kspace_exact" : "kspace";
  traj->sites = lattice.bloch_sites();
  traj->d = d;
  traj->notes.push_back("periodic lattice of 2d sites (Bloch basis)");

  const std::size_t n = static_cast<std::size_t>(2 * d);
  try {
    detail::integrate(gen, y, integ, [&](std::size_t step, double t, std::span<const Complex> state) {
      if (!detail::is_snapshot(step, integ)) return;
      traj->times.push_back(t);
      traj->bloch_amplitudes.emplace_back(state.begin(), state.begin() + static_cast<long>(n));
      std::vector<Complex> v(n);
      transform.inverse(state.first(n), v);
      traj->site_amplitudes.push_back(std::move(v));
      traj->atom_amplitudes.push_back(state[n]);
      double norm = 0.0;
      for (const Complex& z : state) norm += std::norm(z);
      traj->norms.push_back(norm);
    });
  } catch (DivergenceError& e) {
    traj->notes.push_back("partial: integration diverged");
    e.set_partial(traj);
    throw;
  }
  return std::move(*traj);
}

}  // namespace giantatom
