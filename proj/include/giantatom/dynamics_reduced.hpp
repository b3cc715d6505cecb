#pragma once

#include <span>
#include <vector>

#include "giantatom/model.hpp"
#include "giantatom/states.hpp"
#include "giantatom/trajectory.hpp"

namespace giantatom {

/// Whether the atom also couples to the propagating (0) sector. Off reproduces
/// the isolated localized subsystem used for the stationary bound state.
enum class SectorCoupling { On, Off };

/// How reduced snapshots are mapped back to Bloch amplitudes.
enum class Reconstruction {
  /// Minimal-norm inverse of construct_J: each J value is shared equally by the
  /// Bloch modes it aggregates (the atom-coupled combination only).
  CoupledOnly,
  /// CoupledOnly plus the part of the initial state the atom never sees,
  /// evolved freely as C_k(0) e^{-i omega_k t}.
  WithFreeComplement,
};

struct ReducedOptions {
  SectorCoupling sector_coupling = SectorCoupling::On;
  Reconstruction reconstruction = Reconstruction::WithFreeComplement;
};

/// Detuning Omega - omega_k of localized-sector index k (omega_k = 2 eta cos(k pi/d)).
double localized_detuning(int k, int d, const ModelParams& params);
/// Rotation rate of the propagating-sector pair k: -2 eta sin(k pi/d).
double propagating_rate(int k, int d, const ModelParams& params);

/// Collective variables built from the Bloch amplitudes at kstate.t:
///   J_{k,s+-} = {[C_k e^{-ik pi/d} + C_{-k} e^{ik pi/d}] e^{i Omega t}
///               +- [C_{d-k} e^{i(pi - k pi/d)} + C_{-(d-k)} e^{-i(pi - k pi/d)}] e^{-i Omega t}} / 2
///   J_{k,0+-} = {[C_{d/2-k} + C_{-(d/2-k)}] +- [C_{d/2+k} + C_{-(d/2+k)}]} / 2
/// DimensionError unless d is a positive multiple of 4.
ReducedState construct_J(const KState& kstate, const ModelParams& params);

/// Minimal-norm Bloch state whose construct_J equals `state` (at state.t).
KState reconstruct_bloch(const ReducedState& state, const ModelParams& params);

/// Packed layout [J_s+ (n), J_s- (n), J_0+ (n), J_0- (n), chi] with n = d/4.
class ReducedGenerator {
 public:
  ReducedGenerator(const ModelParams& params, int d,
                   SectorCoupling coupling = SectorCoupling::On);

  void operator()(double t, std::span<const Complex> y, std::span<Complex> dydt) const;

  std::size_t packed_size() const { return 4 * n_ + 1; }

 private:
  std::size_t n_;
  double coupling_;  // kappa / sqrt(2d)
  SectorCoupling sector_coupling_;
  std::vector<double> detuning_;  // Omega - omega_k
  std::vector<double> rate_;      // propagating-sector rate
};

std::vector<Complex> pack(const ReducedState& state);
void unpack(std::span<const Complex> packed, ReducedState& state);

ReducedState rhs_reduced(const ReducedState& state, const ModelParams& params,
                         SectorCoupling coupling = SectorCoupling::On);

/// Evolves the reduced model from the wavepacket excitation. Requires coupled
/// sites {-1, 0, +1}. Snapshots carry the reduced state plus the reconstructed
/// Bloch and real-space amplitudes.
Trajectory run_reduced(const ModelParams& params, const LatticeSpec& lattice,
                       const ExcitationSpec& exc, const IntegratorConfig& integ,
                       ReducedOptions options = {});

}  // namespace giantatom
