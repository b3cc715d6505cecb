#pragma once

#include <span>
#include <vector>

#include "giantatom/model.hpp"
#include "giantatom/states.hpp"
#include "giantatom/trajectory.hpp"

namespace giantatom {

/// Bloch dispersion of the hopping lattice with 2d sites.
class Dispersion {
 public:
  Dispersion(int d, double eta = 1.0);

  /// omega_k = 2 eta cos(k pi / d); IndexError outside -d <= k <= d-1.
  double omega(int k) const;
  /// v_g = -2 eta sin(k pi / d); IndexError outside -d <= k <= d-1.
  double group_velocity(int k) const;

  int d() const { return d_; }
  double eta() const { return eta_; }

 private:
  void check(int k) const;
  int d_;
  double eta_;
};

double omega_k(int k, int d, double eta = 1.0);
double group_velocity(int k, int d, double eta = 1.0);

/// Coupling region of a Bloch mode under the nearest-resonance approximation.
/// K0: |omega_k| < sqrt(2) eta, couples through site 0.
/// KPlus1: omega_k in [-2 eta, -sqrt(2) eta], couples through site +1.
/// KMinus1: omega_k in [sqrt(2) eta, 2 eta], couples through site -1.
enum class Region { K0, KPlus1, KMinus1 };

int coupled_site(Region r);
const char* to_string(Region r);

/// Region of mode k. Decided with exact integer arithmetic so the boundary
/// modes |omega_k| = sqrt(2) eta land deterministically on the K(-+1) side.
Region region_of(int k, int d);
Region region_of(int k, const ModelParams& params, int d);

/// Unitary site <-> Bloch map on -d <= m < d:
///   C_k = sum_m v_m e^{-i m k pi/d} / sqrt(2d),  v_m = sum_k C_k e^{i m k pi/d} / sqrt(2d).
/// Direct O(d^2) sums with a table of the 2d roots of unity.
class BlochTransform {
 public:
  explicit BlochTransform(int d);

  void forward(std::span<const Complex> v, std::span<Complex> c) const;
  void inverse(std::span<const Complex> c, std::span<Complex> v) const;

  /// Zero-pads states whose sites lie inside [-d, d-1]; DimensionError otherwise.
  KState forward(const RealState& state) const;
  RealState inverse(const KState& state) const;

  int d() const { return d_; }

 private:
  int d_;
  double scale_;
  std::vector<Complex> roots_;  // e^{-i pi j / d}, j = 0..2d-1
};

KState bloch_transform(const RealState& state, int d);
RealState inverse_bloch_transform(const KState& kstate);

enum class KCoupling {
  ModeSeparated,  ///< each mode couples only through the site of its region
  Exact,          ///< every mode couples through every coupled site
};

/// Right-hand side in the Bloch basis. Packed layout [C_{-d} .. C_{d-1}, chi].
///
/// ModeSeparated requires coupled sites {-1, 0, +1}; Exact accepts any
/// coupled-site set inside the lattice.
class KGenerator {
 public:
  KGenerator(const ModelParams& params, int d, KCoupling coupling = KCoupling::ModeSeparated);

  void operator()(double t, std::span<const Complex> y, std::span<Complex> dydt) const;

  std::size_t packed_size() const { return omega_.size() + 1; }

 private:
  int d_;
  double coupling_;  // kappa / sqrt(2d)
  double omega_mod_;
  KCoupling mode_;
  std::vector<double> omega_;
  // Mode-separated: region site and static phase e^{-i m(k) k pi/d} per mode.
  std::vector<int> site_of_mode_;
  std::vector<Complex> static_phase_;
  // Exact: static phases per coupled site, row-major [site][mode].
  std::vector<int> sites_;
  std::vector<Complex> site_phase_;
  mutable std::vector<Complex> gain_;  // time-dependent coupling per mode, scratch
};

std::vector<Complex> pack(const KState& state);
void unpack(std::span<const Complex> packed, KState& state);

KState rhs_kspace(const KState& state, double t, const ModelParams& params,
                  KCoupling coupling = KCoupling::ModeSeparated);

/// Evolves the wavepacket excitation in the Bloch basis on the 2d-site ring.
/// Snapshots carry |C_k|^2 and the inverse-transformed real-space amplitudes.
Trajectory run_kspace(const ModelParams& params, const LatticeSpec& lattice,
                      const ExcitationSpec& exc, const IntegratorConfig& integ,
                      KCoupling coupling = KCoupling::ModeSeparated);

}  // namespace giantatom
