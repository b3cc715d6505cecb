#pragma once

#include <cstddef>
#include <vector>

#include "giantatom/types.hpp"

namespace giantatom {

/// Single-excitation state in the site basis: photon amplitudes v_m plus the
/// atomic excited-state amplitude xi.
struct RealState {
  SiteRange sites;
  std::vector<Complex> v;
  Complex xi{0.0, 0.0};
  double t = 0.0;

  RealState() = default;
  explicit RealState(SiteRange range, double time = 0.0) : sites(range), v(range.size()), t(time) {}

  Complex& at(int m) { return v[sites.index(m)]; }
  const Complex& at(int m) const { return v[sites.index(m)]; }
  double norm() const;
};

/// State in the Bloch basis: C_k for k = -d..d-1 plus the atomic amplitude chi.
struct KState {
  int d = 0;
  std::vector<Complex> c;
  Complex chi{0.0, 0.0};
  double t = 0.0;

  KState() = default;
  explicit KState(int half_extent, double time = 0.0)
      : d(half_extent), c(static_cast<std::size_t>(2 * half_extent)), t(time) {}

  /// C_k with k taken modulo 2d (so C_d aliases C_{-d}).
  Complex& at(int k);
  const Complex& at(int k) const;
  double norm() const;
};

/// Collective amplitudes J_{k,s+-}, J_{k,0+-} for k in [0, d/4) plus chi.
struct ReducedState {
  int d = 0;
  std::vector<Complex> j_s_plus, j_s_minus, j_0_plus, j_0_minus;
  Complex chi{0.0, 0.0};
  double t = 0.0;

  ReducedState() = default;
  explicit ReducedState(int half_extent, double time = 0.0);

  std::size_t sector_size() const { return j_s_plus.size(); }

  /// Weight of sector index k in the conserved inner product: 1/2 for k = 0
  /// (its J variables aggregate two Bloch modes), 1 otherwise.
  static double weight(std::size_t k) { return k == 0 ? 0.5 : 1.0; }

  double norm_s() const;
  double norm_0() const;
  double norm() const { return norm_s() + norm_0() + std::norm(chi); }
};

}  // namespace giantatom
