#pragma once

#include <string>
#include <vector>

#include "giantatom/states.hpp"
#include "giantatom/types.hpp"

namespace giantatom {

/// Time series recorded by every propagation backend.
///
/// Real-space amplitudes are always present (for Bloch and reduced runs they
/// are the inverse-transformed projection). Backend-specific raw snapshots are
/// filled only by the backend that produces them.
struct Trajectory {
  std::string backend;
  SiteRange sites;
  std::vector<double> times;
  std::vector<std::vector<Complex>> site_amplitudes;
  std::vector<Complex> atom_amplitudes;
  std::vector<double> norms;

  /// Total probability right after injection for driven runs; amplitudes have
  /// already been divided by sqrt(injected_norm). 1 for wavepacket runs.
  double injected_norm = 1.0;

  int d = 0;
  std::vector<std::vector<Complex>> bloch_amplitudes;  ///< C_k, k = -d..d-1
  std::vector<ReducedState> reduced_states;

  /// Free-form provenance / limitation notes carried into output metadata.
  std::vector<std::string> notes;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }

  double site_probability(std::size_t snapshot, int m) const;
  double atom_probability(std::size_t snapshot) const;
  /// Sum of |v_m|^2 over |m| <= halfwidth (plus |xi|^2 when include_atom).
  double window_probability(std::size_t snapshot, int halfwidth, bool include_atom = false) const;
  /// Probability-weighted mean site index.
  double centroid(std::size_t snapshot) const;
};

}  // namespace giantatom
