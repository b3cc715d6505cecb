#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "giantatom/trajectory.hpp"

namespace giantatom {

struct LocalizationMetric {
  int window_halfwidth = 10;
  double threshold_fraction = 0.3;
  bool include_atom = false;
  std::vector<double> times;
  std::vector<double> series;  ///< P_loc(t)
  double peak = 0.0;
  double peak_time = 0.0;
  /// Length of the contiguous interval starting at the global peak during
  /// which P_loc >= threshold_fraction * peak.
  double retention_time = 0.0;
};

/// DataError on an empty trajectory.
LocalizationMetric localization_fraction(const Trajectory& traj, int window_halfwidth = 10,
                                         double threshold_fraction = 0.3,
                                         bool include_atom = false);

struct DecayFit {
  double t_start = 0.0;
  double t_end = 0.0;
  double rate = 0.0;       ///< -slope of log|xi|^2 vs t
  double intercept = 0.0;  ///< log|xi|^2 at t = 0 on the fitted line
  double goodness = 0.0;   ///< rms residual / std-dev of log values (0 = exact)
  std::size_t points = 0;
};

/// Least-squares line through log(values) on samples with t in [t_start, t_end].
/// DataError for non-positive values, InsufficientDataError for < 10 samples.
DecayFit decay_fit(std::span<const double> times, std::span<const double> values,
                   double t_start, double t_end);
DecayFit decay_fit(const Trajectory& traj, double t_start, double t_end);

struct VelocityEstimate {
  double velocity = 0.0;
  double intercept = 0.0;
  std::optional<std::string> warning;
};

/// Linear fit of the probability centroid vs t over [t_start, t_end]. Warns
/// when the spatial spread more than doubles inside the window (packet split).
VelocityEstimate centroid_velocity(const Trajectory& traj, double t_start, double t_end);

struct SpectrumPoint {
  double omega = 0.0;
  double density = 0.0;
};

/// Flat-window DFT of v_site(t) over snapshots in [t_start, t_end]:
///   V(w_j) = dt sum_n v(t_n) e^{i w_j t_n},   density = |V|^2 / (2 pi),
/// on the grid w_j = 2 pi j / (N dt) folded to (-pi/dt, pi/dt], ascending.
/// A mode e^{-i w t} therefore appears at +w, and
/// sum_j density_j * (2 pi / (N dt)) = dt * sum_n |v(t_n)|^2.
std::vector<SpectrumPoint> detector_spectrum(const Trajectory& traj, int site, double t_start,
                                             double t_end);

}  // namespace giantatom
