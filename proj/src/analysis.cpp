#include "giantatom/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "giantatom/errors.hpp"

namespace giantatom {

LocalizationMetric localization_fraction(const Trajectory& traj, int window_halfwidth,
                                         double threshold_fraction, bool include_atom) {
  if (traj.empty()) throw DataError("localization_fraction: empty trajectory");
  if (window_halfwidth < 0) throw DataError("localization window half-width must be >= 0");

  LocalizationMetric out;
  out.window_halfwidth = window_halfwidth;
  out.threshold_fraction = threshold_fraction;
  out.include_atom = include_atom;
  out.times = traj.times;
  out.series.resize(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i)
    out.series[i] = traj.window_probability(i, window_halfwidth, include_atom);

  const auto peak_it = std::max_element(out.series.begin(), out.series.end());
  const auto peak_idx = static_cast<std::size_t>(peak_it - out.series.begin());
  out.peak = *peak_it;
  out.peak_time = out.times[peak_idx];

  const double floor = threshold_fraction * out.peak;
  std::size_t last = peak_idx;
  while (last + 1 < out.series.size() && out.series[last + 1] >= floor) ++last;
  out.retention_time = out.times[last] - out.peak_time;
  return out;
}

DecayFit decay_fit(std::span<const double> times, std::span<const double> values, double t_start,
                   double t_end) {
  if (times.size() != values.size()) throw DataError("decay_fit: times and values differ in length");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_start || times[i] > t_end) continue;
    if (!(values[i] > 0.0)) {
      std::ostringstream os;
      os << "decay_fit: non-positive value " << values[i] << " at t = " << times[i];
      throw DataError(os.str());
    }
    xs.push_back(times[i]);
    ys.push_back(std::log(values[i]));
  }
  if (xs.size() < 10) {
    std::ostringstream os;
    os << "decay_fit: window [" << t_start << ", " << t_end << "] holds " << xs.size()
       << " samples, need >= 10";
    throw InsufficientDataError(os.str());
  }

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss_res += r * r;
  }

  DecayFit fit;
  fit.t_start = t_start;
  fit.t_end = t_end;
  fit.rate = -slope;
  fit.intercept = intercept;
  fit.goodness = syy > 0.0 ? std::sqrt(ss_res / syy) : 0.0;
  fit.points = xs.size();
  return fit;
}

DecayFit decay_fit(const Trajectory& traj, double t_start, double t_end) {
  if (traj.empty()) throw DataError("decay_fit: empty trajectory");
  if (t_start < traj.times.front() - 1e-9 || t_end > traj.times.back() + 1e-9)
    throw DataError("decay_fit: fit window outside the trajectory span");
  std::vector<double> xi2(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) xi2[i] = traj.atom_probability(i);
  return decay_fit(traj.times, xi2, t_start, t_end);
}

VelocityEstimate centroid_velocity(const Trajectory& traj, double t_start, double t_end) {
  std::vector<double> ts, xs, spread;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    if (t < t_start || t > t_end) continue;
    const auto& v = traj.site_amplitudes[i];
    double p0 = 0.0, p1 = 0.0, p2 = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double p = std::norm(v[j]);
      const double m = traj.sites.site(j);
      p0 += p;
      p1 += p * m;
      p2 += p * m * m;
    }
    if (!(p0 > 0.0)) throw DataError("centroid_velocity: zero-norm snapshot in window");
    const double mean = p1 / p0;
    ts.push_back(t);
    xs.push_back(mean);
    spread.push_back(std::sqrt(std::max(0.0, p2 / p0 - mean * mean)));
  }
  if (ts.size() < 2) throw DataError("centroid_velocity: fewer than two snapshots in window");

  const double n = static_cast<double>(ts.size());
  double mt = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i];
    mx += xs[i];
  }
  mt /= n;
  mx /= n;
  double stt = 0.0, stx = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    stx += (ts[i] - mt) * (xs[i] - mx);
  }

  VelocityEstimate out;
  out.velocity = stx / stt;
  out.intercept = mx - out.velocity * mt;
  const auto [lo, hi] = std::minmax_element(spread.begin(), spread.end());
  if (*hi > 2.0 * *lo) {
    std::ostringstream os;
    os << "spatial spread varies from " << *lo << " to " << *hi
       << " sites inside the window; more than one packet may be present";
    out.warning = os.str();
  }
  return out;
}

std::vector<SpectrumPoint> detector_spectrum(const Trajectory& traj, int site, double t_start,
                                             double t_end) {
  if (traj.empty()) throw DataError("detector_spectrum: empty trajectory");
  if (!traj.sites.contains(site)) throw DataError("detector_spectrum: detector site outside lattice");
  if (t_start < traj.times.front() - 1e-9 || t_end > traj.times.back() + 1e-9 || !(t_end > t_start))
    throw DataError("detector_spectrum: time range outside the trajectory");

  std::vector<Complex> samples;
  std::vector<double> ts;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.times[i] < t_start || traj.times[i] > t_end) continue;
    samples.push_back(traj.site_amplitudes[i][traj.sites.index(site)]);
    ts.push_back(traj.times[i]);
  }
  if (samples.size() < 2) throw DataError("detector_spectrum: fewer than two samples in range");
  const double dt = ts[1] - ts[0];
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (std::abs(ts[i] - ts[i - 1] - dt) > 1e-6 * dt)
      throw DataError("detector_spectrum: snapshots are not uniformly spaced in the range");
  }

  const auto n = static_cast<long>(samples.size());
  const double d_omega = 2.0 * kPi / (static_cast<double>(n) * dt);
  std::vector<Complex> roots(static_cast<std::size_t>(n));
  for (long j = 0; j < n; ++j) roots[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * kPi * j / n);

  std::vector<SpectrumPoint> out;
  out.reserve(samples.size());
  // j in (-n/2, n/2], ascending frequency.
  for (long j = -((n - 1) / 2); j <= n / 2; ++j) {
    Complex acc{};
    for (long m = 0; m < n; ++m) {
      long idx = (j * m) % n;
      if (idx < 0) idx += n;
      acc += samples[static_cast<std::size_t>(m)] * roots[static_cast<std::size_t>(idx)];
    }
    acc *= dt;
    out.push_back({static_cast<double>(j) * d_omega, std::norm(acc) / (2.0 * kPi)});
  }
  return out;
}

}  // namespace giantatom
