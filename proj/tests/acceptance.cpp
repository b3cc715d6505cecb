// Acceptance suite: one PASS/FAIL line per criterion, plus informational
// lines. Exit status is non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "giantatom/analysis.hpp"
#include "giantatom/boundstate.hpp"
#include "giantatom/config.hpp"
#include "giantatom/dynamics_k.hpp"
#include "giantatom/dynamics_real.hpp"
#include "giantatom/dynamics_reduced.hpp"
#include "giantatom/output.hpp"
#include "giantatom/runner.hpp"
#include "oracles.hpp"

using namespace giantatom;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int n, bool ok, const std::string& what) {
  std::printf("criterion %d: %s  %s\n", n, ok ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void info(const std::string& what) {
  std::printf("  info: %s\n", what.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

Trajectory run_preset(const RunConfig& cfg, Backend backend) {
  switch (backend) {
    case Backend::Real: return run_real(cfg.model, cfg.lattice, cfg.excitation, cfg.integrator);
    case Backend::KSpace: return run_kspace(cfg.model, cfg.lattice, cfg.excitation, cfg.integrator);
    case Backend::KSpaceExact:
      return run_kspace(cfg.model, cfg.lattice, cfg.excitation, cfg.integrator, KCoupling::Exact);
    case Backend::Reduced: return run_reduced(cfg.model, cfg.lattice, cfg.excitation, cfg.integrator, cfg.reduced);
    default: break;
  }
  throw Error("no trajectory for this backend");
}

double window_sum(const Trajectory& traj, std::size_t snap, int lo, int hi) {
  double s = 0.0;
  for (int m = std::max(lo, traj.sites.first); m <= std::min(hi, traj.sites.last); ++m)
    s += traj.site_probability(snap, m);
  return s;
}

// Contiguous time after the global peak during which P_loc >= level * peak.
double time_above(const LocalizationMetric& loc, double level) {
  double first = -1.0, last = -1.0;
  for (std::size_t i = 0; i < loc.times.size(); ++i) {
    if (loc.times[i] < loc.peak_time) continue;
    if (loc.series[i] < level * loc.peak) break;
    if (first < 0) first = loc.times[i];
    last = loc.times[i];
  }
  return first < 0 ? 0.0 : last - first;
}

struct Fig2 {
  Trajectory traj;
  LocalizationMetric loc;
  DecayFit fit;
  double seconds = 0.0;
};

Fig2 fig2(const std::string& preset) {
  Fig2 out;
  RunConfig cfg = make_preset(preset);
  auto t0 = Clock::now();
  out.traj = run_preset(cfg, Backend::Real);
  out.seconds = seconds_since(t0);
  out.loc = localization_fraction(out.traj, cfg.analysis.window_halfwidth, cfg.analysis.threshold_fraction);
  out.fit = decay_fit(out.traj, *cfg.analysis.decay_t_start, *cfg.analysis.decay_t_end);
  return out;
}

void criterion_1_2(Fig2& a, Fig2& b) {
  const auto cfg = make_preset("fig2a");
  const auto& drive = std::get<BoundaryDrive>(cfg.excitation);
  const double t_inj = drive.t0 + 6.0 * drive.tau;
  const auto& tr = a.traj;
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (tr.times[i] < t_inj) continue;
    lo = std::min(lo, tr.norms[i]);
    hi = std::max(hi, tr.norms[i]);
  }
  const double drift = hi - lo;
  const std::size_t last = tr.size() - 1;
  const double transmitted = window_sum(tr, last, 11, tr.sites.last);
  const double reflected = window_sum(tr, last, tr.sites.first, -11);
  double xi_peak = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) xi_peak = std::max(xi_peak, tr.atom_probability(i));
  const double xi_end = tr.atom_probability(last);

  const bool ok = a.seconds < 60.0 && transmitted > 0.05 && reflected > 0.05 && drift < 1e-6 &&
                  xi_end < 1e-3 * xi_peak && a.fit.rate > 0.0 && a.loc.retention_time < 15.0;
  report(1, ok,
         fmt("fig2a: %.2f s (< 60), transmitted %.3f and reflected %.3f (> 0.05 each), post-drive norm drift "
             "%.2e (< 1e-6), |xi|^2 end/peak %.2e (< 1e-3), tail rate %.4f (> 0), retention %.1f (< 15)",
             a.seconds, transmitted, reflected, drift, xi_end / xi_peak, a.fit.rate, a.loc.retention_time));

  const double ratio = b.fit.rate / a.fit.rate;
  const bool ok2 = b.loc.retention_time >= 100.0 && ratio <= 0.2;
  report(2, ok2,
         fmt("fig2b: retention %.1f (>= 100 at w = 10, threshold 0.3), late decay rate %.4f vs fig2a %.4f, "
             "ratio %.3f (<= 0.2)",
             b.loc.retention_time, b.fit.rate, a.fit.rate, ratio));
  info(fmt("fig2b P_loc peak %.3f at t = %.1f; P_loc(t_end) = %.4f; time above 0.03 x peak after the peak: %.1f",
           b.loc.peak, b.loc.peak_time, b.loc.series.back(), time_above(b.loc, 0.03)));
  info(fmt("fig2a P_loc(t_end) = %.2e; time above 0.03 x peak after the peak: %.1f", a.loc.series.back(),
           time_above(a.loc, 0.03)));
}

void criterion_3_4() {
  RunConfig cfg = make_preset("fig3");
  const auto& packet = std::get<InitialWavepacket>(cfg.excitation);
  auto real = run_preset(cfg, Backend::Real);
  auto bloch = run_preset(cfg, Backend::KSpace);
  auto exact = run_preset(cfg, Backend::KSpaceExact);
  auto reduced = run_preset(cfg, Backend::Reduced);

  // Earliest time the packet's 5-delta edge can reach a wall at the maximal group velocity 2 eta.
  const double reach = std::min(cfg.lattice.m_max - packet.m0, std::abs(packet.m0) + std::abs(cfg.lattice.m_min));
  const double t_contact = (reach - 5.0 * packet.delta_m) / (2.0 * cfg.model.eta);

  auto lr = localization_fraction(real);
  auto lk = localization_fraction(bloch);
  auto le = localization_fraction(exact);
  auto lred = localization_fraction(reduced);
  const double floor = 1e-6 * lr.peak;

  double worst_k = 0.0, worst_red = 1.0, worst_exact = 0.0;
  double first_bad = -1.0;
  std::size_t compared = 0;
  for (std::size_t i = 0; i < lr.times.size(); ++i) {
    if (lr.times[i] > t_contact || lr.series[i] < floor) continue;
    ++compared;
    const double rel = std::abs(lk.series[i] - lr.series[i]) / lr.series[i];
    if (rel > 0.1 && first_bad < 0) first_bad = lr.times[i];
    worst_k = std::max(worst_k, rel);
    worst_exact = std::max(worst_exact, std::abs(le.series[i] - lr.series[i]) / lr.series[i]);
    const double r = lred.series[i] / lk.series[i];
    worst_red = std::max(worst_red, std::max(r, 1.0 / r));
  }
  const bool ret_ok = lred.retention_time >= 0.5 * lk.retention_time && lred.retention_time <= 2.0 * lk.retention_time;
  const bool ok = compared > 0 && worst_k <= 0.1 && worst_red <= 2.0 && ret_ok;
  report(3, ok,
         fmt("fig3 over %zu snapshots with t <= %.1f and P_loc >= 1e-6 peak: real vs k-space max rel. diff %.3f "
             "(<= 0.10); reduced vs k-space max factor %.4f (<= 2), retention %.1f vs %.1f (within 2x)",
             compared, t_contact, worst_k, worst_red, lred.retention_time, lk.retention_time));
  if (first_bad >= 0)
    info(fmt("real vs k-space first exceeds 10%% at t = %.1f; P_loc(real) = %.3e, P_loc(k-space) = %.3e at t_end",
             first_bad, lr.series.back(), lk.series.back()));
  info(fmt("real vs exact-coupling k-space (no mode separation) max rel. diff %.2e", worst_exact));

  // Four-peak structure in |C_k|^2 after the interaction epoch.
  const int d = cfg.lattice.d;
  const auto& c = bloch.bloch_amplitudes.back();
  auto density = [&](int k) {
    k = ((k + d) % (2 * d) + 2 * d) % (2 * d) - d;
    return std::norm(c[static_cast<std::size_t>(k + d)]);
  };
  const int centres[4] = {-d, -d / 2, 0, d / 2};
  const int reach_k = d / 8;  // +-pi/8 around each centre
  double peaks[4];
  int where[4];
  for (int p = 0; p < 4; ++p) {
    peaks[p] = 0.0;
    for (int k = centres[p] - reach_k; k <= centres[p] + reach_k; ++k) {
      if (density(k) > peaks[p]) {
        peaks[p] = density(k);
        where[p] = k;
      }
    }
  }
  bool sep_ok = true;
  double worst_gap = 0.0;
  for (int p = 0; p < 4; ++p) {
    const int a = where[p];
    const int b = p == 3 ? where[0] + 2 * d : where[p + 1];
    double gap = 1e300;
    for (int k = a + 1; k < b; ++k) gap = std::min(gap, density(k));
    const double lower = std::min(peaks[p], peaks[(p + 1) % 4]);
    worst_gap = std::max(worst_gap, gap / lower);
    if (!(gap <= 0.1 * lower)) sep_ok = false;
  }
  bool local_max = true;
  for (int p = 0; p < 4; ++p) local_max = local_max && peaks[p] > 0.0;
  report(4, local_max && sep_ok,
         fmt("fig3 |C_k|^2 at t = %.0f: peaks %.2e %.2e %.2e %.2e at k pi/d = %.3f %.3f %.3f %.3f pi; "
             "worst gap/peak %.2e (<= 0.1)",
             bloch.times.back(), peaks[0], peaks[1], peaks[2], peaks[3], where[0] / double(d), where[1] / double(d),
             where[2] / double(d), where[3] / double(d), worst_gap));
}

void criterion_5_6() {
  auto t0 = Clock::now();
  double worst = 0.0;
  for (double omega : {1.5, 2.05, 3.0})
    for (int d : {100, 500}) {
      ModelParams p{1.0, omega, 0.5, {-1, 0, 1}};
      worst = std::max(worst, verify_stationarity(solve_bound_state(p, d), p));
    }
  const double secs = seconds_since(t0);
  report(5, worst < 1e-12 && secs < 1.0,
         fmt("max stationarity residual %.2e (< 1e-12) over Omega {1.5, 2.05, 3}, d {100, 500}; %.4f s (< 1)", worst,
             secs));

  auto above = solve_bound_state(ModelParams{1.0, 2.05, 0.5, {-1, 0, 1}}, 500);
  bool decreasing = true;
  for (std::size_t k = 1; k < above.j_s_minus.size(); ++k)
    decreasing = decreasing && std::abs(above.j_s_minus[k]) < std::abs(above.j_s_minus[k - 1]);
  auto below = solve_bound_state(ModelParams{1.0, 0.5, 0.5, {-1, 0, 1}}, 500);
  std::size_t arg = 0;
  for (std::size_t k = 0; k < below.j_s_minus.size(); ++k)
    if (std::abs(below.j_s_minus[k]) > std::abs(below.j_s_minus[arg])) arg = k;
  report(6, decreasing && arg > 0,
         fmt("|j_s-| strictly decreasing at Omega = 2.05: %s; argmax at Omega = 0.5: k = %zu (> 0)",
             decreasing ? "yes" : "no", arg));
}

void criterion_7(const fs::path& scratch) {
  const std::vector<double> omegas{0.5, 1.0, 1.5, 2.05, 2.2, 2.5, 3.0};
  auto rows = sweep(make_preset("fig2b"), "omega_mod", omegas, scratch / "sweep");
  std::string table;
  std::size_t best = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    table += fmt(" %.2f:%.1f", rows[i].value, rows[i].retention_time);
    if (rows[i].retention_time > rows[best].retention_time) best = i;
  }
  const double peak = rows[3].retention_time;
  bool all_ok = true;
  for (const auto& r : rows) all_ok = all_ok && r.status == "ok";
  const bool ok = all_ok && best == 3 && peak >= 5.0 * rows.front().retention_time &&
                  peak >= 5.0 * rows.back().retention_time;
  report(7, ok,
         "retention by Omega:" + table +
             fmt("; max at Omega = %.2f (needs 2.05), 2.05/0.5 = %.2f, 2.05/3.0 = %.2f (>= 5 each)", rows[best].value,
                 peak / rows.front().retention_time, peak / rows.back().retention_time));
  std::string tails;
  for (const auto& r : rows) tails += fmt(" %.2f:%.4f", r.value, r.late_decay_rate);
  info("late decay rate by Omega:" + tails);
}

void criterion_8() {
  auto t0 = Clock::now();

  // RK4 global order against a dt/8 reference.
  ModelParams p{1.0, 2.05, 0.5, {-1, 0, 1}};
  SiteRange sites{-40, 40};
  const RealState s0 = build_wavepacket(sites, InitialWavepacket{-15, 4.0, -0.5});
  auto final_state = [&](double dt) {
    RealState s = s0;
    const int n = static_cast<int>(std::lround(20.0 / dt));
    for (int i = 0; i < n; ++i) s = step_rk4(s, p, std::nullopt, dt);
    return pack(s);
  };
  const auto ref = final_state(0.005 / 8);
  const double e1 = oracle::max_abs_diff(final_state(0.02), ref);
  const double e2 = oracle::max_abs_diff(final_state(0.01), ref);
  const double e3 = oracle::max_abs_diff(final_state(0.005), ref);
  const bool order_ok = e1 / e2 > 8 && e1 / e2 < 32 && e2 / e3 > 8 && e2 / e3 < 32;

  // Bloch round trip and Parseval.
  const int d = 500;
  BlochTransform tr(d);
  std::vector<Complex> c(2 * d), back(2 * d);
  double round_trip = 0.0, parseval = 0.0;
  for (unsigned trial = 0; trial < 20; ++trial) {
    auto v = oracle::random_state(2 * d, 1000 + trial);
    tr.forward(v, c);
    tr.inverse(c, back);
    round_trip = std::max(round_trip, oracle::max_abs_diff(v, back));
    double nc = 0.0;
    for (auto z : c) nc += std::norm(z);
    parseval = std::max(parseval, std::abs(nc - 1.0));
  }

  // Dispersion check and detector-spectrum Parseval on free packets.
  double worst_v = 0.0, spec_parseval = 0.0;
  for (double k0 : {-0.75, -0.5, -0.25}) {
    auto traj = run_real(ModelParams{1.0, 3.0, 0.0, {-1, 0, 1}}, LatticeSpec{-200, 200, 200},
                         InitialWavepacket{-100, 10.0, k0}, IntegratorConfig{0.005, 100.0, 20});
    const double v = centroid_velocity(traj, 5.0, 40.0).velocity;
    const double expected = -2.0 * std::sin(k0 * kPi);
    worst_v = std::max(worst_v, std::abs(v - expected) / expected);
    auto spec = detector_spectrum(traj, 0, 0.0, 100.0);
    const double dt = traj.times[1] - traj.times[0];
    const double dw = spec[1].omega - spec[0].omega;
    double lhs = 0.0, rhs = 0.0;
    for (const auto& pt : spec) lhs += pt.density * dw;
    for (std::size_t i = 0; i < traj.size(); ++i) rhs += dt * traj.site_probability(i, 0);
    spec_parseval = std::max(spec_parseval, std::abs(lhs - rhs) / rhs);
  }
  const double secs = seconds_since(t0);
  const bool ok = order_ok && round_trip <= 1e-10 && parseval <= 1e-9 && spec_parseval <= 1e-9 && worst_v <= 0.02 &&
                  secs < 120.0;
  report(8, ok,
         fmt("RK4 error ratios %.2f %.2f (16 within 2x); Bloch round trip %.1e (<= 1e-10); Parseval %.1e / "
             "spectrum %.1e (<= 1e-9); velocity error %.4f (<= 0.02); %.1f s (< 120)",
             e1 / e2, e2 / e3, round_trip, parseval, spec_parseval, worst_v, secs));
}

void criterion_9(const fs::path& scratch) {
  bool same = true;
  std::size_t compared = 0;
  for (const auto& name : preset_names()) {
    RunConfig cfg = make_preset(name);
    auto a = run(cfg, scratch / (name + "_a"));
    auto b = run(cfg, scratch / (name + "_b"));
    if (a.files.size() != b.files.size()) same = false;
    for (std::size_t i = 0; same && i < a.files.size(); ++i) {
      const auto bytes_a = read_text(scratch / (name + "_a") / a.files[i].name);
      const auto bytes_b = read_text(scratch / (name + "_b") / b.files[i].name);
      same = same && a.files[i].name == b.files[i].name && bytes_a == bytes_b;
      ++compared;
    }
  }
  report(9, same, fmt("%zu output files compared across two runs of each preset; byte-identical: %s", compared,
                      same ? "yes" : "no"));
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const fs::path scratch = fs::temp_directory_path() / "giantatom_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  try {
    auto a = fig2("fig2a");
    auto b = fig2("fig2b");
    criterion_1_2(a, b);
    criterion_3_4();
    criterion_5_6();
    criterion_7(scratch);
    criterion_8();
    criterion_9(scratch);
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d criteria failed; total %.1f s\n", failures, seconds_since(start));
  return failures == 0 ? 0 : 1;
}
