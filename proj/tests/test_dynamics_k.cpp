#include <doctest.h>

#include <cmath>
#include <vector>

#include "giantatom/dynamics_k.hpp"
#include "giantatom/dynamics_real.hpp"
#include "giantatom/errors.hpp"
#include "oracles.hpp"

using namespace giantatom;

TEST_CASE("dispersion values and parity") {
  const int d = 500;
  Dispersion disp(d);
  CHECK(disp.omega(0) == doctest::Approx(2.0));
  CHECK(std::abs(disp.omega(d / 2)) < 1e-15);
  CHECK(std::abs(disp.omega(-d / 2)) < 1e-15);
  CHECK(disp.omega(-d) == doctest::Approx(-2.0));
  CHECK(disp.group_velocity(-d / 2) == doctest::Approx(2.0));
  CHECK(disp.group_velocity(0) == 0.0);
  CHECK(disp.group_velocity(d / 4) == doctest::Approx(-std::sqrt(2.0)));
  for (int k = 1; k < d; ++k) {
    CHECK(disp.omega(k) == disp.omega(-k));
    CHECK(disp.group_velocity(k) == -disp.group_velocity(-k));
  }
  CHECK(omega_k(0, d, 2.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(disp.omega(d), IndexError);
  CHECK_THROWS_AS(disp.group_velocity(-d - 1), IndexError);
}

TEST_CASE("regions partition the band at |omega_k| = sqrt2 eta") {
  const int d = 500;
  CHECK(region_of(d / 2, d) == Region::K0);
  CHECK(region_of(-d / 2, d) == Region::K0);
  CHECK(region_of(0, d) == Region::KMinus1);
  CHECK(region_of(-d, d) == Region::KPlus1);
  // Exact boundaries omega_k = +-sqrt2 land on the K(-+1) side.
  CHECK(region_of(d / 4, d) == Region::KMinus1);
  CHECK(region_of(-d / 4, d) == Region::KMinus1);
  CHECK(region_of(3 * d / 4, d) == Region::KPlus1);
  CHECK(region_of(-3 * d / 4, d) == Region::KPlus1);
  for (int dd : {8, 12, 100, 500}) {
    for (int k = -dd; k < dd; ++k) CHECK(coupled_site(region_of(k, dd)) == oracle::region_site(k, dd));
  }
}

TEST_CASE("forward transform matches the direct sum") {
  const int d = 24;
  auto v = oracle::random_state(2 * d, 7);
  std::vector<Complex> c(2 * d);
  BlochTransform(d).forward(v, c);
  CHECK(oracle::max_abs_diff(c, oracle::bloch(v, d)) < 1e-13);
}

TEST_CASE("round trip and Parseval over random states") {
  const int d = 40;
  BlochTransform tr(d);
  std::vector<Complex> c(2 * d), back(2 * d);
  for (unsigned trial = 0; trial < 100; ++trial) {
    auto v = oracle::random_state(2 * d, 100 + trial);
    tr.forward(v, c);
    tr.inverse(c, back);
    CHECK(oracle::max_abs_diff(v, back) < 1e-10);
    double nc = 0.0;
    for (auto z : c) nc += std::norm(z);
    CHECK(std::abs(nc - 1.0) < 1e-10);
  }
}

TEST_CASE("transform of elementary states") {
  const int d = 16;
  const double a = 1.0 / std::sqrt(2.0 * d);
  RealState point(SiteRange{-d, d - 1});
  point.at(0) = 1.0;
  point.xi = {0.3, 0.1};
  KState c = bloch_transform(point, d);
  for (auto z : c.c) CHECK(std::abs(z - a) < 1e-15);
  CHECK(c.chi == point.xi);

  RealState wave(SiteRange{-d, d - 1});
  for (int m = -d; m < d; ++m) wave.at(m) = std::polar(a, m * kPi / d);
  KState cw = bloch_transform(wave, d);
  for (int k = -d; k < d; ++k) CHECK(std::abs(cw.at(k) - (k == 1 ? 1.0 : 0.0)) < 1e-14);

  KState zero_mode(d);
  zero_mode.at(0) = 1.0;
  RealState uniform = inverse_bloch_transform(zero_mode);
  for (auto z : uniform.v) CHECK(std::abs(z - a) < 1e-15);
}

TEST_CASE("padding policy") {
  const int d = 8;
  RealState inner(SiteRange{-5, 5});
  inner.at(3) = 1.0;
  KState c = bloch_transform(inner, d);
  RealState back = inverse_bloch_transform(c);
  CHECK(back.sites == SiteRange{-d, d - 1});
  CHECK(std::abs(back.at(3) - 1.0) < 1e-14);
  CHECK(std::abs(back.at(-8)) < 1e-14);
  CHECK_THROWS_AS(bloch_transform(RealState(SiteRange{-20, 20}), d), DimensionError);
}

TEST_CASE("mode-separated generator matches the direct formula") {
  ModelParams p{1.0, 2.05, 0.5, {-1, 0, 1}};
  const int d = 40;
  auto y = oracle::random_state(2 * d + 1, 3);
  KGenerator gen(p, d);
  std::vector<Complex> dy(y.size());
  for (double t : {0.0, 1.3, 77.7}) {
    gen(t, y, dy);
    Complex dchi;
    auto ref = oracle::kspace_rhs(std::vector<Complex>(y.begin(), y.end() - 1), y.back(), t, p, d, &dchi);
    CHECK(oracle::max_abs_diff(std::vector<Complex>(dy.begin(), dy.end() - 1), ref) < 1e-14);
    CHECK(std::abs(dy.back() - dchi) < 1e-14);
  }
  CHECK_THROWS_AS(KGenerator(ModelParams{1.0, 2.0, 0.5, {-2, 0, 2}}, d), ConfigError);
}

TEST_CASE("rhs_kspace limiting cases") {
  const int d = 32;
  SUBCASE("decoupled atom") {
    ModelParams p{1.0, 3.0, 0.0, {-1, 0, 1}};
    KState s(d);
    auto v = oracle::random_state(2 * d, 11);
    s.c = v;
    s.chi = {0.5, 0.5};
    auto ds = rhs_kspace(s, 4.2, p);
    for (int k = -d; k < d; ++k) CHECK(ds.at(k) == -kI * omega_k(k, d) * s.at(k));
    CHECK(ds.chi == Complex{});
  }
  SUBCASE("uniform coupling magnitude") {
    ModelParams p{1.0, 3.0, 0.5, {-1, 0, 1}};
    KState s(d);
    s.chi = 1.0;
    auto ds = rhs_kspace(s, 0.0, p);
    for (auto z : ds.c) CHECK(std::abs(z) == doctest::Approx(0.5 / std::sqrt(2.0 * d)).epsilon(1e-14));
  }
  SUBCASE("wrong size") {
    KState s(d);
    s.c.resize(10);
    CHECK_THROWS_AS(rhs_kspace(s, 0.0, ModelParams{}), DimensionError);
  }
}

TEST_CASE("exact coupling is the transform of the real-space generator") {
  ModelParams p{1.0, 2.05, 0.5, {-1, 0, 1}};
  const int d = 32;
  SiteRange sites{-d, d - 1};
  RealState s = build_wavepacket(sites, InitialWavepacket{-4, 3.0, 0.3});
  s.xi = {0.2, -0.4};
  const double t = 3.7;
  auto dreal = rhs_real(s, t, p);
  auto dk = rhs_kspace(bloch_transform(s, d), t, p, KCoupling::Exact);
  auto expected = bloch_transform(dreal, d);
  CHECK(oracle::max_abs_diff(dk.c, expected.c) < 1e-12);
  CHECK(std::abs(dk.chi - dreal.xi) < 1e-12);
}

TEST_CASE("decoupled k-space and real-space evolutions agree") {
  ModelParams p{1.0, 2.05, 0.0, {-1, 0, 1}};
  LatticeSpec lattice{-64, 63, 64};
  InitialWavepacket packet{-20, 4.0, -0.5};
  IntegratorConfig integ{0.005, 15.0, 200};
  auto real = run_real(p, lattice, packet, integ);
  auto bloch = run_kspace(p, lattice, packet, integ);
  REQUIRE(real.size() == bloch.size());
  for (std::size_t s = 0; s < real.size(); ++s) {
    CHECK(oracle::max_abs_diff(real.site_amplitudes[s], bloch.site_amplitudes[s]) < 1e-8);
    // Free evolution only rotates phases in the Bloch basis.
    for (std::size_t k = 0; k < bloch.bloch_amplitudes[s].size(); ++k) {
      CHECK(std::norm(bloch.bloch_amplitudes[s][k]) ==
            doctest::Approx(std::norm(bloch.bloch_amplitudes[0][k])).epsilon(1e-9));
    }
  }
}

TEST_CASE("k-space norm drift over 300 time units") {
  ModelParams p{1.0, 2.05, 0.5, {-1, 0, 1}};
  LatticeSpec lattice{-500, 499, 500};
  IntegratorConfig integ{0.005, 300.0, 2000};
  auto traj = run_kspace(p, lattice, InitialWavepacket{-250, 10.0, -0.5}, integ);
  for (double n : traj.norms) CHECK(std::abs(n - traj.norms.front()) < 1e-6);
}

TEST_CASE("band-edge weight builds up only near Omega = 2.05") {
  const int d = 500;
  LatticeSpec lattice{-500, 499, d};
  IntegratorConfig integ{0.005, 200.0, 40000};
  auto edge_weight = [&](double omega) {
    auto traj = run_kspace(ModelParams{1.0, omega, 0.5, {-1, 0, 1}}, lattice,
                           InitialWavepacket{-250, 10.0, -0.5}, integ);
    const auto& c = traj.bloch_amplitudes.back();
    double w = 0.0;
    for (int k = -d; k < d; ++k) {
      const double q = std::abs(k * 1.0 / d);  // |k pi/d| / pi
      if (q < 0.1 / kPi || q > 1.0 - 0.1 / kPi) w += std::norm(c[k + d]);
    }
    return w;
  };
  const double near = edge_weight(2.05);
  const double far = edge_weight(3.0);
  CHECK(near > 1e-2);
  CHECK(far < 0.1 * near);
}
