#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "giantatom/dynamics_k.hpp"
#include "giantatom/errors.hpp"
#include "giantatom/model.hpp"
#include "giantatom/states.hpp"

using namespace giantatom;

namespace {

struct Setup {
  ModelParams params;
  LatticeSpec lattice;
  ExcitationSpec exc = BoundaryDrive{};
  IntegratorConfig integ;

  ValidationReport check() const { return validate(params, lattice, exc, integ); }
};

}  // namespace

TEST_CASE("validate accepts the default drive configuration") {
  Setup s;
  auto r = s.check();
  CHECK(r.ok());
  CHECK(r.warnings.empty());
}

TEST_CASE("validate reports each violated invariant") {
  SUBCASE("negative kappa") {
    Setup s;
    s.params.kappa = -0.1;
    auto r = s.check();
    CHECK_FALSE(r.ok());
    CHECK(r.mentions("kappa >= 0 violated"));
  }
  SUBCASE("d not divisible by 4") {
    Setup s;
    s.lattice.d = 10;
    CHECK(s.check().mentions("d divisible by 4 violated"));
  }
  SUBCASE("non-positive eta and negative omega") {
    Setup s;
    s.params.eta = 0.0;
    s.params.omega_mod = -1.0;
    auto r = s.check();
    CHECK(r.mentions("eta > 0 violated"));
    CHECK(r.mentions("omega_mod >= 0 violated"));
  }
  SUBCASE("coupled site too close to the edge") {
    Setup s;
    s.lattice.m_min = -6;
    s.lattice.m_max = 5;
    s.params.coupled_sites = {-1, 0, 4};
    s.exc = BoundaryDrive{-6, 25.0, 7.0};
    CHECK(s.check().mentions("coupled site 4"));
  }
  SUBCASE("lattice too small") {
    Setup s;
    s.lattice.m_min = -4;
    s.lattice.m_max = 4;
    s.exc = BoundaryDrive{-4, 25.0, 7.0};
    CHECK(s.check().mentions("m_max - m_min + 1 >= 11 violated"));
  }
  SUBCASE("step too coarse for the fastest rate") {
    Setup s;
    s.integ.dt = 0.05;
    CHECK(s.check().mentions("dt * max(Omega, 2 eta, kappa) < 0.1 violated"));
  }
  SUBCASE("integrator and excitation ranges") {
    Setup s;
    s.integ.snapshot_stride = 0;
    s.integ.t_end = -1.0;
    s.exc = BoundaryDrive{500, 25.0, 0.0};
    auto r = s.check();
    CHECK(r.mentions("snapshot_stride >= 1 violated"));
    CHECK(r.mentions("t_end > 0 violated"));
    CHECK(r.mentions("tau > 0 violated"));
    CHECK(r.mentions("drive_site within lattice violated"));
  }
  SUBCASE("wavepacket width and centre") {
    Setup s;
    s.exc = InitialWavepacket{2000, -1.0, -0.5};
    auto r = s.check();
    CHECK(r.mentions("delta_m > 0 violated"));
    CHECK(r.mentions("m0 within lattice violated"));
  }
}

TEST_CASE("gaussian drive values") {
  BoundaryDrive drive;
  CHECK(gaussian_drive(drive.t0, drive) == 1.0);
  CHECK(gaussian_drive(drive.t0 + drive.tau, drive) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(gaussian_drive(drive.t0 + 5 * drive.tau, ExcitationSpec{drive}) ==
        doctest::Approx(std::exp(-25.0)).epsilon(1e-12));
  for (double x : {0.1, 1.7, 3.3, 12.0, 40.0}) {
    CHECK(gaussian_drive(drive.t0 + x, drive) == gaussian_drive(drive.t0 - x, drive));
  }
  CHECK_THROWS_AS(gaussian_drive(0.0, ExcitationSpec{InitialWavepacket{}}), ConfigError);
}

TEST_CASE("wavepacket construction") {
  const InitialWavepacket packet{-250, 10.0, -0.5};
  LatticeSpec lattice{-500, 499, 500};
  RealState s = build_wavepacket(lattice.bloch_sites(), packet);

  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.xi == Complex{});
  auto it = std::max_element(s.v.begin(), s.v.end(),
                             [](Complex a, Complex b) { return std::norm(a) < std::norm(b); });
  CHECK(s.sites.site(static_cast<std::size_t>(it - s.v.begin())) == -250);

  // Constant phase advance k0 pi per site.
  for (int m = -280; m < -220; ++m) {
    const double dphi = std::arg(s.at(m + 1) / s.at(m));
    CHECK(std::remainder(dphi - packet.k0 * kPi, 2 * kPi) == doctest::Approx(0.0).epsilon(1e-12));
  }

  // The Bloch spectrum peaks at k pi / d = -pi/2.
  KState c = bloch_transform(s, lattice.d);
  auto kt = std::max_element(c.c.begin(), c.c.end(),
                             [](Complex a, Complex b) { return std::norm(a) < std::norm(b); });
  CHECK(static_cast<int>(kt - c.c.begin()) - lattice.d == -lattice.d / 2);
}

TEST_CASE("wavepacket errors and clearance warning") {
  SiteRange sites{-100, 99};
  CHECK_THROWS_AS(build_wavepacket(sites, InitialWavepacket{150, 5.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(build_wavepacket(sites, BoundaryDrive{}), ConfigError);
  CHECK_FALSE(wavepacket_clearance_warning(sites, InitialWavepacket{0, 10.0, 0.0}).has_value());
  auto w = wavepacket_clearance_warning(sites, InitialWavepacket{0, 40.0, 0.0});
  REQUIRE(w.has_value());
  CHECK(w->find("clearance") != std::string::npos);
}
