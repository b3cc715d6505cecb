#include "giantatom/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "giantatom/errors.hpp"
#include "giantatom/states.hpp"

namespace giantatom {

bool ModelParams::has_standard_sites() const {
  std::vector<int> sorted = coupled_sites;
  std::sort(sorted.begin(), sorted.end());
  return sorted == std::vector<int>{-1, 0, 1};
}

std::size_t IntegratorConfig::steps() const {
  if (!(dt > 0.0) || !(t_end > 0.0)) return 0;
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

bool ValidationReport::mentions(const std::string& needle) const {
  auto has = [&](const std::string& s) { return s.find(needle) != std::string::npos; };
  return std::any_of(violations.begin(), violations.end(), has) ||
         std::any_of(warnings.begin(), warnings.end(), has);
}

namespace {

template <class T>
std::string describe(const char* what, T value) {
  std::ostringstream os;
  os << what << " (got " << value << ")";
  return os.str();
}

void check_sites_inside(const std::vector<int>& sites, SiteRange range, const char* label,
                        ValidationReport& report) {
  for (int m : sites) {
    if (m < range.first + 2 || m > range.last - 2) {
      std::ostringstream os;
      os << "coupled site " << m << " must lie >= 2 sites inside the " << label << " lattice ["
         << range.first << ", " << range.last << "] violated";
      report.violations.push_back(os.str());
    }
  }
}

}  // namespace

ValidationReport validate(const ModelParams& params, const LatticeSpec& lattice,
                          const ExcitationSpec& exc, const IntegratorConfig& integ) {
  ValidationReport r;

  if (!(params.eta > 0.0)) r.violations.push_back(describe("eta > 0 violated", params.eta));
  if (!(params.kappa >= 0.0)) r.violations.push_back(describe("kappa >= 0 violated", params.kappa));
  if (!(params.omega_mod >= 0.0))
    r.violations.push_back(describe("omega_mod >= 0 violated", params.omega_mod));
  if (params.coupled_sites.empty()) r.violations.push_back("coupled_sites non-empty violated");
  {
    std::vector<int> sorted = params.coupled_sites;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      r.violations.push_back("coupled_sites distinct violated");
  }

  const int span = lattice.m_max - lattice.m_min + 1;
  if (span < 11) r.violations.push_back(describe("m_max - m_min + 1 >= 11 violated", span));
  if (lattice.d < 8) r.violations.push_back(describe("d >= 8 violated", lattice.d));
  if (lattice.d % 4 != 0) r.violations.push_back(describe("d divisible by 4 violated", lattice.d));

  if (span >= 11) check_sites_inside(params.coupled_sites, lattice.real_sites(), "real-space", r);
  if (lattice.d >= 8) check_sites_inside(params.coupled_sites, lattice.bloch_sites(), "Bloch", r);

  if (const auto* drive = std::get_if<BoundaryDrive>(&exc)) {
    if (!(drive->tau > 0.0)) r.violations.push_back(describe("tau > 0 violated", drive->tau));
    if (!lattice.real_sites().contains(drive->drive_site))
      r.violations.push_back(describe("drive_site within lattice violated", drive->drive_site));
  } else {
    const auto& packet = std::get<InitialWavepacket>(exc);
    if (!(packet.delta_m > 0.0))
      r.violations.push_back(describe("delta_m > 0 violated", packet.delta_m));
    if (!lattice.real_sites().contains(packet.m0) && !lattice.bloch_sites().contains(packet.m0))
      r.violations.push_back(describe("m0 within lattice violated", packet.m0));
    if (packet.delta_m > 0.0) {
      if (auto w = wavepacket_clearance_warning(lattice.bloch_sites(), packet)) r.warnings.push_back(*w);
    }
  }

  if (!(integ.dt > 0.0)) r.violations.push_back(describe("dt > 0 violated", integ.dt));
  if (!(integ.t_end > 0.0)) r.violations.push_back(describe("t_end > 0 violated", integ.t_end));
  if (integ.snapshot_stride < 1)
    r.violations.push_back(describe("snapshot_stride >= 1 violated", integ.snapshot_stride));
  const double fastest = std::max({std::abs(params.omega_mod), 2.0 * params.eta, params.kappa});
  if (integ.dt > 0.0 && !(integ.dt * fastest < 0.1))
    r.violations.push_back(describe("dt * max(Omega, 2 eta, kappa) < 0.1 violated", integ.dt * fastest));
  if (integ.dt > 0.0 && integ.t_end > 0.0) {
    const double ratio = integ.t_end / integ.dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-6 * ratio)
      r.warnings.push_back(describe("t_end is not an integer multiple of dt; rounded", ratio));
  }
  return r;
}

double gaussian_drive(double t, const BoundaryDrive& drive) {
  const double x = (t - drive.t0) / drive.tau;
  return std::exp(-x * x);
}

double gaussian_drive(double t, const ExcitationSpec& exc) {
  const auto* drive = std::get_if<BoundaryDrive>(&exc);
  if (drive == nullptr) throw ConfigError("gaussian_drive requires a BoundaryDrive excitation");
  return gaussian_drive(t, *drive);
}

std::optional<std::string> wavepacket_clearance_warning(const SiteRange& sites,
                                                        const InitialWavepacket& packet) {
  const double clearance = 5.0 * packet.delta_m;
  const double left = packet.m0 - sites.first;
  const double right = sites.last - packet.m0;
  if (left >= clearance && right >= clearance) return std::nullopt;
  std::ostringstream os;
  os << "boundary clearance violated: m0 = " << packet.m0 << " is within 5 delta_m = " << clearance
     << " sites of the lattice edge [" << sites.first << ", " << sites.last << "]";
  return os.str();
}

RealState build_wavepacket(const SiteRange& sites, const ExcitationSpec& exc) {
  const auto* packet = std::get_if<InitialWavepacket>(&exc);
  if (packet == nullptr) throw ConfigError("build_wavepacket requires an InitialWavepacket excitation");
  if (!sites.contains(packet->m0)) {
    std::ostringstream os;
    os << "wavepacket centre m0 = " << packet->m0 << " outside lattice [" << sites.first << ", "
       << sites.last << "]";
    throw ConfigError(os.str());
  }
  if (!(packet->delta_m > 0.0)) throw ConfigError("wavepacket width delta_m must be positive");

  RealState state(sites);
  const double inv_two_var = 1.0 / (2.0 * packet->delta_m * packet->delta_m);
  double total = 0.0;
  for (std::size_t i = 0; i < state.v.size(); ++i) {
    const double x = static_cast<double>(sites.site(i) - packet->m0);
    const double envelope = std::exp(-x * x * inv_two_var);
    state.v[i] = std::polar(envelope, packet->k0 * kPi * x);
    total += envelope * envelope;
  }
  const double scale = 1.0 / std::sqrt(total);
  for (Complex& a : state.v) a *= scale;
  return state;
}

}  // namespace giantatom
