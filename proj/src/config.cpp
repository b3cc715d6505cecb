#include "giantatom/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace giantatom {

namespace {

const std::vector<std::string> kSections{"run",        "model",    "lattice", "excitation",
                                         "integrator", "analysis", "reduced"};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double to_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(text.substr(used)) != "") {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(text.substr(used)) != "") {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::vector<int> to_int_list(const std::string& key, const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_int(key, trim(item)));
  if (out.empty()) throw ConfigError(key + ": expected a comma-separated list of integers");
  return out;
}

template <class T>
T& excitation_as(RunConfig& cfg, const std::string& key, const char* type) {
  if (auto* p = std::get_if<T>(&cfg.excitation)) return *p;
  throw ConfigError(key + " requires excitation.type = " + type);
}

void drop_artifact_flag(RunConfig& cfg, const std::string& key) {
  std::erase(cfg.artifact_defaults, key);
}

// 1-based line and value column of `section.key` in INI text; {0, 0} if absent.
std::pair<int, int> locate(const std::string& text, const std::string& section, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  std::string current;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      current = trim(t.substr(1, t.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos || current != section) continue;
    if (trim(line.substr(0, eq)) != key) continue;
    auto v = line.find_first_not_of(" \t", eq + 1);
    return {n, static_cast<int>((v == std::string::npos ? eq + 1 : v) + 1)};
  }
  return {0, 0};
}

int section_line(const std::string& text, const std::string& section) {
  std::istringstream in(text);
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    auto t = trim(line);
    if (t.size() >= 2 && t.front() == '[' && t.back() == ']' && trim(t.substr(1, t.size() - 2)) == section) {
      return n;
    }
  }
  return 0;
}

int first_column(const std::string& text, int line_no) {
  std::istringstream in(text);
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (n == line_no) {
      auto p = line.find_first_not_of(" \t");
      return p == std::string::npos ? 1 : static_cast<int>(p) + 1;
    }
  }
  return 1;
}

}  // namespace

ConfigParseError::ConfigParseError(const std::string& source, int line, int column,
                                   const std::string& message)
    : ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

const char* to_string(Backend b) {
  switch (b) {
    case Backend::Real: return "real";
    case Backend::KSpace: return "kspace";
    case Backend::KSpaceExact: return "kspace_exact";
    case Backend::Reduced: return "reduced";
    case Backend::BoundState: return "boundstate";
  }
  return "?";
}

Backend parse_backend(const std::string& name) {
  for (auto b : {Backend::Real, Backend::KSpace, Backend::KSpaceExact, Backend::Reduced, Backend::BoundState}) {
    if (name == to_string(b)) return b;
  }
  throw ConfigError("unknown backend '" + name + "' (real, kspace, kspace_exact, reduced, boundstate)");
}

std::vector<std::string> preset_names() { return {"fig2a", "fig2b", "fig3"}; }

RunConfig make_preset(const std::string& name) {
  RunConfig cfg;
  cfg.preset = name;
  if (name == "fig2a" || name == "fig2b") {
    cfg.model.omega_mod = name == "fig2a" ? 3.0 : 2.05;
    cfg.model.kappa = 0.5;
    cfg.lattice.m_min = -200;
    cfg.lattice.m_max = 200;
    cfg.excitation = BoundaryDrive{-200, 25.0, 5.0 * std::sqrt(2.0)};
    cfg.integrator = {0.005, 250.0, 20};
    cfg.analysis.decay_t_start = name == "fig2a" ? 150.0 : 180.0;
    cfg.analysis.decay_t_end = 250.0;
    cfg.backend = Backend::Real;
    cfg.artifact_defaults = {"integrator.dt",
                             "integrator.t_end",
                             "integrator.snapshot_stride",
                             "analysis.window_halfwidth",
                             "analysis.threshold_fraction",
                             "analysis.decay_t_start",
                             "analysis.decay_t_end"};
    return cfg;
  }
  if (name == "fig3") {
    cfg.model.omega_mod = 2.05;
    cfg.model.kappa = 0.5;
    cfg.lattice = {-500, 499, 500};
    cfg.excitation = InitialWavepacket{-250, 10.0, -0.5};
    cfg.integrator = {0.005, 340.0, 100};
    cfg.backend = Backend::KSpace;
    cfg.artifact_defaults = {"lattice.m_min",
                             "lattice.m_max",
                             "integrator.dt",
                             "integrator.t_end",
                             "integrator.snapshot_stride",
                             "analysis.window_halfwidth",
                             "analysis.threshold_fraction"};
    return cfg;
  }
  throw ConfigError("unknown preset '" + name + "' (fig2a, fig2b, fig3)");
}

void set_value(RunConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  drop_artifact_flag(cfg, key);

  if (key == "run.backend") {
    cfg.backend = parse_backend(value);
  } else if (key == "run.preset") {
    throw ConfigError("run.preset can only appear in a configuration file");
  } else if (key == "model.eta") {
    cfg.model.eta = to_double(key, value);
  } else if (key == "model.omega_mod") {
    cfg.model.omega_mod = to_double(key, value);
  } else if (key == "model.kappa") {
    cfg.model.kappa = to_double(key, value);
  } else if (key == "model.coupled_sites") {
    cfg.model.coupled_sites = to_int_list(key, value);
  } else if (key == "lattice.m_min") {
    cfg.lattice.m_min = to_int(key, value);
  } else if (key == "lattice.m_max") {
    cfg.lattice.m_max = to_int(key, value);
  } else if (key == "lattice.d") {
    cfg.lattice.d = to_int(key, value);
  } else if (key == "excitation.type") {
    if (value == "drive") {
      if (!std::holds_alternative<BoundaryDrive>(cfg.excitation)) cfg.excitation = BoundaryDrive{};
    } else if (value == "wavepacket") {
      if (!std::holds_alternative<InitialWavepacket>(cfg.excitation)) cfg.excitation = InitialWavepacket{};
    } else {
      throw ConfigError(key + ": expected drive or wavepacket, got '" + value + "'");
    }
  } else if (key == "excitation.drive_site") {
    excitation_as<BoundaryDrive>(cfg, key, "drive").drive_site = to_int(key, value);
  } else if (key == "excitation.t0") {
    excitation_as<BoundaryDrive>(cfg, key, "drive").t0 = to_double(key, value);
  } else if (key == "excitation.tau") {
    excitation_as<BoundaryDrive>(cfg, key, "drive").tau = to_double(key, value);
  } else if (key == "excitation.m0") {
    excitation_as<InitialWavepacket>(cfg, key, "wavepacket").m0 = to_int(key, value);
  } else if (key == "excitation.delta_m") {
    excitation_as<InitialWavepacket>(cfg, key, "wavepacket").delta_m = to_double(key, value);
  } else if (key == "excitation.k0") {
    excitation_as<InitialWavepacket>(cfg, key, "wavepacket").k0 = to_double(key, value);
  } else if (key == "integrator.dt") {
    cfg.integrator.dt = to_double(key, value);
  } else if (key == "integrator.t_end") {
    cfg.integrator.t_end = to_double(key, value);
  } else if (key == "integrator.snapshot_stride") {
    cfg.integrator.snapshot_stride = to_int(key, value);
  } else if (key == "analysis.window_halfwidth") {
    cfg.analysis.window_halfwidth = to_int(key, value);
  } else if (key == "analysis.threshold_fraction") {
    cfg.analysis.threshold_fraction = to_double(key, value);
  } else if (key == "analysis.include_atom") {
    cfg.analysis.include_atom = to_bool(key, value);
  } else if (key == "analysis.decay_t_start") {
    cfg.analysis.decay_t_start = value == "none" ? std::nullopt : std::optional(to_double(key, value));
  } else if (key == "analysis.decay_t_end") {
    cfg.analysis.decay_t_end = value == "none" ? std::nullopt : std::optional(to_double(key, value));
  } else if (key == "analysis.detector_site") {
    cfg.analysis.detector_site = value == "none" ? std::nullopt : std::optional(to_int(key, value));
  } else if (key == "reduced.sector_coupling") {
    if (value == "on") cfg.reduced.sector_coupling = SectorCoupling::On;
    else if (value == "off") cfg.reduced.sector_coupling = SectorCoupling::Off;
    else throw ConfigError(key + ": expected on or off, got '" + value + "'");
  } else if (key == "reduced.reconstruction") {
    if (value == "with_free_complement") cfg.reduced.reconstruction = Reconstruction::WithFreeComplement;
    else if (value == "coupled_only") cfg.reduced.reconstruction = Reconstruction::CoupledOnly;
    else throw ConfigError(key + ": expected with_free_complement or coupled_only, got '" + value + "'");
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

RunConfig parse_config(const std::string& text, const std::string& source, std::optional<RunConfig> base) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    int line = static_cast<int>(e.line());
    throw ConfigParseError(source, line, first_column(text, line), e.message());
  }

  for (const auto& [section, body] : tree) {
    if (std::find(kSections.begin(), kSections.end(), section) == kSections.end()) {
      throw ConfigParseError(source, section_line(text, section), 1, "unknown section [" + section + "]");
    }
  }

  RunConfig cfg = base ? *base : RunConfig{};
  auto run_section = tree.get_child_optional("run");
  if (run_section) {
    if (auto preset = run_section->get_optional<std::string>("preset")) {
      try {
        cfg = make_preset(trim(*preset));
      } catch (const ConfigError& e) {
        auto [line, col] = locate(text, "run", "preset");
        throw ConfigParseError(source, line, col, e.what());
      }
    }
  }

  auto apply = [&](const std::string& section, const std::string& key, const std::string& value) {
    try {
      set_value(cfg, section + "." + key, value);
    } catch (const ConfigError& e) {
      auto [line, col] = locate(text, section, key);
      throw ConfigParseError(source, line, col, e.what());
    }
  };

  // excitation.type decides which excitation keys are legal, so it goes first.
  if (auto exc = tree.get_child_optional("excitation")) {
    if (auto type = exc->get_optional<std::string>("type")) apply("excitation", "type", *type);
  }
  for (const auto& [section, body] : tree) {
    for (const auto& [key, node] : body) {
      if (section == "run" && key == "preset") continue;
      if (section == "excitation" && key == "type") continue;
      if (!node.empty()) {
        auto [line, col] = locate(text, section, key);
        throw ConfigParseError(source, line, col, "nested keys are not supported");
      }
      apply(section, key, node.data());
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, std::optional<RunConfig> base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open configuration file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string(), std::move(base));
}

std::string to_ini(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[run]\n";
  out << "backend = " << to_string(cfg.backend) << "\n";
  out << "\n[model]\n";
  out << "eta = " << fmt_double(cfg.model.eta) << "\n";
  out << "omega_mod = " << fmt_double(cfg.model.omega_mod) << "\n";
  out << "kappa = " << fmt_double(cfg.model.kappa) << "\n";
  out << "coupled_sites = ";
  for (std::size_t i = 0; i < cfg.model.coupled_sites.size(); ++i) {
    out << (i ? ", " : "") << cfg.model.coupled_sites[i];
  }
  out << "\n\n[lattice]\n";
  out << "m_min = " << cfg.lattice.m_min << "\n";
  out << "m_max = " << cfg.lattice.m_max << "\n";
  out << "d = " << cfg.lattice.d << "\n";
  out << "\n[excitation]\n";
  if (auto* drive = std::get_if<BoundaryDrive>(&cfg.excitation)) {
    out << "type = drive\n";
    out << "drive_site = " << drive->drive_site << "\n";
    out << "t0 = " << fmt_double(drive->t0) << "\n";
    out << "tau = " << fmt_double(drive->tau) << "\n";
  } else {
    const auto& wp = std::get<InitialWavepacket>(cfg.excitation);
    out << "type = wavepacket\n";
    out << "m0 = " << wp.m0 << "\n";
    out << "delta_m = " << fmt_double(wp.delta_m) << "\n";
    out << "k0 = " << fmt_double(wp.k0) << "\n";
  }
  out << "\n[integrator]\n";
  out << "dt = " << fmt_double(cfg.integrator.dt) << "\n";
  out << "t_end = " << fmt_double(cfg.integrator.t_end) << "\n";
  out << "snapshot_stride = " << cfg.integrator.snapshot_stride << "\n";
  out << "\n[analysis]\n";
  out << "window_halfwidth = " << cfg.analysis.window_halfwidth << "\n";
  out << "threshold_fraction = " << fmt_double(cfg.analysis.threshold_fraction) << "\n";
  out << "include_atom = " << (cfg.analysis.include_atom ? "true" : "false") << "\n";
  auto opt = [](const std::optional<double>& v) { return v ? fmt_double(*v) : std::string("none"); };
  out << "decay_t_start = " << opt(cfg.analysis.decay_t_start) << "\n";
  out << "decay_t_end = " << opt(cfg.analysis.decay_t_end) << "\n";
  out << "detector_site = "
      << (cfg.analysis.detector_site ? std::to_string(*cfg.analysis.detector_site) : "none") << "\n";
  out << "\n[reduced]\n";
  out << "sector_coupling = " << (cfg.reduced.sector_coupling == SectorCoupling::On ? "on" : "off") << "\n";
  out << "reconstruction = "
      << (cfg.reduced.reconstruction == Reconstruction::WithFreeComplement ? "with_free_complement"
                                                                            : "coupled_only")
      << "\n";
  return out.str();
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xF]);
  }
  return out;
}

}  // namespace giantatom
