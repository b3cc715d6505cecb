#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>

#include "giantatom/config.hpp"
#include "giantatom/output.hpp"
#include "giantatom/runner.hpp"

namespace {

using namespace giantatom;

struct Common {
  std::string config;
  std::string preset;
  std::string backend;
  std::optional<double> omega, kappa, dt, t_end;
  std::string out;
};

void add_common(CLI::App& app, Common& c) {
  app.add_option("--config", c.config, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--preset", c.preset, "fig2a, fig2b or fig3");
  app.add_option("--backend", c.backend, "real, kspace, kspace_exact, reduced or boundstate");
  app.add_option("--omega", c.omega, "modulation frequency Omega");
  app.add_option("--kappa", c.kappa, "atom-resonator coupling");
  app.add_option("--dt", c.dt, "RK4 step");
  app.add_option("--t-end", c.t_end, "final time");
  app.add_option("--out", c.out, "output directory (default $GIANTATOM_OUTPUT_DIR or ./giantatom_out)");
}

std::string num(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

RunConfig resolve(const Common& c) {
  std::optional<RunConfig> base;
  if (!c.preset.empty()) base = make_preset(c.preset);
  RunConfig cfg = c.config.empty() ? (base ? *base : RunConfig{}) : load_config(c.config, base);
  if (!c.backend.empty()) set_value(cfg, "run.backend", c.backend);
  if (c.omega) set_value(cfg, "model.omega_mod", num(*c.omega));
  if (c.kappa) set_value(cfg, "model.kappa", num(*c.kappa));
  if (c.dt) set_value(cfg, "integrator.dt", num(*c.dt));
  if (c.t_end) set_value(cfg, "integrator.t_end", num(*c.t_end));
  return cfg;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("--sweep-values: cannot parse '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Giant-atom coupled-resonator waveguide simulator"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run_cmd = app.add_subcommand("run", "run one configuration");
  add_common(*run_cmd, run_opts);

  Common sweep_opts;
  std::string axis;
  std::string values;
  unsigned workers = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "run one configuration per parameter value");
  add_common(*sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--sweep-axis", axis, "omega_mod, kappa or tau")->required();
  sweep_cmd->add_option("--sweep-values", values, "comma-separated values")->required();
  sweep_cmd->add_option("--workers", workers, "parallel runs (0 = hardware threads)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      auto cfg = resolve(run_opts);
      auto dir = resolve_output_dir(run_opts.out);
      auto manifest = run(cfg, dir);
      std::cout << read_text(dir / "metrics.txt");
      std::cout << "outputs: " << dir.string() << " (" << manifest.wall_seconds << " s)\n";
    } else {
      auto cfg = resolve(sweep_opts);
      auto dir = resolve_output_dir(sweep_opts.out);
      auto rows = sweep(cfg, axis, parse_values(values), dir, workers);
      std::cout << read_text(dir / "sweep.csv");
      std::cout << rows.size() << " runs, table in " << (dir / "sweep.csv").string() << "\n";
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation failed:\n";
    for (const auto& v : e.report().violations) std::cerr << "  " << v << "\n";
    for (const auto& w : e.report().warnings) std::cerr << "  warning: " << w << "\n";
    return 2;
  } catch (const DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << " (partial outputs written)\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
