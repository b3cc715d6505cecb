#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "giantatom/analysis.hpp"
#include "giantatom/boundstate.hpp"
#include "giantatom/config.hpp"
#include "giantatom/dynamics_k.hpp"
#include "giantatom/dynamics_real.hpp"
#include "giantatom/dynamics_reduced.hpp"
#include "giantatom/output.hpp"
#include "giantatom/runner.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace giantatom;

namespace {

template <class T>
py::array_t<T> to_array(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

template <class T, class F>
py::array_t<T> rows_to_array(const std::vector<std::vector<Complex>>& rows, F&& f) {
  const py::ssize_t n = static_cast<py::ssize_t>(rows.size());
  const py::ssize_t w = n ? static_cast<py::ssize_t>(rows.front().size()) : 0;
  py::array_t<T> out({n, w});
  auto a = out.template mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i) {
    for (py::ssize_t j = 0; j < w; ++j) a(i, j) = f(rows[i][j]);
  }
  return out;
}

std::vector<Complex> from_array(const py::array_t<Complex, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw DimensionError("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Giant atom in a dynamically modulated coupled-resonator waveguide";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<IndexError>(m, "IndexError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<SingularityError>(m, "SingularityError", base.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double eta, double omega_mod, double kappa, std::vector<int> sites) {
             return ModelParams{eta, omega_mod, kappa, std::move(sites)};
           }),
           "eta"_a = 1.0, "omega_mod"_a = 3.0, "kappa"_a = 0.5, "coupled_sites"_a = std::vector<int>{-1, 0, 1})
      .def_readwrite("eta", &ModelParams::eta)
      .def_readwrite("omega_mod", &ModelParams::omega_mod)
      .def_readwrite("kappa", &ModelParams::kappa)
      .def_readwrite("coupled_sites", &ModelParams::coupled_sites);

  py::class_<LatticeSpec>(m, "LatticeSpec")
      .def(py::init([](int m_min, int m_max, int d) { return LatticeSpec{m_min, m_max, d}; }),
           "m_min"_a = -200, "m_max"_a = 200, "d"_a = 500)
      .def_readwrite("m_min", &LatticeSpec::m_min)
      .def_readwrite("m_max", &LatticeSpec::m_max)
      .def_readwrite("d", &LatticeSpec::d);

  py::class_<BoundaryDrive>(m, "BoundaryDrive")
      .def(py::init([](int site, double t0, double tau) { return BoundaryDrive{site, t0, tau}; }),
           "drive_site"_a = -200, "t0"_a = 25.0, "tau"_a = 5.0 * std::sqrt(2.0))
      .def_readwrite("drive_site", &BoundaryDrive::drive_site)
      .def_readwrite("t0", &BoundaryDrive::t0)
      .def_readwrite("tau", &BoundaryDrive::tau);

  py::class_<InitialWavepacket>(m, "InitialWavepacket")
      .def(py::init([](int m0, double delta_m, double k0) { return InitialWavepacket{m0, delta_m, k0}; }),
           "m0"_a = -250, "delta_m"_a = 10.0, "k0"_a = -0.5)
      .def_readwrite("m0", &InitialWavepacket::m0)
      .def_readwrite("delta_m", &InitialWavepacket::delta_m)
      .def_readwrite("k0", &InitialWavepacket::k0);

  py::class_<IntegratorConfig>(m, "IntegratorConfig")
      .def(py::init([](double dt, double t_end, int stride) { return IntegratorConfig{dt, t_end, stride}; }),
           "dt"_a = 0.005, "t_end"_a = 250.0, "snapshot_stride"_a = 20)
      .def_readwrite("dt", &IntegratorConfig::dt)
      .def_readwrite("t_end", &IntegratorConfig::t_end)
      .def_readwrite("snapshot_stride", &IntegratorConfig::snapshot_stride)
      .def("steps", &IntegratorConfig::steps);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("violations", &ValidationReport::violations)
      .def_readonly("warnings", &ValidationReport::warnings)
      .def("ok", &ValidationReport::ok);

  m.def("validate", &validate, "params"_a, "lattice"_a, "excitation"_a, "integrator"_a);
  m.def("gaussian_drive", py::overload_cast<double, const BoundaryDrive&>(&gaussian_drive), "t"_a, "drive"_a);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("backend", &Trajectory::backend)
      .def_property_readonly("sites", [](const Trajectory& t) { return py::make_tuple(t.sites.first, t.sites.last); })
      .def_property_readonly("times", [](const Trajectory& t) { return to_array(t.times); })
      .def_property_readonly("norms", [](const Trajectory& t) { return to_array(t.norms); })
      .def_property_readonly("atom_amplitudes", [](const Trajectory& t) { return to_array(t.atom_amplitudes); })
      .def_property_readonly("site_amplitudes",
                             [](const Trajectory& t) { return rows_to_array<Complex>(t.site_amplitudes, [](Complex c) { return c; }); })
      .def_property_readonly("site_probabilities",
                             [](const Trajectory& t) { return rows_to_array<double>(t.site_amplitudes, [](Complex c) { return std::norm(c); }); })
      .def_property_readonly("bloch_probabilities",
                             [](const Trajectory& t) { return rows_to_array<double>(t.bloch_amplitudes, [](Complex c) { return std::norm(c); }); })
      .def_readonly("injected_norm", &Trajectory::injected_norm)
      .def_readonly("d", &Trajectory::d)
      .def_readonly("notes", &Trajectory::notes)
      .def("__len__", &Trajectory::size)
      .def("window_probability", &Trajectory::window_probability, "snapshot"_a, "halfwidth"_a, "include_atom"_a = false)
      .def("centroid", &Trajectory::centroid, "snapshot"_a);

  py::enum_<KCoupling>(m, "KCoupling")
      .value("ModeSeparated", KCoupling::ModeSeparated)
      .value("Exact", KCoupling::Exact);
  py::enum_<SectorCoupling>(m, "SectorCoupling").value("On", SectorCoupling::On).value("Off", SectorCoupling::Off);
  py::enum_<Reconstruction>(m, "Reconstruction")
      .value("CoupledOnly", Reconstruction::CoupledOnly)
      .value("WithFreeComplement", Reconstruction::WithFreeComplement);

  m.def("run_real", &run_real, "params"_a, "lattice"_a, "excitation"_a, "integrator"_a,
        py::call_guard<py::gil_scoped_release>());
  m.def("run_kspace", &run_kspace, "params"_a, "lattice"_a, "excitation"_a, "integrator"_a,
        "coupling"_a = KCoupling::ModeSeparated, py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_reduced",
      [](const ModelParams& p, const LatticeSpec& l, const ExcitationSpec& e, const IntegratorConfig& i,
         SectorCoupling sc, Reconstruction rc) { return run_reduced(p, l, e, i, ReducedOptions{sc, rc}); },
      "params"_a, "lattice"_a, "excitation"_a, "integrator"_a, "sector_coupling"_a = SectorCoupling::On,
      "reconstruction"_a = Reconstruction::WithFreeComplement, py::call_guard<py::gil_scoped_release>());

  m.def("omega_k", &omega_k, "k"_a, "d"_a, "eta"_a = 1.0);
  m.def("group_velocity", &group_velocity, "k"_a, "d"_a, "eta"_a = 1.0);
  m.def("coupled_site_of", [](int k, int d) { return coupled_site(region_of(k, d)); }, "k"_a, "d"_a);
  m.def(
      "bloch_transform",
      [](const py::array_t<Complex, py::array::c_style | py::array::forcecast>& v, int d) {
        auto in = from_array(v);
        if (in.size() != static_cast<std::size_t>(2 * d)) throw DimensionError("expected 2d site amplitudes");
        std::vector<Complex> out(in.size());
        BlochTransform(d).forward(in, out);
        return to_array(out);
      },
      "v"_a, "d"_a);
  m.def(
      "inverse_bloch_transform",
      [](const py::array_t<Complex, py::array::c_style | py::array::forcecast>& c, int d) {
        auto in = from_array(c);
        if (in.size() != static_cast<std::size_t>(2 * d)) throw DimensionError("expected 2d Bloch amplitudes");
        std::vector<Complex> out(in.size());
        BlochTransform(d).inverse(in, out);
        return to_array(out);
      },
      "c"_a, "d"_a);

  py::class_<BoundState>(m, "BoundState")
      .def_readonly("d", &BoundState::d)
      .def_readonly("omega_mod", &BoundState::omega_mod)
      .def_readonly("x_s", &BoundState::x_s)
      .def_property_readonly("j_s_minus", [](const BoundState& b) { return to_array(b.j_s_minus); })
      .def_readonly("atom_weight", &BoundState::atom_weight)
      .def_readonly("photon_weight", &BoundState::photon_weight);

  py::class_<BoundStateScanRow>(m, "BoundStateScanRow")
      .def_readonly("omega_mod", &BoundStateScanRow::omega_mod)
      .def_readonly("atom_weight", &BoundStateScanRow::atom_weight)
      .def_readonly("photon_weight", &BoundStateScanRow::photon_weight)
      .def_readonly("localization_share", &BoundStateScanRow::localization_share)
      .def_readonly("error", &BoundStateScanRow::error);

  m.def("solve_bound_state", &solve_bound_state, "params"_a, "d"_a);
  m.def("verify_stationarity", &verify_stationarity, "bound_state"_a, "params"_a);
  m.def("localization_share", &localization_share, "bound_state"_a);
  m.def("atom_weight_scan", &atom_weight_scan, "params"_a, "d"_a, "omegas"_a);

  py::class_<LocalizationMetric>(m, "LocalizationMetric")
      .def_readonly("window_halfwidth", &LocalizationMetric::window_halfwidth)
      .def_readonly("threshold_fraction", &LocalizationMetric::threshold_fraction)
      .def_property_readonly("times", [](const LocalizationMetric& l) { return to_array(l.times); })
      .def_property_readonly("series", [](const LocalizationMetric& l) { return to_array(l.series); })
      .def_readonly("peak", &LocalizationMetric::peak)
      .def_readonly("peak_time", &LocalizationMetric::peak_time)
      .def_readonly("retention_time", &LocalizationMetric::retention_time);

  py::class_<DecayFit>(m, "DecayFit")
      .def_readonly("t_start", &DecayFit::t_start)
      .def_readonly("t_end", &DecayFit::t_end)
      .def_readonly("rate", &DecayFit::rate)
      .def_readonly("intercept", &DecayFit::intercept)
      .def_readonly("goodness", &DecayFit::goodness)
      .def_readonly("points", &DecayFit::points);

  py::class_<VelocityEstimate>(m, "VelocityEstimate")
      .def_readonly("velocity", &VelocityEstimate::velocity)
      .def_readonly("warning", &VelocityEstimate::warning);

  m.def("localization_fraction", &localization_fraction, "trajectory"_a, "window_halfwidth"_a = 10,
        "threshold_fraction"_a = 0.3, "include_atom"_a = false);
  m.def("decay_fit", py::overload_cast<const Trajectory&, double, double>(&decay_fit), "trajectory"_a,
        "t_start"_a, "t_end"_a);
  m.def(
      "decay_fit_series",
      [](const std::vector<double>& t, const std::vector<double>& y, double t0, double t1) {
        return decay_fit(t, y, t0, t1);
      },
      "times"_a, "values"_a, "t_start"_a, "t_end"_a);
  m.def("centroid_velocity", &centroid_velocity, "trajectory"_a, "t_start"_a, "t_end"_a);
  m.def(
      "detector_spectrum",
      [](const Trajectory& traj, int site, double t0, double t1) {
        auto spec = detector_spectrum(traj, site, t0, t1);
        std::vector<double> w, s;
        for (const auto& p : spec) {
          w.push_back(p.omega);
          s.push_back(p.density);
        }
        return py::make_tuple(to_array(w), to_array(s));
      },
      "trajectory"_a, "site"_a, "t_start"_a, "t_end"_a);

  m.def("preset_names", &preset_names);
  m.def(
      "run",
      [](const std::string& preset, const std::string& config_text, const std::filesystem::path& out,
         const std::map<std::string, std::string>& overrides) {
        std::optional<RunConfig> base;
        if (!preset.empty()) base = make_preset(preset);
        RunConfig cfg = config_text.empty() ? (base ? *base : RunConfig{}) : parse_config(config_text, "<config>", base);
        for (const auto& [k, v] : overrides) set_value(cfg, k, v);
        py::gil_scoped_release release;
        auto manifest = run(cfg, out);
        return manifest.to_json();
      },
      "preset"_a = "", "config"_a = "", "out"_a = std::filesystem::path("giantatom_out"),
      "overrides"_a = std::map<std::string, std::string>{},
      "Runs one configuration and returns the manifest as JSON text.");
}
