#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "slwave/app.hpp"
#include "slwave/calibration.hpp"
#include "slwave/config.hpp"
#include "slwave/constitutive.hpp"
#include "slwave/errors.hpp"
#include "slwave/integrator.hpp"
#include "slwave/postprocess.hpp"
#include "slwave/verification.hpp"

namespace py = pybind11;
using namespace slwave;

namespace {

py::dict run_config(const std::string& json, int samples) {
  const ScenarioConfig cfg = parse_config(json);
  SimulationSetup setup = to_setup(cfg);
  setup.output_interval = 0.0;
  const FeSpace space = build_space(setup.length, setup.n_cells, setup.degree_policy);
  SimulationResult r;
  {
    py::gil_scoped_release release;
    r = run_simulation(setup, space);
  }
  const Samples smp = sample_solution(space, r.final_state.sigma, r.final_state.sigma_dot,
                                      samples > 0 ? samples : cfg.output.samples);
  const SnapshotRecord rec = reconstruct(smp, cfg.material);
  py::dict out;
  out["t"] = r.final_state.t;
  out["x"] = rec.x;
  out["sigma"] = rec.sigma;
  out["sigma_dot"] = rec.sigma_dot;
  out["u"] = rec.u;
  out["v"] = rec.v;
  out["eps"] = rec.eps;
  out["c"] = rec.c;
  out["max_abs_gradient"] = max_abs_gradient(smp);
  out["report"] = r.report;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "C++ core of the strain-limiting stress wave solver";

  py::register_exception<HyperbolicityError>(m, "HyperbolicityError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NewtonDivergedError>(m, "NewtonDivergedError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<MaterialParams>(m, "MaterialParams")
      .def(py::init([](double rho, double b, double a, double reg_eta) {
             MaterialParams p{rho, b, a, reg_eta};
             p.validate();
             return p;
           }),
           py::arg("rho") = 1.0, py::arg("b") = 0.0, py::arg("a") = 1.5, py::arg("reg_eta") = 1e-8)
      .def_readwrite("rho", &MaterialParams::rho)
      .def_readwrite("b", &MaterialParams::b)
      .def_readwrite("a", &MaterialParams::a)
      .def_readwrite("reg_eta", &MaterialParams::reg_eta)
      .def("__repr__", [](const MaterialParams& p) {
        return "MaterialParams(rho=" + py::repr(py::float_(p.rho)).cast<std::string>() +
               ", b=" + py::repr(py::float_(p.b)).cast<std::string>() +
               ", a=" + py::repr(py::float_(p.a)).cast<std::string>() + ")";
      });

  m.def("strain", &strain, py::arg("sigma"), py::arg("params"));
  m.def("strain_derivative", &strain_derivative, py::arg("sigma"), py::arg("order"), py::arg("params"));
  m.def("wave_speed", &wave_speed, py::arg("sigma"), py::arg("params"));
  m.def("wave_speed_excess", &wave_speed_excess, py::arg("sigma"), py::arg("params"));
  m.def("mms_forcing", &mms_forcing, py::arg("x"), py::arg("t"), py::arg("params"));

  py::class_<RunReport>(m, "RunReport")
      .def_readonly("steps", &RunReport::steps)
      .def_readonly("max_newton_iterations", &RunReport::max_newton_iterations)
      .def_readonly("min_newton_iterations", &RunReport::min_newton_iterations)
      .def_readonly("total_newton_iterations", &RunReport::total_newton_iterations)
      .def_readonly("max_final_residual", &RunReport::max_final_residual)
      .def_readonly("max_wave_speed_excess", &RunReport::max_wave_speed_excess)
      .def_readonly("max_boundary_error", &RunReport::max_boundary_error)
      .def_readonly("wall_seconds", &RunReport::wall_seconds);

  m.def("default_config", [] { return config_to_json(ScenarioConfig{}); },
        "Default scenario as a JSON string.");
  m.def("simulate", &run_config, py::arg("config_json"), py::arg("samples") = 0,
        "Runs a scenario given as JSON; returns the final fields on a uniform sample grid.");
  m.def("simulate_to_directory",
        [](const std::string& json, const std::filesystem::path& dir) {
          const ScenarioConfig cfg = parse_config(json);
          py::gil_scoped_release release;
          return simulate_to_directory(cfg, dir).snapshots;
        },
        py::arg("config_json"), py::arg("out_dir"),
        "Writes snapshots and manifest.json; returns the snapshot paths.");

  py::class_<StudyConfig>(m, "StudyConfig")
      .def(py::init<>())
      .def_readwrite("alpha", &StudyConfig::alpha)
      .def_readwrite("t_final", &StudyConfig::t_final)
      .def_readwrite("spatial_dt", &StudyConfig::spatial_dt)
      .def_readwrite("temporal_cells", &StudyConfig::temporal_cells)
      .def_readwrite("jobs", &StudyConfig::jobs);

  py::class_<ConvergenceRow>(m, "ConvergenceRow")
      .def_readonly("resolution", &ConvergenceRow::resolution)
      .def_readonly("dofs", &ConvergenceRow::dofs)
      .def_readonly("l2_error", &ConvergenceRow::l2_error)
      .def_readonly("rate", &ConvergenceRow::rate)
      .def_readonly("max_newton_iterations", &ConvergenceRow::max_newton_iterations);

  m.def("convergence_study",
        [](const std::string& kind, const StudyConfig& cfg) {
          StudyKind k;
          if (kind == "spatial") k = StudyKind::spatial;
          else if (kind == "temporal") k = StudyKind::temporal;
          else throw py::value_error("kind must be 'spatial' or 'temporal'");
          py::gil_scoped_release release;
          return convergence_study(k, cfg).rows;
        },
        py::arg("kind"), py::arg("config") = StudyConfig{});

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("b", &FitResult::b)
      .def_readonly("a", &FitResult::a)
      .def_readonly("sse", &FitResult::sse)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("converged", &FitResult::converged);

  m.def("synthetic_dataset",
        [](double b, double a, double lo, double hi, int n, double noise, unsigned seed) {
          return synthetic_dataset(b, a, lo, hi, n, noise, seed).points;
        },
        py::arg("b"), py::arg("a"), py::arg("sigma_min"), py::arg("sigma_max"), py::arg("n"),
        py::arg("noise_rel") = 0.0, py::arg("seed") = 42u,
        "List of (stress, strain) pairs.");
  m.def("fit_material",
        [](const std::vector<std::pair<double, double>>& points, std::pair<double, double> init,
           int max_iters, double tol) {
          StressStrainDataset data{points, "python"};
          FitSettings s;
          s.max_iters = max_iters;
          s.tol = tol;
          return fit_material(data, init, s);
        },
        py::arg("points"), py::arg("init") = std::pair{1.0, 2.0}, py::arg("max_iters") = 200,
        py::arg("tol") = 1e-12);
  m.def("r_squared",
        [](double sse, const std::vector<std::pair<double, double>>& points) {
          return r_squared(sse, StressStrainDataset{points, "python"});
        },
        py::arg("sse"), py::arg("points"));
}
