#include "slwave/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include "json.hpp"
#include "slwave/errors.hpp"
#include "slwave/parallel.hpp"
#include "slwave/postprocess.hpp"
#include "slwave/verification.hpp"

namespace slwave {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

std::string run_label(double b, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "b%g_a%g", b, a);
  return buf;
}

void report_error(const char* kind, int code, const std::string& message) {
  const json report = {{"status", "error"}, {"kind", kind}, {"exit_code", code}, {"message", message}};
  std::cerr << report.dump() << '\n';
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    report_error("config", kConfigError, e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    report_error("config", kConfigError, e.what());
    return kConfigError;
  } catch (const IoError& e) {
    report_error("io", kIoError, e.what());
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    report_error("io", kIoError, e.what());
    return kIoError;
  } catch (const HyperbolicityError& e) {
    report_error("hyperbolicity", kSolverError, e.what());
    return kSolverError;
  } catch (const NewtonDivergedError& e) {
    report_error("newton", kSolverError, e.what());
    return kSolverError;
  } catch (const std::exception& e) {
    report_error("solver", kSolverError, e.what());
    return kSolverError;
  }
}

ScenarioConfig resolve_config(const CliOptions& opts) {
  ScenarioConfig cfg = opts.config ? load_config(*opts.config) : ScenarioConfig{};
  if (opts.snapshot_every) cfg.output.snapshot_interval = *opts.snapshot_every;
  if (opts.out) cfg.output.directory = opts.out->string();
  cfg.validate();
  return cfg;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

SimulateOutcome simulate_to_directory(const ScenarioConfig& config, const fs::path& dir) {
  ensure_directory(dir);
  const SimulationSetup setup = to_setup(config);
  const MaterialParams& mat = config.material;

  std::optional<SpaceTimeWriter> space_time;
  if (config.output.space_time) space_time.emplace(dir / "spacetime.csv");

  SimulateOutcome outcome;
  auto on_output = [&](const FeSpace& space, const SystemState& state) {
    const Samples samples =
        sample_solution(space, state.sigma, state.sigma_dot, config.output.samples);
    const SnapshotRecord record = reconstruct(samples, mat);
    outcome.snapshots.push_back(write_snapshot(record, state.t, dir));
    if (space_time) space_time->append(record, state.t);
    for (double s : samples.sigma)
      outcome.max_sample_c_excess =
          std::max(outcome.max_sample_c_excess, wave_speed_excess(s, mat));
    outcome.max_gradient_final = max_abs_gradient(samples);  // last call is t_final
  };

  const SimulationResult result = run_simulation(setup, on_output);
  outcome.report = result.report;

  const RunReport& r = result.report;
  json snapshots = json::array();
  for (const auto& p : outcome.snapshots) snapshots.push_back(p.filename().string());
  const json manifest = {
      {"command", "simulate"},
      {"config", json::parse(config_to_json(config))},
      {"run",
       {{"steps", r.steps},
        {"newton_iterations",
         {{"max", r.max_newton_iterations},
          {"min", r.min_newton_iterations},
          {"total", r.total_newton_iterations},
          {"mean", r.steps ? static_cast<double>(r.total_newton_iterations) / r.steps : 0.0}}},
        {"max_final_residual", r.max_final_residual},
        {"max_wave_speed_excess", r.max_wave_speed_excess},
        {"max_sample_wave_speed_excess", outcome.max_sample_c_excess},
        {"max_boundary_error", r.max_boundary_error},
        {"max_gradient_final", outcome.max_gradient_final},
        {"wall_seconds", r.wall_seconds}}},
      {"snapshots", snapshots}};
  auto out = open_output(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
  return outcome;
}

std::vector<std::pair<double, double>> sweep_preset(const std::string& name) {
  const std::vector<std::pair<double, double>> by_b{{0.0, 1.5}, {1.0, 1.5}, {5.0, 1.5}, {10.0, 1.5}};
  const std::vector<std::pair<double, double>> by_a{{1.0, 1.5}, {1.0, 3.0}, {1.0, 5.0}, {1.0, 10.0}};
  if (name == "b") return by_b;
  if (name == "a") return by_a;
  if (name == "all") {
    std::vector<std::pair<double, double>> all = by_b;
    for (const auto& pa : by_a)
      if (std::find(all.begin(), all.end(), pa) == all.end()) all.push_back(pa);
    return all;
  }
  throw ConfigError("unknown sweep preset '" + name + "' (expected b, a or all)");
}

std::vector<SweepRun> run_sweep(const ScenarioConfig& base,
                                const std::vector<std::pair<double, double>>& grid, int jobs,
                                const fs::path& dir) {
  std::vector<SweepRun> runs(grid.size());
  parallel_for(static_cast<int>(grid.size()), jobs, [&](int i) {
    ScenarioConfig cfg = base;
    cfg.material.b = grid[i].first;
    cfg.material.a = grid[i].second;
    cfg.validate();
    SweepRun& run = runs[i];
    run.label = run_label(cfg.material.b, cfg.material.a);
    run.material = cfg.material;
    cfg.output.directory = (dir / run.label).string();
    run.outcome = simulate_to_directory(cfg, dir / run.label);
  });
  return runs;
}

void write_sweep_summary(std::ostream& out, const std::vector<SweepRun>& runs) {
  const auto old = out.precision(17);
  out << "label,b,a,max_c_excess,max_newton_iterations,max_gradient_final,steps\n";
  for (const SweepRun& r : runs) {
    out << r.label << ',' << r.material.b << ',' << r.material.a << ','
        << r.outcome.report.max_wave_speed_excess << ','
        << r.outcome.report.max_newton_iterations << ',' << r.outcome.max_gradient_final << ','
        << r.outcome.report.steps << '\n';
  }
  out.precision(old);
}

int cmd_mms(StudyKind kind, const CliOptions& opts) {
  return guarded([&] {
    StudyConfig cfg = parse_study_config(opts.config ? read_text(*opts.config) : std::string{});
    cfg.jobs = opts.jobs;
    const fs::path dir = opts.out.value_or("out");
    ensure_directory(dir);
    const ConvergenceTable table = convergence_study(kind, cfg);
    const fs::path path = dir / ("mms_" + to_string(kind) + ".csv");
    auto out = open_output(path);
    table.write_csv(out);
    if (!opts.quiet) {
      table.write_csv(std::cout);
      std::cout << "wrote " << path.string() << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int cmd_simulate(const CliOptions& opts) {
  return guarded([&] {
    const ScenarioConfig cfg = resolve_config(opts);
    const SimulateOutcome outcome = simulate_to_directory(cfg, cfg.output.directory);
    if (!opts.quiet) {
      std::cout << "steps " << outcome.report.steps << ", newton iterations max "
                << outcome.report.max_newton_iterations << ", max c excess "
                << outcome.report.max_wave_speed_excess << ", snapshots "
                << outcome.snapshots.size() << " in " << cfg.output.directory << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int cmd_sweep(const std::string& preset, const CliOptions& opts) {
  return guarded([&] {
    const ScenarioConfig cfg = resolve_config(opts);
    const fs::path dir = cfg.output.directory;
    ensure_directory(dir);
    const std::vector<SweepRun> runs = run_sweep(cfg, sweep_preset(preset), opts.jobs, dir);
    auto out = open_output(dir / "sweep_summary.csv");
    write_sweep_summary(out, runs);
    if (!opts.quiet) write_sweep_summary(std::cout, runs);
    return static_cast<int>(kOk);
  });
}

int cmd_fit(const fs::path& data_path, std::pair<double, double> init, const FitSettings& settings,
            const CliOptions& opts) {
  return guarded([&] {
    const StressStrainDataset data = read_dataset(data_path);
    const FitResult fit = fit_material(data, init, settings);
    const fs::path dir = opts.out.value_or("out");
    ensure_directory(dir);
    auto out = open_output(dir / "fit.csv");
    write_fit_header(out);
    write_fit_row(out, data.label, fit);
    if (!fit.converged)
      std::cerr << "warning: fit did not converge in " << settings.max_iters
                << " iterations; best iterate reported\n";
    if (!opts.quiet) {
      write_fit_header(std::cout);
      write_fit_row(std::cout, data.label, fit);
    }
    return static_cast<int>(kOk);
  });
}

int cmd_gen_data(double b, double a, double sigma_min, double sigma_max, int n, double noise,
                 unsigned seed, const fs::path& path) {
  return guarded([&] {
    MaterialParams{1.0, b, a, 0.0}.validate();
    const StressStrainDataset data = synthetic_dataset(b, a, sigma_min, sigma_max, n, noise, seed);
    if (path.has_parent_path()) ensure_directory(path.parent_path());
    auto out = open_output(path);
    out.precision(17);
    out << "stress,strain\n";
    for (auto [s, e] : data.points) out << s << ',' << e << '\n';
    return static_cast<int>(kOk);
  });
}

}  // namespace slwave
