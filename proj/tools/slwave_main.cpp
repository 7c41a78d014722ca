// Command-line driver: mms-spatial, mms-temporal, simulate, sweep, fit, gen-data.

#include <iostream>

#include "CLI11.hpp"
#include "slwave/app.hpp"

int main(int argc, char** argv) {
  using namespace slwave;

  CLI::App app{"Stress-based nonlinear wave solver for strain-limiting materials"};
  app.require_subcommand(1);

  CliOptions opts;
  std::string config, out;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON config file (or a run manifest)");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--jobs", opts.jobs, "concurrent runs")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", opts.quiet, "suppress stdout summaries");
  };

  auto* mms_spatial = app.add_subcommand("mms-spatial", "spatial MMS convergence table (Q1)");
  auto* mms_temporal = app.add_subcommand("mms-temporal", "temporal MMS convergence table (Q3)");
  auto* simulate = app.add_subcommand("simulate", "single boundary-driven run with snapshots");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep over b or a");
  auto* fit = app.add_subcommand("fit", "calibrate (b, a) against a stress-strain dataset");
  auto* gen = app.add_subcommand("gen-data", "write a synthetic stress-strain dataset");

  double snapshot_every = -1.0;
  for (auto* sub : {mms_spatial, mms_temporal, simulate, sweep, fit}) add_common(sub);
  for (auto* sub : {simulate, sweep})
    sub->add_option("--snapshot-every", snapshot_every, "snapshot interval in time units");

  std::string preset = "all";
  sweep->add_option("--preset", preset, "b, a or all")->check(CLI::IsMember({"b", "a", "all"}));

  std::string data;
  double init_b = 1.0, init_a = 1.0;
  FitSettings fit_settings;
  fit->add_option("--data", data, "two-column stress,strain file")->required();
  fit->add_option("--init-b", init_b, "initial b");
  fit->add_option("--init-a", init_a, "initial a");
  fit->add_option("--max-iters", fit_settings.max_iters, "iteration limit");
  fit->add_option("--tol", fit_settings.tol, "stopping tolerance");

  double gen_b = 1.0, gen_a = 2.0, smin = 0.0, smax = 5.0, noise = 0.0;
  int gen_n = 50;
  unsigned seed = 42;
  std::string gen_out = "dataset.csv";
  gen->add_option("--b", gen_b, "magnitude b");
  gen->add_option("--a", gen_a, "exponent a");
  gen->add_option("--sigma-min", smin);
  gen->add_option("--sigma-max", smax);
  gen->add_option("--n", gen_n, "number of points");
  gen->add_option("--noise", noise, "strain noise std relative to max |strain|");
  gen->add_option("--seed", seed);
  gen->add_option("--out", gen_out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (!config.empty()) opts.config = config;
  if (!out.empty()) opts.out = out;
  if (snapshot_every >= 0.0) opts.snapshot_every = snapshot_every;

  if (*mms_spatial) return cmd_mms(StudyKind::spatial, opts);
  if (*mms_temporal) return cmd_mms(StudyKind::temporal, opts);
  if (*simulate) return cmd_simulate(opts);
  if (*sweep) return cmd_sweep(preset, opts);
  if (*fit) return cmd_fit(data, {init_b, init_a}, fit_settings, opts);
  return cmd_gen_data(gen_b, gen_a, smin, smax, gen_n, noise, seed, gen_out);
}
