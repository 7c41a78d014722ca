// Acceptance checks. Each criterion prints one PASS/FAIL line with its measured
// numbers; pass criterion numbers as arguments to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "slwave/calibration.hpp"
#include "slwave/config.hpp"
#include "slwave/constitutive.hpp"
#include "slwave/integrator.hpp"
#include "slwave/parallel.hpp"
#include "slwave/postprocess.hpp"
#include "slwave/verification.hpp"

using namespace slwave;

namespace {

const double kPi = std::acos(-1.0);

struct Outcome {
  bool pass;
  std::string detail;
};

int jobs() { return std::max(1u, std::min(4u, std::thread::hardware_concurrency())); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string join_rates(const ConvergenceTable& t) {
  std::string s;
  for (std::size_t i = 1; i < t.rows.size(); ++i) s += (i > 1 ? "/" : "") + fmt("%.4f", t.rows[i].rate);
  return s;
}

// 1 --------------------------------------------------------------------------
Outcome spatial_mms() {
  StudyConfig cfg;
  cfg.jobs = jobs();
  const ConvergenceTable t = convergence_study(StudyKind::spatial, cfg);
  const int dofs[] = {17, 33, 65, 129};
  const double table[] = {1.246e-4, 3.117e-5, 7.793e-6, 1.948e-6};
  bool rates = true, counts = true, magnitude = true;
  std::string ratios;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i > 0) rates = rates && std::abs(t.rows[i].rate - 2.0) <= 0.05;
    counts = counts && t.rows[i].dofs == dofs[i];
    const double r = t.rows[i].l2_error / table[i];
    magnitude = magnitude && r >= 0.1 && r <= 10.0;
    ratios += (i ? "/" : "") + fmt("%.1f", r);
  }
  return {rates && counts && magnitude,
          "rates " + join_rates(t) + (rates ? " ok" : " BAD") + ", dofs" + (counts ? " ok" : " BAD") +
              ", error/table " + ratios + (magnitude ? " ok" : " BAD (outside 10x)")};
}

// 2 --------------------------------------------------------------------------
Outcome temporal_mms() {
  StudyConfig cfg;
  cfg.jobs = jobs();
  const ConvergenceTable t = convergence_study(StudyKind::temporal, cfg);
  bool increasing = true;
  for (std::size_t i = 2; i < t.rows.size(); ++i) increasing = increasing && t.rows[i].rate > t.rows[i - 1].rate;
  const double finest = t.rows.back().rate;
  return {increasing && finest >= 1.85,
          "rates " + join_rates(t) + ", finest " + fmt("%.4f", finest) + (finest >= 1.85 ? " ok" : " BAD") +
              ", monotone increase " + (increasing ? "ok" : "BAD")};
}

// 3 --------------------------------------------------------------------------
Outcome linear_baseline() {
  const MaterialParams p{1.0, 0.0, 1.5, 1e-8};
  const double A = 0.02, dt = 5e-4, t_final = 1.1;
  const BoundaryDrive drive{A, 2.0 * kPi};
  const FeSpace space = build_space(1.0, 400, DegreePolicy::uniform(1));
  const StepSolver solver(space, p, HhtParams(-0.05, dt), {}, drive);

  const std::vector<double> probes{0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2};
  std::vector<double> crossing(probes.size(), -1.0), peak(probes.size(), 0.0), last(probes.size(), 0.0);
  const double threshold = 0.5 * A;

  SystemState s = SystemState::zeros(space.n_dofs());
  s.sigma_ddot = solver.initial_acceleration(s);
  double c_dev = 0.0;
  const long steps = std::lround(t_final / dt);
  for (long k = 1; k <= steps; ++k) {
    s = solver.advance(s).first;
    for (double v : s.sigma) c_dev = std::max(c_dev, std::abs(wave_speed(v, p) - 1.0));
    for (std::size_t j = 0; j < probes.size(); ++j) {
      const double v = space.evaluate(s.sigma, probes[j]);
      // the wave reflected at x = 0 reaches probe x at t = 1 + x
      if (s.t < 1.0 + probes[j]) peak[j] = std::max(peak[j], v);
      if (crossing[j] < 0.0 && v >= threshold)
        crossing[j] = s.t - dt * (v - threshold) / (v - last[j]);
      last[j] = v;
    }
  }
  // least-squares slope of arrival time against travelled distance
  double sd = 0, st = 0, sdd = 0, sdt = 0;
  const double n = static_cast<double>(probes.size());
  for (std::size_t j = 0; j < probes.size(); ++j) {
    const double d = 1.0 - probes[j];
    sd += d;
    st += crossing[j];
    sdd += d * d;
    sdt += d * crossing[j];
  }
  const double slope = (n * sdt - sd * st) / (n * sdd - sd * sd);
  const double speed = 1.0 / slope;
  double peak_dev = 0.0;
  for (double pk : peak) peak_dev = std::max(peak_dev, std::abs(pk / A - 1.0));
  const bool pass = c_dev <= 1e-12 && std::abs(speed - 1.0) <= 0.02 && peak_dev <= 0.02 &&
                    *std::min_element(crossing.begin(), crossing.end()) > 0.0;
  return {pass, "max|c-1| " + fmt("%.1e", c_dev) + ", front speed " + fmt("%.5f", speed) +
                    ", max peak deviation " + fmt("%.3f%%", 100.0 * peak_dev)};
}

// 4, 5 -----------------------------------------------------------------------
struct ParamRun {
  double c_excess;
  double gradient;
};

std::vector<ParamRun> parametric(const std::vector<std::pair<double, double>>& grid) {
  std::vector<ParamRun> out(grid.size());
  parallel_for(static_cast<int>(grid.size()), jobs(), [&](int i) {
    ScenarioConfig cfg;
    cfg.material.b = grid[i].first;
    cfg.material.a = grid[i].second;
    SimulationSetup setup = to_setup(cfg);
    setup.output_interval = 0.0;
    const FeSpace space = build_space(setup.length, setup.n_cells, setup.degree_policy);
    const SimulationResult r = run_simulation(setup, space);
    const Samples smp = sample_solution(space, r.final_state.sigma, r.final_state.sigma_dot,
                                        cfg.output.samples);
    out[i] = {r.report.max_wave_speed_excess, max_abs_gradient(smp)};
  });
  return out;
}

Outcome b_ordering() {
  const auto runs = parametric({{1.0, 1.5}, {5.0, 1.5}, {10.0, 1.5}});
  const bool order = runs[0].c_excess < runs[1].c_excess && runs[1].c_excess < runs[2].c_excess;
  const bool steeper = runs[2].gradient > runs[0].gradient;
  return {order && steeper, "max|c-1| b=1/5/10: " + fmt("%.3e", runs[0].c_excess) + " / " +
                                fmt("%.3e", runs[1].c_excess) + " / " + fmt("%.3e", runs[2].c_excess) +
                                ", final max|dsigma/dx| b=1 " + fmt("%.4f", runs[0].gradient) +
                                " vs b=10 " + fmt("%.4f", runs[2].gradient)};
}

Outcome a_ordering() {
  const auto runs = parametric({{1.0, 1.5}, {1.0, 3.0}, {1.0, 5.0}, {1.0, 10.0}});
  bool order = true;
  for (std::size_t i = 1; i < runs.size(); ++i) order = order && runs[i].c_excess < runs[i - 1].c_excess;
  const double ratio = runs[3].c_excess / runs[0].c_excess;
  return {order && ratio <= 1e-4,
          "max|c-1| a=1.5/3/5/10: " + fmt("%.3e", runs[0].c_excess) + " / " + fmt("%.3e", runs[1].c_excess) +
              " / " + fmt("%.3e", runs[2].c_excess) + " / " + fmt("%.3e", runs[3].c_excess) +
              ", a=10 over a=1.5 " + fmt("%.1e", ratio)};
}

// 6 --------------------------------------------------------------------------
double derivative_of(int order, double sigma, const MaterialParams& p) {
  return order == 0 ? strain(sigma, p) : strain_derivative(sigma, order, p);
}

Outcome derivative_grid() {
  double worst = 0.0;
  std::string where;
  int checked = 0, near_root = 0;
  for (double b : {0.5, 1.0, 5.0}) {
    for (double a : {1.2, 1.5, 2.0, 3.0}) {
      const MaterialParams p{1.0, b, a, 1e-8};
      for (int i = 0; i <= 40; ++i) {
        const double mag = 0.1 * std::pow(100.0, i / 40.0);
        for (double sigma : {mag, -mag}) {
          const double h = 1e-3 * mag;
          for (int k = 1; k <= 3; ++k) {
            auto g = [&](double s) { return derivative_of(k - 1, s, p); };
            const double fd =
                (g(sigma - 2 * h) - 8 * g(sigma - h) + 8 * g(sigma + h) - g(sigma + 2 * h)) / (12 * h);
            const double exact = strain_derivative(sigma, k, p);
            // at a root of the k-th derivative the error is measured against the
            // natural scale |f^(k-1)| / |sigma| instead of |f^(k)|
            const double scale = std::max(std::abs(exact), std::abs(g(sigma)) / mag);
            if (std::abs(exact) < scale) ++near_root;
            const double rel = std::abs(fd - exact) / scale;
            ++checked;
            if (rel > worst) {
              worst = rel;
              where = "k=" + std::to_string(k) + " b=" + fmt("%g", b) + " a=" + fmt("%g", a) +
                      " sigma=" + fmt("%g", sigma);
            }
          }
        }
      }
    }
  }
  return {worst <= 1e-6, std::to_string(checked) + " checks, worst relative error " + fmt("%.2e", worst) +
                             " at " + where + ", " + std::to_string(near_root) + " near roots"};
}

// 7 --------------------------------------------------------------------------
double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Outcome tangent_and_newton() {
  const MaterialParams p{1.0, 1.0, 2.0, 1e-8};
  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.2, 2.0);
  const DegreePolicy policies[] = {DegreePolicy::uniform(1), DegreePolicy::uniform(2),
                                   DegreePolicy::uniform(3), DegreePolicy::center_graded()};
  double worst_fd = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const FeSpace space = build_space(1.0, 10 + trial, policies[trial % 4]);
    const int n = space.n_dofs();
    const Assembler A(space, p);
    const HhtParams hht(-std::abs(u(rng)) / 3.0, 1e-3 * (1.0 + 20.0 * std::abs(u(rng))));
    SystemState prev = SystemState::zeros(n);
    std::vector<double> acc(n), d(n);
    for (int i = 0; i < n; ++i) {
      // stresses stay away from zero so the regularization is inactive
      prev.sigma[i] = (trial % 2 ? -1.0 : 1.0) * pos(rng);
      prev.sigma_dot[i] = u(rng);
      prev.sigma_ddot[i] = u(rng);
      acc[i] = u(rng);
      d[i] = u(rng);
    }
    auto state_at = [&](double eps) {
      SystemState next;
      next.sigma_ddot = acc;
      for (int i = 0; i < n; ++i) next.sigma_ddot[i] += eps * d[i];
      std::tie(next.sigma, next.sigma_dot) = newmark_update(prev, next.sigma_ddot, hht);
      return next;
    };
    const double eps = 1e-6;
    const std::vector<double> rp = A.residual(state_at(eps), prev, hht);
    const std::vector<double> rm = A.residual(state_at(-eps), prev, hht);
    const std::vector<double> Sd = A.tangent(state_at(0.0), prev, hht).multiply(d);
    std::vector<double> diff(n);
    for (int i = 0; i < n; ++i) diff[i] = (rp[i] - rm[i]) / (2 * eps) - Sd[i];
    worst_fd = std::max(worst_fd, norm(diff) / norm(Sd));
  }

  // Newton on the manufactured problem with the production settings
  const double dt = 1e-3;
  const SimulationSetup setup = mms_setup(p, -0.05, dt, 1.0, 64, DegreePolicy::uniform(1));
  const FeSpace space = build_space(1.0, 64, DegreePolicy::uniform(1));
  const HhtParams hht(-0.05, dt);
  const StepSolver solver(space, p, hht, setup.newton, setup.drive, setup.forcing);
  SystemState s = SystemState::zeros(space.n_dofs());
  s.sigma_dot = space.interpolate(setup.initial_rate);
  s.sigma_dot.front() = s.sigma_dot.back() = 0.0;
  s.sigma_ddot = solver.initial_acceleration(s);
  int max_iters = 0;
  SystemState mid;
  for (int k = 0; k < 1000; ++k) {
    auto [next, rep] = solver.advance(s);
    max_iters = std::max(max_iters, rep.iterations);
    s = std::move(next);
    if (k == 499) mid = s;
  }

  // Tail order: one Newton update from the converged step solution displaced by
  // delta * d, for decreasing delta; slope of log r1 against log r0.
  const int n = space.n_dofs();
  const SystemState converged = solver.advance(mid).first;
  const Assembler& A = solver.assembler();
  const auto [load_next, load_prev] = assemble_load(space, setup.forcing, converged.t, mid.t);
  const std::vector<DirichletConstraint> cons{{0, converged.sigma_ddot.front()},
                                              {n - 1, converged.sigma_ddot.back()}};
  std::vector<double> d(n, 0.0);
  for (int i = 1; i < n - 1; ++i) d[i] = std::sin(3.0 * i) + 0.5;
  auto residual_norm = [&](const std::vector<double>& acc, BandedMatrix* tangent) {
    SystemState it;
    it.sigma_ddot = acc;
    std::tie(it.sigma, it.sigma_dot) = newmark_update(mid, acc, hht);
    auto [r, S] = A.linearize(it, mid, hht, load_next, load_prev);
    if (tangent) *tangent = S;
    return std::pair{free_norm(r, cons), r};
  };
  std::vector<double> lr0, lr1;
  for (double delta : {1e1, 3e0, 1e0, 3e-1, 1e-1}) {
    std::vector<double> acc = converged.sigma_ddot;
    for (int i = 0; i < n; ++i) acc[i] += delta * d[i];
    BandedMatrix S;
    const auto [r0, r] = residual_norm(acc, &S);
    const ConstrainedSystem sys = apply_dirichlet(S, r, cons, acc);
    const std::vector<double> step = sys.matrix.solve(sys.rhs);
    for (int i = 0; i < n; ++i) acc[i] += step[i];
    const double r1 = residual_norm(acc, nullptr).first;
    if (r1 > 1e-13) {
      lr0.push_back(std::log(r0));
      lr1.push_back(std::log(r1));
    }
  }
  double order = 0.0;
  if (lr0.size() >= 3) {
    const double m = static_cast<double>(lr0.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lr0.size(); ++i) {
      sx += lr0[i];
      sy += lr1[i];
      sxx += lr0[i] * lr0[i];
      sxy += lr0[i] * lr1[i];
    }
    order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  const bool pass = worst_fd <= 1e-5 && max_iters <= 5 && order >= 1.5;
  return {pass, "tangent FD worst relative error " + fmt("%.2e", worst_fd) + " over 20 states, Newton max " +
                    std::to_string(max_iters) + " iterations/step over 1000 steps, tail order " +
                    fmt("%.2f", order) + " from " + std::to_string(lr0.size()) + " displacements"};
}

// 8 --------------------------------------------------------------------------
Outcome linear_newton() {
  ScenarioConfig cfg;
  cfg.material.b = 0.0;
  SimulationSetup setup = to_setup(cfg);
  setup.output_interval = 0.0;
  const SimulationResult r = run_simulation(setup);
  const bool pass = r.report.steps == 1000 && r.report.min_newton_iterations == 1 &&
                    r.report.max_newton_iterations == 1;
  return {pass, std::to_string(r.report.steps) + " steps, iterations min " +
                    std::to_string(r.report.min_newton_iterations) + " max " +
                    std::to_string(r.report.max_newton_iterations)};
}

// 9 --------------------------------------------------------------------------
Outcome calibration() {
  double worst_clean = 0.0, worst_noisy = 0.0, worst_r2 = 1.0;
  for (double b : {0.5, 1.0, 2.0, 5.0}) {
    for (double a : {1.0, 1.5, 2.0, 3.0}) {
      const StressStrainDataset clean = synthetic_dataset(b, a, 0.0, 5.0, 50);
      const FitResult f = fit_material(clean, {1.0, 1.0});
      worst_clean = std::max({worst_clean, std::abs(f.b / b - 1.0), std::abs(f.a / a - 1.0)});
      worst_r2 = std::min(worst_r2, f.r2);
      const StressStrainDataset noisy = synthetic_dataset(b, a, 0.0, 5.0, 50, 0.01, 17);
      const FitResult g = fit_material(noisy, {1.0, 1.0});
      worst_noisy = std::max({worst_noisy, std::abs(g.b / b - 1.0), std::abs(g.a / a - 1.0)});
    }
  }
  const bool pass = worst_clean <= 0.01 && worst_noisy <= 0.10 && worst_r2 >= 0.999;
  return {pass, "16 parameter pairs, worst relative error noiseless " + fmt("%.1e", worst_clean) +
                    ", 1% noise " + fmt("%.2e", worst_noisy) + ", min R2 " + fmt("%.6f", worst_r2)};
}

// 10 -------------------------------------------------------------------------
Outcome trapezoid_order() {
  const MaterialParams p{1.0, 1.0, 2.0, 1e-8};
  // int_0^1 sin(pi x) / sqrt(1 + sin^2(pi x)) dx = 1/2
  const double exact = 0.5;
  std::vector<double> err;
  std::string rates;
  bool pass = true;
  for (int M = 16; M <= 512; M *= 2) {
    Samples s;
    for (int i = 0; i <= M; ++i) {
      const double x = static_cast<double>(i) / M;
      s.x.push_back(x);
      s.sigma.push_back(std::sin(kPi * x));
      s.sigma_dot.push_back(0.0);
    }
    err.push_back(std::abs(reconstruct(s, p).u.back() - exact));
    if (err.size() > 1) {
      const double r = std::log2(err[err.size() - 2] / err.back());
      pass = pass && std::abs(r - 2.0) <= 0.1;
      rates += (err.size() > 2 ? "/" : "") + fmt("%.3f", r);
    }
  }
  return {pass, "u(1) rates " + rates};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"spatial MMS convergence", spatial_mms},
      {"temporal MMS convergence", temporal_mms},
      {"linear baseline", linear_baseline},
      {"nonlinearity ordering in b", b_ordering},
      {"nonlinearity suppression in a", a_ordering},
      {"derivative oracle grid", derivative_grid},
      {"tangent consistency and Newton", tangent_and_newton},
      {"linear-law single Newton iteration", linear_newton},
      {"calibration roundtrip", calibration},
      {"post-processing order", trapezoid_order},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
