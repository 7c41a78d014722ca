#include "slwave/integrator.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <limits>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "slwave/errors.hpp"

namespace slwave {

void NewtonSettings::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("newton.tol must be > 0");
  if (!(abs_floor >= 0.0)) throw std::invalid_argument("newton.abs_floor must be >= 0");
  if (!(roundoff_factor >= 0.0)) throw std::invalid_argument("newton.roundoff_factor must be >= 0");
  if (k_max < 1) throw std::invalid_argument("newton.k_max must be >= 1");
}

double BoundaryDrive::right_value(double t) const { return amplitude * std::sin(omega * t); }

double BoundaryDrive::right_acceleration(double t) const {
  return -amplitude * omega * omega * std::sin(omega * t);
}

std::pair<std::vector<double>, std::vector<double>> newmark_update(
    const SystemState& state_n, std::span<const double> sigma_ddot_next, const HhtParams& hht) {
  const int n = state_n.size();
  if (static_cast<int>(sigma_ddot_next.size()) != n)
    throw std::invalid_argument("newmark_update: size mismatch");
  const double dt = hht.dt();
  const double beta = hht.beta();
  const double gamma = hht.gamma();

  std::vector<double> sigma(n), rate(n);
  for (int i = 0; i < n; ++i) {
    const double acc_n = state_n.sigma_ddot[i];
    sigma[i] = state_n.sigma[i] + dt * state_n.sigma_dot[i] +
               dt * dt * (0.5 * (1.0 - 2.0 * beta) * acc_n + beta * sigma_ddot_next[i]);
    rate[i] = state_n.sigma_dot[i] + dt * ((1.0 - gamma) * acc_n + gamma * sigma_ddot_next[i]);
  }
  return {std::move(sigma), std::move(rate)};
}

double boundary_acceleration(double bc_value_next, int node, const SystemState& state_n,
                             const HhtParams& hht) {
  const double dt = hht.dt();
  const double beta = hht.beta();
  const double predicted = state_n.sigma[node] + dt * state_n.sigma_dot[node] +
                           dt * dt * 0.5 * (1.0 - 2.0 * beta) * state_n.sigma_ddot[node];
  return (bc_value_next - predicted) / (beta * dt * dt);
}

double free_norm(std::span<const double> r, std::span<const DirichletConstraint> constrained) {
  double sum = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const bool fixed = std::any_of(constrained.begin(), constrained.end(),
                                   [i](const DirichletConstraint& c) { return c.dof == static_cast<int>(i); });
    if (!fixed) sum += r[i] * r[i];
  }
  return std::sqrt(sum);
}

StepSolver::StepSolver(const FeSpace& space, const MaterialParams& material, const HhtParams& hht,
                       const NewtonSettings& newton, const BoundaryDrive& drive, Forcing forcing)
    : assembler_(space, material),
      hht_(hht),
      newton_(newton),
      drive_(drive),
      forcing_(std::move(forcing)) {
  newton_.validate();
}

double StepSolver::roundoff_floor(const SystemState& next, const BandedMatrix& tangent,
                                  std::span<const double> load,
                                  std::span<const DirichletConstraint> constraints) const {
  if (newton_.roundoff_factor == 0.0) return 0.0;
  const int n = static_cast<int>(next.sigma.size());
  std::vector<double> abs_s(n), abs_a(n);
  for (int i = 0; i < n; ++i) {
    abs_s[i] = std::abs(next.sigma[i]);
    abs_a[i] = std::abs(next.sigma_ddot[i]);
  }
  std::vector<double> scale = assembler_.stiffness().abs_multiply(abs_s);
  const std::vector<double> inertia = tangent.abs_multiply(abs_a);
  for (int i = 0; i < n; ++i) {
    scale[i] += inertia[i];
    if (!load.empty()) scale[i] += std::abs(load[i]);
  }
  return newton_.roundoff_factor * std::numeric_limits<double>::epsilon() *
         free_norm(scale, constraints);
}

std::pair<SystemState, NewtonReport> StepSolver::advance(const SystemState& state_n) const {
  const FeSpace& space = assembler_.space();
  const int n = space.n_dofs();
  if (state_n.size() != n) throw std::invalid_argument("advance_step: state does not match space");

  SystemState next;
  next.t = state_n.t + hht_.dt();
  next.sigma_ddot = state_n.sigma_ddot;  // predictor

  const std::array<DirichletConstraint, 2> constraints{{
      {0, boundary_acceleration(0.0, 0, state_n, hht_)},
      {n - 1, boundary_acceleration(drive_.right_value(next.t), n - 1, state_n, hht_)},
  }};

  std::vector<double> load_next, load_prev;
  if (forcing_) std::tie(load_next, load_prev) = assemble_load(space, forcing_, next.t, state_n.t);

  auto update_kinematics = [&] {
    std::tie(next.sigma, next.sigma_dot) = newmark_update(state_n, next.sigma_ddot, hht_);
  };

  update_kinematics();
  auto [residual, tangent] = assembler_.linearize(next, state_n, hht_, load_next, load_prev);

  NewtonReport report;
  report.initial_residual = free_norm(residual, constraints);
  report.history.push_back(report.initial_residual);
  const double target = std::max({newton_.tol * report.initial_residual, newton_.abs_floor,
                                  roundoff_floor(next, tangent, load_next, constraints)});

  for (int k = 1; k <= newton_.k_max; ++k) {
    const ConstrainedSystem sys = apply_dirichlet(tangent, residual, constraints, next.sigma_ddot);
    const std::vector<double> delta = sys.matrix.solve(sys.rhs);
    for (int i = 0; i < n; ++i) next.sigma_ddot[i] += delta[i];
    // Land exactly on the prescribed values.
    for (const auto& c : constraints) next.sigma_ddot[c.dof] = c.value;
    update_kinematics();

    std::tie(residual, tangent) = assembler_.linearize(next, state_n, hht_, load_next, load_prev);
    const double norm = free_norm(residual, constraints);
    report.history.push_back(norm);
    if (norm <= target) {
      report.iterations = k;
      report.final_residual = norm;
      return {std::move(next), std::move(report)};
    }
  }

  std::ostringstream msg;
  msg << "Newton did not converge at t = " << next.t << " after " << newton_.k_max
      << " iterations (residual " << report.history.back() << ", target " << target << ")";
  throw NewtonDivergedError(msg.str(), next.t, report.history);
}

std::vector<double> StepSolver::initial_acceleration(const SystemState& state0) const {
  const FeSpace& space = assembler_.space();
  const int n = space.n_dofs();
  const std::vector<double> zeros(n, 0.0);

  // M(S0) a0 = -(F_vel(S0, S_dot0) + K S0 - L(0))
  std::vector<double> rhs = assembler_.inertial(state0.sigma, state0.sigma_dot, zeros);
  const std::vector<double> ks = assembler_.stiffness().multiply(state0.sigma);
  const std::vector<double> load = assemble_load(space, forcing_, state0.t);
  for (int i = 0; i < n; ++i) rhs[i] += ks[i] - load[i];

  const std::array<DirichletConstraint, 2> constraints{{
      {0, 0.0},
      {n - 1, drive_.right_acceleration(state0.t)},
  }};
  const ConstrainedSystem sys =
      apply_dirichlet(assembler_.mass(state0.sigma), rhs, constraints, zeros);
  return sys.matrix.solve(sys.rhs);
}

std::pair<SystemState, NewtonReport> advance_step(const SystemState& state_n, const FeSpace& space,
                                                  const HhtParams& hht, const MaterialParams& p,
                                                  const NewtonSettings& newton,
                                                  const BoundaryDrive& drive,
                                                  const Forcing& forcing) {
  return StepSolver(space, p, hht, newton, drive, forcing).advance(state_n);
}

SimulationResult run_simulation(const SimulationSetup& setup, const SnapshotCallback& on_output) {
  const FeSpace space = build_space(setup.length, setup.n_cells, setup.degree_policy);
  return run_simulation(setup, space, on_output);
}

SimulationResult run_simulation(const SimulationSetup& setup, const FeSpace& space,
                                const SnapshotCallback& on_output) {
  if (!(setup.t_final > 0.0)) throw std::invalid_argument("time.t_final must be > 0");
  const auto wall_start = std::chrono::steady_clock::now();

  const HhtParams hht(setup.alpha, setup.dt);
  const StepSolver solver(space, setup.material, hht, setup.newton, setup.drive, setup.forcing);
  const int n = space.n_dofs();

  SystemState state = SystemState::zeros(n, 0.0);
  if (setup.initial_stress) state.sigma = space.interpolate(setup.initial_stress);
  if (setup.initial_rate) state.sigma_dot = space.interpolate(setup.initial_rate);
  state.sigma.front() = 0.0;
  state.sigma.back() = setup.drive.right_value(0.0);
  if (setup.initial_acceleration == InitialAcceleration::solve)
    state.sigma_ddot = solver.initial_acceleration(state);

  RunReport report;
  report.min_newton_iterations = setup.newton.k_max + 1;
  auto track = [&](const SystemState& s) {
    for (double v : s.sigma)
      report.max_wave_speed_excess =
          std::max(report.max_wave_speed_excess, std::abs(wave_speed_excess(v, setup.material)));
    report.max_boundary_error = std::max(
        {report.max_boundary_error, std::abs(s.sigma.front()),
         std::abs(s.sigma.back() - setup.drive.right_value(s.t))});
  };
  track(state);
  if (on_output) on_output(space, state);

  const long n_steps = static_cast<long>(std::ceil(setup.t_final / setup.dt - 1e-9));
  const double interval = setup.output_interval;
  double next_output = interval > 0.0 ? interval : setup.t_final * 2.0;

  for (long k = 1; k <= n_steps; ++k) {
    std::pair<SystemState, NewtonReport> step;
    try {
      step = solver.advance(state);
    } catch (const HyperbolicityError& e) {
      std::ostringstream msg;
      msg << "at t = " << state.t + setup.dt << ": " << e.what();
      throw HyperbolicityError(msg.str(), e.sigma(), e.x());
    }
    state = std::move(step.first);
    state.t = k * setup.dt;
    const NewtonReport& nr = step.second;

    report.steps = static_cast<int>(k);
    report.total_newton_iterations += nr.iterations;
    report.max_newton_iterations = std::max(report.max_newton_iterations, nr.iterations);
    report.min_newton_iterations = std::min(report.min_newton_iterations, nr.iterations);
    report.max_final_residual = std::max(report.max_final_residual, nr.final_residual);
    track(state);

    const bool last = k == n_steps;
    if (on_output && (last || state.t >= next_output - 1e-9 * setup.dt)) on_output(space, state);
    while (interval > 0.0 && state.t >= next_output - 1e-9 * setup.dt) next_output += interval;
  }
  if (report.steps == 0) report.min_newton_iterations = 0;

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return {std::move(state), report};
}

}  // namespace slwave
