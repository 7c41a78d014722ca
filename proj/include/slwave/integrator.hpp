#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slwave/assembly.hpp"
#include "slwave/constitutive.hpp"
#include "slwave/fe_space.hpp"
#include "slwave/state.hpp"

namespace slwave {

struct NewtonSettings {
  double tol = 1e-10;        ///< relative to the residual norm of the step's first iterate
  double abs_floor = 1e-12;  ///< absolute residual norm that always counts as converged
  /// A floor of roundoff_factor * eps * || |K||S| + |S_tan||S_ddot| + |L| || is also applied,
  /// so fine meshes are not asked for a residual below the rounding level of its own terms.
  double roundoff_factor = 64.0;
  int k_max = 20;

  void validate() const;
};

/// Stress data on the boundary: sigma(0, t) = 0, sigma(L, t) = A sin(omega t).
struct BoundaryDrive {
  double amplitude = 0.02;
  double omega = 6.283185307179586;

  double right_value(double t) const;
  double right_acceleration(double t) const;  ///< d^2/dt^2 of right_value
};

struct NewtonReport {
  int iterations = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  std::vector<double> history;  ///< residual norm before each solve, then the final one
};

/// Newmark kinematics: returns (S_{n+1}, S_dot_{n+1}) for a trial S_ddot_{n+1}.
std::pair<std::vector<double>, std::vector<double>> newmark_update(
    const SystemState& state_n, std::span<const double> sigma_ddot_next, const HhtParams& hht);

/// Acceleration that makes the Newmark update land exactly on bc_value_next at node.
double boundary_acceleration(double bc_value_next, int node, const SystemState& state_n,
                             const HhtParams& hht);

/// Euclidean norm over DoFs that are not constrained.
double free_norm(std::span<const double> r, std::span<const DirichletConstraint> constrained);

/// One HHT-alpha step with Newton on the stress acceleration.
/// Throws NewtonDivergedError after k_max iterations and HyperbolicityError if f' <= 0.
class StepSolver {
 public:
  StepSolver(const FeSpace& space, const MaterialParams& material, const HhtParams& hht,
             const NewtonSettings& newton, const BoundaryDrive& drive, Forcing forcing = {});

  std::pair<SystemState, NewtonReport> advance(const SystemState& state_n) const;

  /// Solves the t = 0 balance for the initial acceleration (S, S_dot given).
  std::vector<double> initial_acceleration(const SystemState& state0) const;

  const Assembler& assembler() const { return assembler_; }
  const HhtParams& hht() const { return hht_; }

 private:
  double roundoff_floor(const SystemState& next, const BandedMatrix& tangent,
                        std::span<const double> load,
                        std::span<const DirichletConstraint> constraints) const;

  Assembler assembler_;
  HhtParams hht_;
  NewtonSettings newton_;
  BoundaryDrive drive_;
  Forcing forcing_;
};

std::pair<SystemState, NewtonReport> advance_step(const SystemState& state_n, const FeSpace& space,
                                                  const HhtParams& hht, const MaterialParams& p,
                                                  const NewtonSettings& newton,
                                                  const BoundaryDrive& drive,
                                                  const Forcing& forcing = {});

enum class InitialAcceleration { solve, zero };

/// Everything one time-dependent run needs.
struct SimulationSetup {
  MaterialParams material;
  double length = 1.0;
  int n_cells = 200;
  DegreePolicy degree_policy = DegreePolicy::uniform(1);
  double dt = 1e-3;
  double t_final = 1.0;
  double alpha = -0.05;
  InitialAcceleration initial_acceleration = InitialAcceleration::solve;
  BoundaryDrive drive;
  NewtonSettings newton;
  Forcing forcing;                                ///< empty for unforced runs
  std::function<double(double)> initial_stress;   ///< empty means zero
  std::function<double(double)> initial_rate;     ///< empty means zero
  double output_interval = 0.0;                   ///< <= 0: only the final state
};

struct RunReport {
  int steps = 0;
  int max_newton_iterations = 0;
  int min_newton_iterations = 0;
  long total_newton_iterations = 0;
  double max_final_residual = 0.0;
  double max_wave_speed_excess = 0.0;  ///< max over steps and nodes of c - 1/sqrt(rho)
  double max_boundary_error = 0.0;     ///< max |sigma_node - prescribed| at the two ends
  double wall_seconds = 0.0;
};

/// Called at t = 0, every output_interval and at t_final.
using SnapshotCallback = std::function<void(const FeSpace&, const SystemState&)>;

struct SimulationResult {
  SystemState final_state;
  RunReport report;
};

/// Steps from t = 0 to t_final. Errors are rethrown with the failing time prepended.
SimulationResult run_simulation(const SimulationSetup& setup, const SnapshotCallback& on_output = {});

/// Same, on a caller-provided space.
SimulationResult run_simulation(const SimulationSetup& setup, const FeSpace& space,
                                const SnapshotCallback& on_output = {});

}  // namespace slwave
