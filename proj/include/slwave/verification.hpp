#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "slwave/constitutive.hpp"
#include "slwave/fe_space.hpp"
#include "slwave/integrator.hpp"

namespace slwave {

/// Manufactured solution sigma = sin(pi x) sin(t) and the derivatives the forcing needs.
struct MmsFields {
  double sigma;
  double sigma_t;
  double sigma_tt;
  double sigma_xx;
};

MmsFields mms_fields(double x, double t);

/// rho [f'(sigma) sigma_tt + f''(sigma) sigma_t^2] - sigma_xx at the manufactured solution.
double mms_forcing(double x, double t, const MaterialParams& p);

/// sqrt(int (sigma_h - exact)^2 dx) with degree + 3 Gauss points per cell.
double l2_error(const FeSpace& space, std::span<const double> sigma,
                const std::function<double(double)>& exact);

/// L2 error against the manufactured solution at time t.
double l2_error(const FeSpace& space, std::span<const double> sigma, double t);

/// Simulation setup for the manufactured problem on [0, 1]: zero boundary data,
/// sigma(x, 0) = 0, sigma_t(x, 0) = sin(pi x) and the matching source.
SimulationSetup mms_setup(const MaterialParams& material, double alpha, double dt, double t_final,
                          int n_cells, const DegreePolicy& policy,
                          const NewtonSettings& newton = {});

enum class StudyKind { spatial, temporal };

struct ConvergenceRow {
  double resolution;  ///< cell count (spatial) or time step (temporal)
  int dofs;
  double l2_error;
  double rate;        ///< NaN on the first row
  int max_newton_iterations;
};

struct ConvergenceTable {
  StudyKind kind;
  std::vector<ConvergenceRow> rows;

  void write_csv(std::ostream& out) const;
};

/// Fills the rate column: log(e_{i-1}/e_i) / log(r_i), r_i the refinement ratio of row i.
void compute_rates(ConvergenceTable& table);

struct StudyConfig {
  MaterialParams material{1.0, 1.0, 2.0, 1e-8};
  double alpha = -0.05;
  double t_final = 1.0;
  NewtonSettings newton;
  std::vector<int> spatial_cells{16, 32, 64, 128};
  double spatial_dt = 1e-5;
  std::vector<double> temporal_dts{8e-3, 4e-3, 2e-3, 1e-3};
  int temporal_cells = 128;  ///< Q3 cells for the temporal study
  int jobs = 1;
};

ConvergenceTable convergence_study(StudyKind kind, const StudyConfig& config);

std::string to_string(StudyKind kind);

}  // namespace slwave
