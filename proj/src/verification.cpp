#include "slwave/verification.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "slwave/parallel.hpp"

namespace slwave {

MmsFields mms_fields(double x, double t) {
  const double sx = std::sin(std::numbers::pi * x);
  const double st = std::sin(t);
  return {sx * st, sx * std::cos(t), -sx * st, -std::numbers::pi * std::numbers::pi * sx * st};
}

double mms_forcing(double x, double t, const MaterialParams& p) {
  const MmsFields m = mms_fields(x, t);
  const ComplianceJet jet = compliance_jet(m.sigma, p);
  return p.rho * (jet.d1 * m.sigma_tt + jet.d2 * m.sigma_t * m.sigma_t) - m.sigma_xx;
}

double l2_error(const FeSpace& space, std::span<const double> sigma,
                const std::function<double(double)>& exact) {
  double sum = 0.0;
  for (int c = 0; c < space.n_cells(); ++c) {
    const int p = space.degree(c);
    const double h = space.cell_size(c);
    const QuadratureRule rule = gauss_rule(p + 3);
    const ShapeTable shape = lagrange_shape(p, rule.points);
    const auto dofs = space.cell_dofs(c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double uh = 0.0;
      for (int i = 0; i <= p; ++i) uh += shape.value(q, i) * sigma[dofs[i]];
      const double diff = uh - exact(space.cell_left(c) + rule.points[q] * h);
      sum += diff * diff * rule.weights[q] * h;
    }
  }
  return std::sqrt(sum);
}

double l2_error(const FeSpace& space, std::span<const double> sigma, double t) {
  return l2_error(space, sigma, [t](double x) { return mms_fields(x, t).sigma; });
}

SimulationSetup mms_setup(const MaterialParams& material, double alpha, double dt, double t_final,
                          int n_cells, const DegreePolicy& policy, const NewtonSettings& newton) {
  SimulationSetup s;
  s.material = material;
  s.length = 1.0;
  s.n_cells = n_cells;
  s.degree_policy = policy;
  s.dt = dt;
  s.t_final = t_final;
  s.alpha = alpha;
  s.drive = BoundaryDrive{0.0, 0.0};
  s.newton = newton;
  s.forcing = [material](double x, double t) { return mms_forcing(x, t, material); };
  s.initial_rate = [](double x) { return mms_fields(x, 0.0).sigma_t; };
  return s;
}

void compute_rates(ConvergenceTable& table) {
  auto& rows = table.rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0) {
      rows[i].rate = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double ratio = table.kind == StudyKind::spatial
                             ? rows[i].resolution / rows[i - 1].resolution
                             : rows[i - 1].resolution / rows[i].resolution;
    rows[i].rate = std::log(rows[i - 1].l2_error / rows[i].l2_error) / std::log(ratio);
  }
}

ConvergenceTable convergence_study(StudyKind kind, const StudyConfig& config) {
  ConvergenceTable table{kind, {}};
  const bool spatial = kind == StudyKind::spatial;
  const int n_rows =
      static_cast<int>(spatial ? config.spatial_cells.size() : config.temporal_dts.size());
  table.rows.resize(n_rows);

  parallel_for(n_rows, config.jobs, [&](int i) {
    const int cells = spatial ? config.spatial_cells[i] : config.temporal_cells;
    const double dt = spatial ? config.spatial_dt : config.temporal_dts[i];
    const DegreePolicy policy = DegreePolicy::uniform(spatial ? 1 : 3);
    const SimulationSetup setup =
        mms_setup(config.material, config.alpha, dt, config.t_final, cells, policy, config.newton);
    const FeSpace space = build_space(setup.length, cells, policy);
    const SimulationResult result = run_simulation(setup, space);

    ConvergenceRow& row = table.rows[i];
    row.resolution = spatial ? static_cast<double>(cells) : dt;
    row.dofs = space.n_dofs();
    row.l2_error = l2_error(space, result.final_state.sigma, result.final_state.t);
    row.max_newton_iterations = result.report.max_newton_iterations;
  });

  compute_rates(table);
  return table;
}

void ConvergenceTable::write_csv(std::ostream& out) const {
  out << "resolution,dofs,l2_error,rate\n";
  out.precision(17);
  for (const ConvergenceRow& r : rows) {
    out << r.resolution << ',' << r.dofs << ',' << r.l2_error << ',';
    if (!std::isnan(r.rate)) out << r.rate;
    out << '\n';
  }
}

std::string to_string(StudyKind kind) { return kind == StudyKind::spatial ? "spatial" : "temporal"; }

}  // namespace slwave
