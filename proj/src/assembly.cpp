#include "slwave/assembly.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "slwave/errors.hpp"

namespace slwave {

namespace {

constexpr int kMaxLocal = 4;  // degree 3

void check_size(std::span<const double> v, int n, const char* what) {
  if (static_cast<int>(v.size()) != n) {
    std::ostringstream msg;
    msg << what << ": expected length " << n << ", got " << v.size();
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

BandedMatrix assemble_stiffness(const FeSpace& space) {
  BandedMatrix K(space.n_dofs(), space.max_degree());
  for (int c = 0; c < space.n_cells(); ++c) {
    const int p = space.degree(c);
    const double h = space.cell_size(c);
    const QuadratureRule& rule = space.cell_quadrature(c);
    const ShapeTable& shape = space.quadrature_shapes(p);
    const auto dofs = space.cell_dofs(c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double jxw = rule.weights[q] / h;  // (dN/dxi / h)^2 * w h
      for (int i = 0; i <= p; ++i) {
        const double gi = jxw * shape.ref_grad(q, i);
        K.add(dofs[i], dofs[i], gi * shape.ref_grad(q, i));
        for (int j = i + 1; j <= p; ++j) {
          const double v = gi * shape.ref_grad(q, j);
          K.add(dofs[i], dofs[j], v);
          K.add(dofs[j], dofs[i], v);
        }
      }
    }
  }
  return K;
}

std::vector<double> assemble_load(const FeSpace& space, const Forcing& forcing, double t) {
  std::vector<double> load(space.n_dofs(), 0.0);
  if (!forcing) return load;
  for (int c = 0; c < space.n_cells(); ++c) {
    const int p = space.degree(c);
    const double h = space.cell_size(c);
    const QuadratureRule& rule = space.cell_quadrature(c);
    const ShapeTable& shape = space.quadrature_shapes(p);
    const auto dofs = space.cell_dofs(c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double x = space.cell_left(c) + rule.points[q] * h;
      const double fx = forcing(x, t) * rule.weights[q] * h;
      for (int i = 0; i <= p; ++i) load[dofs[i]] += fx * shape.value(q, i);
    }
  }
  return load;
}

std::pair<std::vector<double>, std::vector<double>> assemble_load(const FeSpace& space,
                                                                  const Forcing& forcing,
                                                                  double t_next, double t_prev) {
  return {assemble_load(space, forcing, t_next), assemble_load(space, forcing, t_prev)};
}

Assembler::Assembler(const FeSpace& space, const MaterialParams& material)
    : space_(&space), material_(material), stiffness_(assemble_stiffness(space)) {
  material_.validate();
}

void Assembler::integrate_inertia(std::span<const double> sigma, std::span<const double> sigma_dot,
                                  std::span<const double> sigma_ddot, std::vector<double>* force,
                                  BandedMatrix* matrix, double c_vel, double c_geo) const {
  const FeSpace& space = *space_;
  const double rho = material_.rho;
  const bool need_rates = force != nullptr || c_vel != 0.0 || c_geo != 0.0;

  std::array<double, kMaxLocal> s{}, sd{}, sdd{};
  for (int c = 0; c < space.n_cells(); ++c) {
    const int p = space.degree(c);
    const double h = space.cell_size(c);
    const QuadratureRule& rule = space.cell_quadrature(c);
    const ShapeTable& shape = space.quadrature_shapes(p);
    const auto dofs = space.cell_dofs(c);
    for (int i = 0; i <= p; ++i) {
      s[i] = sigma[dofs[i]];
      sd[i] = need_rates ? sigma_dot[dofs[i]] : 0.0;
      sdd[i] = need_rates ? sigma_ddot[dofs[i]] : 0.0;
    }

    for (std::size_t q = 0; q < rule.size(); ++q) {
      double sq = 0.0, sdq = 0.0, sddq = 0.0;
      for (int i = 0; i <= p; ++i) {
        const double n = shape.value(q, i);
        sq += n * s[i];
        sdq += n * sd[i];
        sddq += n * sdd[i];
      }
      const ComplianceJet jet = compliance_jet(sq, material_);
      if (!(jet.d1 > 0.0)) {
        const double x = space.cell_left(c) + rule.points[q] * h;
        std::ostringstream msg;
        msg << "hyperbolicity lost at x = " << x << ": f'(" << sq << ") = " << jet.d1;
        throw HyperbolicityError(msg.str(), sq, x);
      }
      const double jxw = rule.weights[q] * h;

      if (force) {
        const double integrand = rho * (jet.d1 * sddq + jet.d2 * sdq * sdq) * jxw;
        for (int i = 0; i <= p; ++i) (*force)[dofs[i]] += integrand * shape.value(q, i);
      }
      if (matrix) {
        const double coeff = rho *
                             (jet.d1 + c_vel * 2.0 * jet.d2 * sdq +
                              c_geo * (jet.d2 * sddq + jet.d3 * sdq * sdq)) *
                             jxw;
        for (int i = 0; i <= p; ++i) {
          const double ni = coeff * shape.value(q, i);
          matrix->add(dofs[i], dofs[i], ni * shape.value(q, i));
          for (int j = i + 1; j <= p; ++j) {
            const double v = ni * shape.value(q, j);
            matrix->add(dofs[i], dofs[j], v);
            matrix->add(dofs[j], dofs[i], v);
          }
        }
      }
    }
  }
}

BandedMatrix Assembler::mass(std::span<const double> sigma) const {
  check_size(sigma, space_->n_dofs(), "mass");
  BandedMatrix M(space_->n_dofs(), space_->max_degree());
  integrate_inertia(sigma, {}, {}, nullptr, &M, 0.0, 0.0);
  return M;
}

std::vector<double> Assembler::inertial(std::span<const double> sigma,
                                        std::span<const double> sigma_dot,
                                        std::span<const double> sigma_ddot) const {
  const int n = space_->n_dofs();
  check_size(sigma, n, "inertial sigma");
  check_size(sigma_dot, n, "inertial sigma_dot");
  check_size(sigma_ddot, n, "inertial sigma_ddot");
  std::vector<double> force(n, 0.0);
  integrate_inertia(sigma, sigma_dot, sigma_ddot, &force, nullptr, 0.0, 0.0);
  return force;
}

Assembler::AlphaPoint Assembler::alpha_point(const SystemState& next, const SystemState& prev,
                                             const HhtParams& hht) const {
  const int n = space_->n_dofs();
  check_size(next.sigma, n, "next.sigma");
  check_size(next.sigma_dot, n, "next.sigma_dot");
  check_size(next.sigma_ddot, n, "next.sigma_ddot");
  check_size(prev.sigma, n, "prev.sigma");
  check_size(prev.sigma_dot, n, "prev.sigma_dot");
  const double wn = hht.weight_next();
  const double wp = hht.weight_prev();
  AlphaPoint ap{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    ap.sigma[i] = wn * next.sigma[i] + wp * prev.sigma[i];
    ap.sigma_dot[i] = wn * next.sigma_dot[i] + wp * prev.sigma_dot[i];
  }
  return ap;
}

void Assembler::add_elastic(std::vector<double>& r, std::span<const double> sigma_alpha,
                            const HhtParams& hht, std::span<const double> load_next,
                            std::span<const double> load_prev) const {
  const int n = space_->n_dofs();
  const std::vector<double> ks = stiffness_.multiply(sigma_alpha);
  for (int i = 0; i < n; ++i) r[i] += ks[i];
  if (!load_next.empty()) {
    check_size(load_next, n, "residual load_next");
    for (int i = 0; i < n; ++i) r[i] -= hht.weight_next() * load_next[i];
  }
  if (!load_prev.empty()) {
    check_size(load_prev, n, "residual load_prev");
    for (int i = 0; i < n; ++i) r[i] -= hht.weight_prev() * load_prev[i];
  }
}

std::vector<double> Assembler::residual(const SystemState& next, const SystemState& prev,
                                        const HhtParams& hht, std::span<const double> load_next,
                                        std::span<const double> load_prev) const {
  const AlphaPoint ap = alpha_point(next, prev, hht);
  std::vector<double> r = inertial(ap.sigma, ap.sigma_dot, next.sigma_ddot);
  add_elastic(r, ap.sigma, hht, load_next, load_prev);
  return r;
}

BandedMatrix Assembler::tangent(const SystemState& next, const SystemState& prev,
                                const HhtParams& hht) const {
  const AlphaPoint ap = alpha_point(next, prev, hht);
  const double dt = hht.dt();
  const double w = hht.weight_next();
  const double c_vel = w * hht.gamma() * dt;
  const double c_geo = w * hht.beta() * dt * dt;
  BandedMatrix S(space_->n_dofs(), space_->max_degree());
  integrate_inertia(ap.sigma, ap.sigma_dot, next.sigma_ddot, nullptr, &S, c_vel, c_geo);
  S.axpy(c_geo, stiffness_);
  return S;
}

std::pair<std::vector<double>, BandedMatrix> Assembler::linearize(
    const SystemState& next, const SystemState& prev, const HhtParams& hht,
    std::span<const double> load_next, std::span<const double> load_prev) const {
  const AlphaPoint ap = alpha_point(next, prev, hht);
  const double dt = hht.dt();
  const double w = hht.weight_next();
  const double c_vel = w * hht.gamma() * dt;
  const double c_geo = w * hht.beta() * dt * dt;

  std::vector<double> r(space_->n_dofs(), 0.0);
  BandedMatrix S(space_->n_dofs(), space_->max_degree());
  integrate_inertia(ap.sigma, ap.sigma_dot, next.sigma_ddot, &r, &S, c_vel, c_geo);
  S.axpy(c_geo, stiffness_);
  add_elastic(r, ap.sigma, hht, load_next, load_prev);
  return {std::move(r), std::move(S)};
}

std::vector<double> assemble_inertial(const FeSpace& space, std::span<const double> sigma,
                                      std::span<const double> sigma_dot,
                                      std::span<const double> sigma_ddot, const MaterialParams& p) {
  return Assembler(space, p).inertial(sigma, sigma_dot, sigma_ddot);
}

std::vector<double> assemble_residual(const FeSpace& space, const SystemState& next,
                                      const SystemState& prev, const HhtParams& hht,
                                      const MaterialParams& p, std::span<const double> load_next,
                                      std::span<const double> load_prev) {
  return Assembler(space, p).residual(next, prev, hht, load_next, load_prev);
}

BandedMatrix assemble_tangent(const FeSpace& space, const SystemState& next,
                              const SystemState& prev, const HhtParams& hht,
                              const MaterialParams& p) {
  return Assembler(space, p).tangent(next, prev, hht);
}

ConstrainedSystem apply_dirichlet(const BandedMatrix& tangent, std::span<const double> residual,
                                  std::span<const DirichletConstraint> constraints,
                                  std::span<const double> iterate) {
  const int n = tangent.size();
  check_size(residual, n, "apply_dirichlet residual");
  check_size(iterate, n, "apply_dirichlet iterate");

  ConstrainedSystem sys{tangent, std::vector<double>(n)};
  for (int i = 0; i < n; ++i) sys.rhs[i] = -residual[i];

  for (const DirichletConstraint& con : constraints) {
    if (con.dof != 0 && con.dof != n - 1) {
      throw std::invalid_argument("apply_dirichlet: only boundary DoFs (0 and " +
                                  std::to_string(n - 1) + ") may be constrained, got " +
                                  std::to_string(con.dof));
    }
  }
  // Column elimination first so every row sees the prescribed increments.
  for (const DirichletConstraint& con : constraints) {
    const int k = con.dof;
    const double delta = con.value - iterate[k];
    for (int i = std::max(0, k - tangent.bandwidth()); i <= std::min(n - 1, k + tangent.bandwidth());
         ++i) {
      if (i == k) continue;
      sys.rhs[i] -= sys.matrix(i, k) * delta;
      sys.matrix.at(i, k) = 0.0;
      sys.matrix.at(k, i) = 0.0;
    }
  }
  for (const DirichletConstraint& con : constraints) {
    sys.matrix.at(con.dof, con.dof) = 1.0;
    sys.rhs[con.dof] = con.value - iterate[con.dof];
  }
  return sys;
}

}  // namespace slwave
