#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "slwave/banded_matrix.hpp"
#include "slwave/constitutive.hpp"
#include "slwave/fe_space.hpp"
#include "slwave/state.hpp"

namespace slwave {

using Forcing = std::function<double(double x, double t)>;

/// K_IJ = int N_I' N_J' dx.
BandedMatrix assemble_stiffness(const FeSpace& space);

/// L_I(t) = int forcing(x, t) N_I dx.
std::vector<double> assemble_load(const FeSpace& space, const Forcing& forcing, double t);

/// Load vectors at t_next and t_prev; the residual blends them with the HHT weights.
std::pair<std::vector<double>, std::vector<double>> assemble_load(const FeSpace& space,
                                                                  const Forcing& forcing,
                                                                  double t_next, double t_prev);

/// Element-level operators of the stress wave equation on a fixed space and material.
/// The stiffness matrix is assembled once in the constructor.
class Assembler {
 public:
  Assembler(const FeSpace& space, const MaterialParams& material);

  const FeSpace& space() const { return *space_; }
  const MaterialParams& material() const { return material_; }
  const BandedMatrix& stiffness() const { return stiffness_; }

  /// M(S)_IJ = int rho f'(sigma_h) N_I N_J dx.
  BandedMatrix mass(std::span<const double> sigma) const;

  /// F_I = int rho [f'(sigma_h) sigma_tt_h + f''(sigma_h) sigma_t_h^2] N_I dx.
  /// Throws HyperbolicityError if f' <= 0 at a quadrature point.
  std::vector<double> inertial(std::span<const double> sigma, std::span<const double> sigma_dot,
                               std::span<const double> sigma_ddot) const;

  /// HHT balance. Stress, rate and load are blended at the alpha point,
  ///   X_a = (1+alpha) X_{n+1} - alpha X_n,
  /// and the acceleration is taken at t_{n+1}:
  ///   R = F_inrt(S_a, S_dot_a, S_ddot_{n+1}) + K S_a - L_a.
  /// alpha = 0 is plain Newmark at t_{n+1}. Empty load spans mean zero load.
  std::vector<double> residual(const SystemState& next, const SystemState& prev,
                               const HhtParams& hht, std::span<const double> load_next = {},
                               std::span<const double> load_prev = {}) const;

  /// dR/d(sigma_ddot_{n+1}) with S and S_dot tied to the acceleration by the Newmark update,
  /// w = 1 + alpha, coefficients at the alpha point:
  ///   M + w gamma dt C_nl + w beta dt^2 [K + K_sigma],
  ///   C_nl = int 2 rho f'' sigma_t N N,  K_sigma = int rho (f'' sigma_tt + f''' sigma_t^2) N N.
  BandedMatrix tangent(const SystemState& next, const SystemState& prev,
                       const HhtParams& hht) const;

  /// Residual and tangent from a single pass over the cells.
  std::pair<std::vector<double>, BandedMatrix> linearize(const SystemState& next,
                                                         const SystemState& prev,
                                                         const HhtParams& hht,
                                                         std::span<const double> load_next = {},
                                                         std::span<const double> load_prev = {}) const;

 private:
  // Shared cell loop. Any of the outputs may be null.
  void integrate_inertia(std::span<const double> sigma, std::span<const double> sigma_dot,
                         std::span<const double> sigma_ddot, std::vector<double>* force,
                         BandedMatrix* matrix, double c_vel, double c_geo) const;

  struct AlphaPoint {
    std::vector<double> sigma;
    std::vector<double> sigma_dot;
  };
  AlphaPoint alpha_point(const SystemState& next, const SystemState& prev,
                         const HhtParams& hht) const;

  void add_elastic(std::vector<double>& r, std::span<const double> sigma_alpha,
                   const HhtParams& hht, std::span<const double> load_next,
                   std::span<const double> load_prev) const;

  const FeSpace* space_;
  MaterialParams material_;
  BandedMatrix stiffness_;
};

// Free-function forms; each builds a temporary Assembler.
std::vector<double> assemble_inertial(const FeSpace& space, std::span<const double> sigma,
                                      std::span<const double> sigma_dot,
                                      std::span<const double> sigma_ddot, const MaterialParams& p);
std::vector<double> assemble_residual(const FeSpace& space, const SystemState& next,
                                      const SystemState& prev, const HhtParams& hht,
                                      const MaterialParams& p,
                                      std::span<const double> load_next = {},
                                      std::span<const double> load_prev = {});
BandedMatrix assemble_tangent(const FeSpace& space, const SystemState& next,
                              const SystemState& prev, const HhtParams& hht,
                              const MaterialParams& p);

/// Prescribed value of the Newton unknown (stress acceleration) at one DoF.
struct DirichletConstraint {
  int dof;
  double value;
};

/// Newton system tangent * delta = rhs after constraint elimination.
struct ConstrainedSystem {
  BandedMatrix matrix;
  std::vector<double> rhs;
};

/// Builds tangent * delta = -residual with constrained rows replaced by identity and
/// rhs = prescribed - iterate, and constrained columns eliminated into the rhs so the
/// matrix stays symmetric. Only the two boundary DoFs may be constrained.
ConstrainedSystem apply_dirichlet(const BandedMatrix& tangent, std::span<const double> residual,
                                  std::span<const DirichletConstraint> constraints,
                                  std::span<const double> iterate);

}  // namespace slwave
