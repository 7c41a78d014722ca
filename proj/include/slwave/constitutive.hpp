#pragma once

#include <functional>

namespace slwave {

/// Material constants of the 1D strain-limiting law
///   eps = sigma / (1 + (b|sigma|)^a)^(1/a).
struct MaterialParams {
  double rho = 1.0;      ///< mass density, > 0
  double b = 0.0;        ///< nonlinearity magnitude (1/stress), >= 0; strain is bounded by 1/b
  double a = 1.5;        ///< nonlinearity exponent, > 0
  double reg_eta = 1e-8; ///< smoothing width for |sigma| in negative powers, >= 0

  /// Throws std::invalid_argument naming the first violated bound.
  void validate() const;
};

double strain(double sigma, const MaterialParams& p);

/// k-th derivative of strain with respect to stress, k in {1, 2, 3}.
/// Factors |sigma|^e with e < 0 use sqrt(sigma^2 + reg_eta^2) instead of |sigma|.
double strain_derivative(double sigma, int order, const MaterialParams& p);

/// f, f', f'', f''' evaluated together; used by the assembly hot loop.
struct ComplianceJet {
  double f;
  double d1;
  double d2;
  double d3;
};
ComplianceJet compliance_jet(double sigma, const MaterialParams& p);

/// c(sigma) = 1 / sqrt(rho f'(sigma)). Throws HyperbolicityError if f' <= 0.
double wave_speed(double sigma, const MaterialParams& p);

/// c(sigma) - 1/sqrt(rho), evaluated without cancellation so that tiny
/// excesses (large exponents, small stresses) are not rounded to zero.
double wave_speed_excess(double sigma, const MaterialParams& p);

struct HyperbolicityReport {
  double min_tangent;
  double worst_sigma;
  bool pass;
};

/// Samples the tangent compliance on a uniform grid over [sigma_min, sigma_max].
HyperbolicityReport verify_hyperbolicity(double sigma_min, double sigma_max, int n_samples,
                                         const MaterialParams& p);

/// Same check for an arbitrary tangent function.
HyperbolicityReport verify_hyperbolicity(double sigma_min, double sigma_max, int n_samples,
                                         const std::function<double(double)>& tangent);

}  // namespace slwave
