#include "slwave/constitutive.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "slwave/errors.hpp"

namespace slwave {

namespace {

// |sigma|^e, with the magnitude smoothed to sqrt(sigma^2 + eta^2) when e < 0.
double magnitude_pow(double sigma, double e, double eta) {
  if (e >= 0.0) return std::pow(std::abs(sigma), e);
  return std::pow(sigma * sigma + eta * eta, 0.5 * e);
}

double sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

void MaterialParams::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (!(rho > 0.0) || !std::isfinite(rho)) fail("material.rho must be > 0");
  if (!(b >= 0.0) || !std::isfinite(b)) fail("material.b must be >= 0");
  if (!(a > 0.0) || !std::isfinite(a)) fail("material.a must be > 0");
  if (!(reg_eta >= 0.0) || !std::isfinite(reg_eta)) fail("material.reg_eta must be >= 0");
}

double strain(double sigma, const MaterialParams& p) {
  if (p.b == 0.0 || sigma == 0.0) return sigma;
  const double bs = p.b * std::abs(sigma);
  const double q = std::pow(bs, p.a);
  if (q <= 1.0) return sigma * std::pow(1.0 + q, -1.0 / p.a);
  // Saturated branch: sigma (1+q)^(-1/a) = sign(sigma)/b * (1 + 1/q)^(-1/a).
  return sign(sigma) / p.b * std::pow(1.0 + 1.0 / q, -1.0 / p.a);
}

ComplianceJet compliance_jet(double sigma, const MaterialParams& p) {
  if (p.b == 0.0) return {sigma, 1.0, 0.0, 0.0};

  const double a = p.a;
  const double s = std::abs(sigma);
  const double ba = std::pow(p.b, a);
  const double q = ba * std::pow(s, a);
  const double D = 1.0 + q;

  ComplianceJet jet{};
  jet.f = strain(sigma, p);
  jet.d1 = std::pow(D, -(1.0 + 1.0 / a));
  jet.d2 = -(a + 1.0) * ba * sign(sigma) * magnitude_pow(sigma, a - 1.0, p.reg_eta) *
           std::pow(D, -(2.0 + 1.0 / a));
  jet.d3 = -(a + 1.0) * ba * std::pow(D, -(3.0 + 1.0 / a)) *
           ((a - 1.0) * magnitude_pow(sigma, a - 2.0, p.reg_eta) * D -
            (2.0 * a + 1.0) * ba * magnitude_pow(sigma, 2.0 * a - 2.0, p.reg_eta));
  return jet;
}

double strain_derivative(double sigma, int order, const MaterialParams& p) {
  const ComplianceJet jet = compliance_jet(sigma, p);
  switch (order) {
    case 1: return jet.d1;
    case 2: return jet.d2;
    case 3: return jet.d3;
    default: throw std::invalid_argument("strain_derivative: order must be 1, 2 or 3");
  }
}

double wave_speed(double sigma, const MaterialParams& p) {
  const double d1 = strain_derivative(sigma, 1, p);
  if (!(d1 > 0.0)) {
    std::ostringstream msg;
    msg << "hyperbolicity lost: f'(" << sigma << ") = " << d1;
    throw HyperbolicityError(msg.str(), sigma);
  }
  return 1.0 / std::sqrt(p.rho * d1);
}

double wave_speed_excess(double sigma, const MaterialParams& p) {
  if (p.b == 0.0) return 0.0;
  const double q = std::pow(p.b * std::abs(sigma), p.a);
  // sqrt(rho) c = (1+q)^((1+1/a)/2)
  return std::expm1(0.5 * (1.0 + 1.0 / p.a) * std::log1p(q)) / std::sqrt(p.rho);
}

HyperbolicityReport verify_hyperbolicity(double sigma_min, double sigma_max, int n_samples,
                                         const std::function<double(double)>& tangent) {
  if (!(sigma_min < sigma_max)) throw std::invalid_argument("verify_hyperbolicity: empty range");
  if (n_samples < 2) throw std::invalid_argument("verify_hyperbolicity: need >= 2 samples");

  HyperbolicityReport report{std::numeric_limits<double>::infinity(), sigma_min, true};
  const double step = (sigma_max - sigma_min) / (n_samples - 1);
  for (int i = 0; i < n_samples; ++i) {
    const double s = (i == n_samples - 1) ? sigma_max : sigma_min + i * step;
    const double t = tangent(s);
    if (t < report.min_tangent || std::isnan(t)) {
      report.min_tangent = t;
      report.worst_sigma = s;
    }
  }
  report.pass = report.min_tangent > 0.0;
  return report;
}

HyperbolicityReport verify_hyperbolicity(double sigma_min, double sigma_max, int n_samples,
                                         const MaterialParams& p) {
  return verify_hyperbolicity(sigma_min, sigma_max, n_samples,
                              [&p](double s) { return strain_derivative(s, 1, p); });
}

}  // namespace slwave
