#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace slwave {

struct StressStrainDataset {
  std::vector<std::pair<double, double>> points;  ///< (stress, strain)
  std::string label;

  /// At least 3 points, finite values, stresses not all identical.
  void validate() const;
};

struct FitResult {
  double b = 0.0;
  double a = 1.0;
  double sse = 0.0;
  double r2 = 0.0;
  int iterations = 0;
  bool converged = false;  ///< false: max_iters reached, fields hold the best iterate
};

struct FitSettings {
  int max_iters = 200;
  double tol = 1e-12;  ///< relative SSE decrease / step size at which the fit stops
};

/// Sum of squared strain residuals of the strain-limiting law with (b, a).
double sse_objective(double b, double a, const StressStrainDataset& data);

/// 1 - SSE / sum (eps_i - mean eps)^2.
double r_squared(double sse, const StressStrainDataset& data);

/// Levenberg-Marquardt on (log b, log a); steps are accepted only when the SSE
/// decreases, so the result never has a larger SSE than init.
FitResult fit_material(const StressStrainDataset& data, std::pair<double, double> init,
                       const FitSettings& settings = {});

/// Two columns (stress, strain) separated by comma, semicolon, tab or spaces.
/// A non-numeric first line is treated as a header; '#' starts a comment.
StressStrainDataset read_dataset(std::istream& in, std::string label);
StressStrainDataset read_dataset(const std::filesystem::path& path);

/// "label,b,a,sse,r2"
void write_fit_header(std::ostream& out);
void write_fit_row(std::ostream& out, const std::string& label, const FitResult& fit);

/// Samples eps = f(sigma; b, a) at n uniformly spaced stresses on [sigma_min, sigma_max],
/// optionally adding Gaussian strain noise with std noise_rel * max|eps| (fixed seed).
StressStrainDataset synthetic_dataset(double b, double a, double sigma_min, double sigma_max,
                                      int n, double noise_rel = 0.0, unsigned seed = 42);

}  // namespace slwave
