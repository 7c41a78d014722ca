#include "slwave/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "slwave/constitutive.hpp"
#include "slwave/errors.hpp"

namespace slwave {

namespace {

MaterialParams law(double b, double a) {
  MaterialParams p;
  p.b = b;
  p.a = a;
  return p;
}

struct Linearization {
  double sse = 0.0;
  double g[2] = {0.0, 0.0};  // J^T r
  double h[2][2] = {{0.0, 0.0}, {0.0, 0.0}};  // J^T J
};

// Residuals f(sigma) - eps and their Jacobian in (log b, log a).
Linearization linearize(double b, double a, const StressStrainDataset& data) {
  Linearization lin;
  for (auto [sigma, eps] : data.points) {
    const double s = std::abs(sigma);
    const double f = strain(sigma, law(b, a));
    const double r = f - eps;
    double j_logb = 0.0, j_loga = 0.0;
    if (s > 0.0 && b > 0.0) {
      const double q = std::pow(b * s, a);
      const double D = 1.0 + q;
      j_logb = -f * q / D;
      j_loga = f * (std::log1p(q) / a - q * std::log(b * s) / D);
    }
    lin.sse += r * r;
    lin.g[0] += j_logb * r;
    lin.g[1] += j_loga * r;
    lin.h[0][0] += j_logb * j_logb;
    lin.h[0][1] += j_logb * j_loga;
    lin.h[1][1] += j_loga * j_loga;
  }
  lin.h[1][0] = lin.h[0][1];
  return lin;
}

}  // namespace

void StressStrainDataset::validate() const {
  if (points.size() < 3) throw std::invalid_argument("dataset '" + label + "': need at least 3 points");
  for (auto [s, e] : points) {
    if (!std::isfinite(s) || !std::isfinite(e))
      throw std::invalid_argument("dataset '" + label + "': non-finite value");
  }
  const double s0 = points.front().first;
  if (std::all_of(points.begin(), points.end(), [s0](const auto& pt) { return pt.first == s0; }))
    throw std::invalid_argument("dataset '" + label + "': all stresses identical");
}

double sse_objective(double b, double a, const StressStrainDataset& data) {
  const MaterialParams p = law(b, a);
  double sse = 0.0;
  for (auto [sigma, eps] : data.points) {
    const double r = strain(sigma, p) - eps;
    sse += r * r;
  }
  return sse;
}

double r_squared(double sse, const StressStrainDataset& data) {
  double mean = 0.0;
  for (const auto& pt : data.points) mean += pt.second;
  mean /= static_cast<double>(data.points.size());
  double sst = 0.0;
  for (const auto& pt : data.points) sst += (pt.second - mean) * (pt.second - mean);
  if (sst == 0.0) return sse == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  return 1.0 - sse / sst;
}

FitResult fit_material(const StressStrainDataset& data, std::pair<double, double> init,
                       const FitSettings& settings) {
  data.validate();
  auto [b0, a0] = init;
  if (!(b0 >= 0.0) || !(a0 > 0.0)) throw std::invalid_argument("fit_material: init must satisfy b >= 0, a > 0");
  if (settings.max_iters < 1 || !(settings.tol > 0.0))
    throw std::invalid_argument("fit_material: bad settings");

  const double init_sse = sse_objective(b0, a0, data);

  // log b is unbounded below; b = 0 starts from a tiny positive magnitude instead.
  double theta[2] = {std::log(std::max(b0, 1e-12)), std::log(a0)};
  double sse = sse_objective(std::exp(theta[0]), std::exp(theta[1]), data);
  double lambda = 1e-3;

  FitResult result;
  for (int it = 1; it <= settings.max_iters; ++it) {
    result.iterations = it;
    const Linearization lin = linearize(std::exp(theta[0]), std::exp(theta[1]), data);
    const double scale = std::max(lin.h[0][0] + lin.h[1][1], std::numeric_limits<double>::min());

    bool accepted = false;
    double step_size = 0.0;
    double new_sse = sse;
    while (!accepted && lambda < 1e16) {
      const double d0 = lin.h[0][0] + lambda * std::max(lin.h[0][0], 1e-12 * scale);
      const double d1 = lin.h[1][1] + lambda * std::max(lin.h[1][1], 1e-12 * scale);
      const double det = d0 * d1 - lin.h[0][1] * lin.h[1][0];
      if (!(std::abs(det) > 0.0)) {
        lambda *= 4.0;
        continue;
      }
      const double s0 = -(d1 * lin.g[0] - lin.h[0][1] * lin.g[1]) / det;
      const double s1 = -(d0 * lin.g[1] - lin.h[1][0] * lin.g[0]) / det;
      const double trial[2] = {theta[0] + s0, std::clamp(theta[1] + s1, -20.0, 20.0)};
      const double trial_sse = sse_objective(std::exp(trial[0]), std::exp(trial[1]), data);
      if (std::isfinite(trial_sse) && trial_sse < sse) {
        theta[0] = trial[0];
        theta[1] = trial[1];
        new_sse = trial_sse;
        step_size = std::max(std::abs(s0), std::abs(s1));
        accepted = true;
        lambda = std::max(lambda / 3.0, 1e-12);
      } else {
        lambda *= 4.0;
      }
    }
    if (!accepted) {  // no descent direction left at machine precision
      result.converged = true;
      break;
    }
    const double decrease = (sse - new_sse) / std::max(sse, std::numeric_limits<double>::min());
    sse = new_sse;
    if (decrease < settings.tol && step_size < std::sqrt(settings.tol)) {
      result.converged = true;
      break;
    }
  }

  result.b = std::exp(theta[0]);
  result.a = std::exp(theta[1]);
  result.sse = sse;
  if (init_sse <= sse) {  // keep the contract even when b0 = 0 was nudged
    result.b = b0;
    result.a = a0;
    result.sse = init_sse;
  }
  result.r2 = r_squared(result.sse, data);
  return result;
}

StressStrainDataset read_dataset(std::istream& in, std::string label) {
  StressStrainDataset data;
  data.label = std::move(label);
  std::string line;
  int line_no = 0;
  bool seen_row = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace_if(line.begin(), line.end(), [](char ch) { return ch == ',' || ch == ';' || ch == '\t' || ch == '\r'; }, ' ');
    std::istringstream fields(line);
    std::string first, second;
    if (!(fields >> first)) continue;
    char* end1 = nullptr;
    char* end2 = nullptr;
    const double s = std::strtod(first.c_str(), &end1);
    const bool ok1 = *end1 == '\0';
    fields >> second;
    const double e = std::strtod(second.c_str(), &end2);
    const bool ok2 = !second.empty() && *end2 == '\0';
    if (!ok1 || !ok2) {
      if (!seen_row) {  // header
        seen_row = true;
        continue;
      }
      throw std::invalid_argument("dataset '" + data.label + "' line " + std::to_string(line_no) +
                                  ": expected two numbers");
    }
    seen_row = true;
    data.points.emplace_back(s, e);
  }
  return data;
}

StressStrainDataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset: " + path.string());
  return read_dataset(in, path.stem().string());
}

void write_fit_header(std::ostream& out) { out << "label,b,a,sse,r2\n"; }

void write_fit_row(std::ostream& out, const std::string& label, const FitResult& fit) {
  const auto old = out.precision(17);
  out << label << ',' << fit.b << ',' << fit.a << ',' << fit.sse << ',' << fit.r2 << '\n';
  out.precision(old);
}

StressStrainDataset synthetic_dataset(double b, double a, double sigma_min, double sigma_max,
                                      int n, double noise_rel, unsigned seed) {
  if (n < 2) throw std::invalid_argument("synthetic_dataset: n must be >= 2");
  const MaterialParams p = law(b, a);
  StressStrainDataset data;
  data.label = "synthetic";
  double eps_max = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = sigma_min + (sigma_max - sigma_min) * i / (n - 1);
    data.points.emplace_back(s, strain(s, p));
    eps_max = std::max(eps_max, std::abs(data.points.back().second));
  }
  if (noise_rel > 0.0) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_rel * eps_max);
    for (auto& pt : data.points) pt.second += noise(rng);
  }
  return data;
}

}  // namespace slwave
