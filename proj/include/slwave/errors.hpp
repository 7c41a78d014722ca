#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace slwave {

/// Raised when the tangent compliance f'(sigma) is not strictly positive,
/// i.e. the stress wave equation stops being hyperbolic.
class HyperbolicityError : public std::runtime_error {
 public:
  HyperbolicityError(const std::string& what, double sigma, double x = 0.0)
      : std::runtime_error(what), sigma_(sigma), x_(x) {}

  double sigma() const noexcept { return sigma_; }
  double x() const noexcept { return x_; }

 private:
  double sigma_;
  double x_;
};

class NewtonDivergedError : public std::runtime_error {
 public:
  NewtonDivergedError(const std::string& what, double t, std::vector<double> history)
      : std::runtime_error(what), t_(t), history_(std::move(history)) {}

  double time() const noexcept { return t_; }
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  double t_;
  std::vector<double> history_;
};

/// File-system or stream failure; the message names the path.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace slwave
