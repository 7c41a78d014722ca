#pragma once

#include <vector>

namespace slwave {

/// HHT-alpha parameters. beta and gamma always follow from alpha:
///   beta = (1 - alpha)^2 / 4,  gamma = 1/2 - alpha,  alpha in [-1/3, 0].
class HhtParams {
 public:
  HhtParams(double alpha, double dt);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double dt() const { return dt_; }

  /// Weights of the elastic/load terms at t_{n+1} and t_n in the balance
  /// F_inrt(n+1) + w_next K S_{n+1} + w_prev K S_n = w_next L_{n+1} + w_prev L_n.
  double weight_next() const { return 1.0 + alpha_; }
  double weight_prev() const { return -alpha_; }

 private:
  double alpha_;
  double beta_;
  double gamma_;
  double dt_;
};

/// Nodal stress, stress rate and stress acceleration at time t.
struct SystemState {
  double t = 0.0;
  std::vector<double> sigma;
  std::vector<double> sigma_dot;
  std::vector<double> sigma_ddot;

  static SystemState zeros(int n_dofs, double t = 0.0) {
    return {t, std::vector<double>(n_dofs, 0.0), std::vector<double>(n_dofs, 0.0),
            std::vector<double>(n_dofs, 0.0)};
  }
  int size() const { return static_cast<int>(sigma.size()); }
};

}  // namespace slwave
