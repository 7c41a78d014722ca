#pragma once

#include <span>
#include <vector>

namespace slwave {

/// Square matrix with entries only for |i - j| <= bandwidth.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(int n, int bandwidth);

  int size() const { return n_; }
  int bandwidth() const { return bw_; }

  bool in_band(int i, int j) const { return i - j <= bw_ && j - i <= bw_; }
  double operator()(int i, int j) const { return in_band(i, j) ? data_[index(i, j)] : 0.0; }
  double& at(int i, int j) { return data_[index(i, j)]; }
  void add(int i, int j, double v) { data_[index(i, j)] += v; }

  void set_zero();
  /// this += s * other (same shape).
  void axpy(double s, const BandedMatrix& other);

  std::vector<double> multiply(std::span<const double> x) const;
  /// |A| |x|, entrywise absolute values.
  std::vector<double> abs_multiply(std::span<const double> x) const;

  /// Direct banded LU solve with partial pivoting (LAPACK dgbsv).
  /// Throws std::runtime_error if the matrix is singular.
  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * (2 * bw_ + 1) + (j - i + bw_);
  }

  int n_ = 0;
  int bw_ = 0;
  std::vector<double> data_;
};

}  // namespace slwave
