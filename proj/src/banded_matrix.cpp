#include "slwave/banded_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

extern "C" void dgbsv_(const int* n, const int* kl, const int* ku, const int* nrhs, double* ab,
                       const int* ldab, int* ipiv, double* b, const int* ldb, int* info);

namespace slwave {

BandedMatrix::BandedMatrix(int n, int bandwidth)
    : n_(n), bw_(bandwidth), data_(static_cast<std::size_t>(n) * (2 * bandwidth + 1), 0.0) {
  if (n < 1 || bandwidth < 0) throw std::invalid_argument("BandedMatrix: bad shape");
}

void BandedMatrix::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

void BandedMatrix::axpy(double s, const BandedMatrix& other) {
  if (other.n_ != n_ || other.bw_ != bw_) throw std::invalid_argument("BandedMatrix: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * other.data_[k];
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    const int j0 = std::max(0, i - bw_);
    const int j1 = std::min(n_ - 1, i + bw_);
    double acc = 0.0;
    for (int j = j0; j <= j1; ++j) acc += data_[index(i, j)] * x[j];
    y[i] = acc;
  }
  return y;
}

std::vector<double> BandedMatrix::abs_multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    const int j0 = std::max(0, i - bw_);
    const int j1 = std::min(n_ - 1, i + bw_);
    double acc = 0.0;
    for (int j = j0; j <= j1; ++j) acc += std::abs(data_[index(i, j)] * x[j]);
    y[i] = acc;
  }
  return y;
}

std::vector<double> BandedMatrix::solve(std::span<const double> rhs) const {
  if (static_cast<int>(rhs.size()) != n_) throw std::invalid_argument("BandedMatrix::solve: size");
  const int kl = bw_;
  const int ku = bw_;
  const int ldab = 2 * kl + ku + 1;
  const int nrhs = 1;

  // LAPACK band layout: AB(kl + ku + i - j, j), column-major, 0-based.
  std::vector<double> ab(static_cast<std::size_t>(ldab) * n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    const int j0 = std::max(0, i - bw_);
    const int j1 = std::min(n_ - 1, i + bw_);
    for (int j = j0; j <= j1; ++j)
      ab[static_cast<std::size_t>(j) * ldab + (kl + ku + i - j)] = data_[index(i, j)];
  }

  std::vector<double> x(rhs.begin(), rhs.end());
  std::vector<int> ipiv(n_);
  int info = 0;
  const int n = n_;
  dgbsv_(&n, &kl, &ku, &nrhs, ab.data(), &ldab, ipiv.data(), x.data(), &n, &info);
  if (info != 0)
    throw std::runtime_error("banded solve failed (dgbsv info = " + std::to_string(info) + ")");
  return x;
}

}  // namespace slwave
