#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "slwave/constitutive.hpp"
#include "slwave/fe_space.hpp"

namespace slwave {

/// FE stress and stress rate on the uniform grid x_i = x_left + i L / M, i = 0..M.
struct Samples {
  std::vector<double> x;
  std::vector<double> sigma;
  std::vector<double> sigma_dot;
};

Samples sample_solution(const FeSpace& space, std::span<const double> sigma,
                        std::span<const double> sigma_dot, int M);

/// Kinematic fields recovered from the stress solution. u and v are anchored at
/// the left sample (u_0 = v_0 = 0) and integrated with the trapezoidal rule.
struct SnapshotRecord {
  std::vector<double> x;
  std::vector<double> sigma;
  std::vector<double> sigma_dot;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> eps;
  std::vector<double> c;

  std::size_t size() const { return x.size(); }
};

/// Throws HyperbolicityError if f' <= 0 at a sample.
SnapshotRecord reconstruct(const Samples& samples, const MaterialParams& p);

/// max_i |sigma_{i+1} - sigma_i| / dx over the sample grid.
double max_abs_gradient(const Samples& samples);

/// snapshot_t<time with 6 decimals>.csv
std::string snapshot_filename(double t);

/// Writes x,sigma,u,v,eps,c with 17 significant digits; returns the file path.
/// Throws IoError naming the path on I/O failure.
std::filesystem::path write_snapshot(const SnapshotRecord& record, double t,
                                     const std::filesystem::path& directory);

/// Parses a file written by write_snapshot (sigma_dot is left empty).
SnapshotRecord read_snapshot(const std::filesystem::path& path);

/// Long-format space-time file: one row per (t, x) with all reconstructed fields.
class SpaceTimeWriter {
 public:
  explicit SpaceTimeWriter(const std::filesystem::path& path);
  void append(const SnapshotRecord& record, double t);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace slwave
