#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace slwave {

/// Quadrature on the reference cell [0, 1].
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// Gauss-Legendre rule with n_points in [1, 10]; exact up to degree 2n-1.
QuadratureRule gauss_rule(int n_points);

/// How polynomial degrees are laid out over the cells.
struct DegreePolicy {
  enum class Kind { uniform, center_graded };

  Kind kind = Kind::uniform;
  int degree = 1;  // only meaningful for uniform

  static DegreePolicy uniform(int p);
  static DegreePolicy center_graded();

  /// "uniform(p)" or "center_graded".
  static DegreePolicy parse(const std::string& text);
  std::string to_string() const;

  /// Degree for a cell whose midpoint sits at normalized position xi in [0, 1].
  int degree_at(double xi) const;
};

/// Local node positions on [0, 1] for a degree-p Lagrange cell (Gauss-Lobatto, p <= 3).
std::vector<double> reference_nodes(int degree);

/// Values and reference derivatives of all local basis functions at a set of points.
/// Row-major: value(q, i) is basis i at point q.
struct ShapeTable {
  int n_points = 0;
  int n_basis = 0;
  std::vector<double> values;
  std::vector<double> ref_grads;

  double value(int q, int i) const { return values[q * n_basis + i]; }
  double ref_grad(int q, int i) const { return ref_grads[q * n_basis + i]; }
};

ShapeTable lagrange_shape(int degree, std::span<const double> ref_points);

/// Continuous Lagrange space on a 1D mesh with per-cell degree in {1, 2, 3}.
/// Immutable after construction.
class FeSpace {
 public:
  FeSpace(std::vector<double> vertices, std::vector<int> degrees);

  int n_cells() const { return static_cast<int>(degrees_.size()); }
  int n_dofs() const { return static_cast<int>(dof_coords_.size()); }
  int degree(int cell) const { return degrees_[cell]; }
  int max_degree() const { return max_degree_; }

  double x_left() const { return vertices_.front(); }
  double x_right() const { return vertices_.back(); }
  double length() const { return x_right() - x_left(); }
  double cell_left(int cell) const { return vertices_[cell]; }
  double cell_size(int cell) const { return vertices_[cell + 1] - vertices_[cell]; }
  const std::vector<double>& vertices() const { return vertices_; }

  /// Global DoF indices of a cell, ordered left to right.
  std::span<const int> cell_dofs(int cell) const {
    return {cell_dofs_.data() + offsets_[cell], static_cast<std::size_t>(degrees_[cell] + 1)};
  }
  const std::vector<double>& dof_coords() const { return dof_coords_; }

  /// Cell-wise quadrature used by assembly (degree + 2 Gauss points).
  const QuadratureRule& cell_quadrature(int cell) const { return quadrature_[degrees_[cell]]; }
  /// Basis table at the points of cell_quadrature for the given degree.
  const ShapeTable& quadrature_shapes(int degree) const { return quad_shapes_[degree]; }

  /// Index of the cell containing x (right-closed at the domain end).
  int locate(double x) const;

  /// FE field value at a physical point.
  double evaluate(std::span<const double> nodal, double x) const;

  std::vector<double> interpolate(const std::function<double(double)>& fn) const;

 private:
  std::vector<double> vertices_;
  std::vector<int> degrees_;
  std::vector<int> offsets_;
  std::vector<int> cell_dofs_;
  std::vector<double> dof_coords_;
  std::vector<QuadratureRule> quadrature_;  // indexed by degree
  std::vector<ShapeTable> quad_shapes_;     // indexed by degree
  int max_degree_ = 1;
};

/// Uniform mesh of n_cells on [0, L] with degrees assigned by policy.
FeSpace build_space(double L, int n_cells, const DegreePolicy& policy);

ShapeTable shape_eval(const FeSpace& space, int cell, std::span<const double> ref_points);

}  // namespace slwave
