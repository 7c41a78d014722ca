#include "slwave/fe_space.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace slwave {

namespace {

template <int N>
QuadratureRule unfold_gauss() {
  using rule = boost::math::quadrature::gauss<double, N>;
  const auto& abscissa = rule::abscissa();
  const auto& weights = rule::weights();

  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < abscissa.size(); ++k) {
    pts.emplace_back(abscissa[k], weights[k]);
    if (abscissa[k] != 0.0) pts.emplace_back(-abscissa[k], weights[k]);
  }
  std::sort(pts.begin(), pts.end());

  QuadratureRule out;
  for (auto [x, w] : pts) {
    out.points.push_back(0.5 * (x + 1.0));
    out.weights.push_back(0.5 * w);
  }
  return out;
}

template <int... Ns>
QuadratureRule gauss_dispatch(int n, std::integer_sequence<int, Ns...>) {
  QuadratureRule rule;
  ((n == Ns + 1 ? (rule = unfold_gauss<Ns + 1>(), true) : false) || ...);
  return rule;
}

}  // namespace

QuadratureRule gauss_rule(int n_points) {
  if (n_points < 1 || n_points > 10)
    throw std::invalid_argument("gauss_rule: n_points must be in [1, 10]");
  return gauss_dispatch(n_points, std::make_integer_sequence<int, 10>{});
}

DegreePolicy DegreePolicy::uniform(int p) {
  if (p < 1 || p > 3) throw std::invalid_argument("uniform degree must be 1, 2 or 3");
  return {Kind::uniform, p};
}

DegreePolicy DegreePolicy::center_graded() { return {Kind::center_graded, 3}; }

DegreePolicy DegreePolicy::parse(const std::string& text) {
  if (text == "center_graded") return center_graded();
  if (text.size() == 10 && text.starts_with("uniform(") && text.back() == ')') {
    const char d = text[8];
    if (d >= '1' && d <= '3') return uniform(d - '0');
  }
  throw std::invalid_argument("degree_policy must be uniform(1|2|3) or center_graded, got '" +
                              text + "'");
}

std::string DegreePolicy::to_string() const {
  if (kind == Kind::center_graded) return "center_graded";
  return "uniform(" + std::to_string(degree) + ")";
}

int DegreePolicy::degree_at(double xi) const {
  if (kind == Kind::uniform) return degree;
  const double d = std::abs(xi - 0.5);
  if (d < 0.2) return 3;
  if (d < 0.4) return 2;
  return 1;
}

std::vector<double> reference_nodes(int degree) {
  switch (degree) {
    case 1: return {0.0, 1.0};
    case 2: return {0.0, 0.5, 1.0};
    case 3: {
      const double r = 0.5 / std::sqrt(5.0);
      return {0.0, 0.5 - r, 0.5 + r, 1.0};
    }
    default: throw std::invalid_argument("reference_nodes: degree must be 1, 2 or 3");
  }
}

ShapeTable lagrange_shape(int degree, std::span<const double> ref_points) {
  const std::vector<double> nodes = reference_nodes(degree);
  const int nb = degree + 1;

  ShapeTable table;
  table.n_points = static_cast<int>(ref_points.size());
  table.n_basis = nb;
  table.values.assign(table.n_points * nb, 0.0);
  table.ref_grads.assign(table.n_points * nb, 0.0);

  for (int q = 0; q < table.n_points; ++q) {
    const double xi = ref_points[q];
    for (int i = 0; i < nb; ++i) {
      double denom = 1.0;
      double value = 1.0;
      for (int j = 0; j < nb; ++j) {
        if (j == i) continue;
        denom *= nodes[i] - nodes[j];
        value *= xi - nodes[j];
      }
      // d/dxi prod_j (xi - x_j) = sum_k prod_{j != k} (xi - x_j)
      double grad = 0.0;
      for (int k = 0; k < nb; ++k) {
        if (k == i) continue;
        double term = 1.0;
        for (int j = 0; j < nb; ++j) {
          if (j == i || j == k) continue;
          term *= xi - nodes[j];
        }
        grad += term;
      }
      table.values[q * nb + i] = value / denom;
      table.ref_grads[q * nb + i] = grad / denom;
    }
  }
  return table;
}

FeSpace::FeSpace(std::vector<double> vertices, std::vector<int> degrees)
    : vertices_(std::move(vertices)), degrees_(std::move(degrees)) {
  if (degrees_.size() < 1 || vertices_.size() != degrees_.size() + 1)
    throw std::invalid_argument("FeSpace: need n_cells + 1 vertices");
  for (std::size_t c = 0; c < degrees_.size(); ++c) {
    if (!(vertices_[c + 1] > vertices_[c]))
      throw std::invalid_argument("FeSpace: vertices must be strictly increasing");
    if (degrees_[c] < 1 || degrees_[c] > 3)
      throw std::invalid_argument("FeSpace: cell degree must be 1, 2 or 3");
  }
  max_degree_ = *std::max_element(degrees_.begin(), degrees_.end());

  int next = 0;
  dof_coords_.push_back(vertices_.front());
  for (int c = 0; c < n_cells(); ++c) {
    const int p = degrees_[c];
    offsets_.push_back(static_cast<int>(cell_dofs_.size()));
    const std::vector<double> nodes = reference_nodes(p);
    for (int i = 0; i <= p; ++i) {
      cell_dofs_.push_back(next + i);
      if (i > 0) dof_coords_.push_back(vertices_[c] + nodes[i] * cell_size(c));
    }
    next += p;
  }
  // Snap shared vertices so cell boundaries carry exact mesh coordinates.
  for (int c = 0; c < n_cells(); ++c) dof_coords_[cell_dofs(c).back()] = vertices_[c + 1];

  quadrature_.resize(4);
  quad_shapes_.resize(4);
  for (int p = 1; p <= 3; ++p) {
    quadrature_[p] = gauss_rule(p + 2);
    quad_shapes_[p] = lagrange_shape(p, quadrature_[p].points);
  }
}

int FeSpace::locate(double x) const {
  auto it = std::upper_bound(vertices_.begin(), vertices_.end(), x);
  int cell = static_cast<int>(it - vertices_.begin()) - 1;
  return std::clamp(cell, 0, n_cells() - 1);
}

double FeSpace::evaluate(std::span<const double> nodal, double x) const {
  const int cell = locate(x);
  const double xi = std::clamp((x - cell_left(cell)) / cell_size(cell), 0.0, 1.0);
  const ShapeTable shape = lagrange_shape(degrees_[cell], std::span<const double>(&xi, 1));
  const auto dofs = cell_dofs(cell);
  double value = 0.0;
  for (int i = 0; i < shape.n_basis; ++i) value += shape.value(0, i) * nodal[dofs[i]];
  return value;
}

std::vector<double> FeSpace::interpolate(const std::function<double(double)>& fn) const {
  std::vector<double> out(dof_coords_.size());
  std::transform(dof_coords_.begin(), dof_coords_.end(), out.begin(), fn);
  return out;
}

FeSpace build_space(double L, int n_cells, const DegreePolicy& policy) {
  if (!(L > 0.0)) throw std::invalid_argument("build_space: L must be > 0");
  if (n_cells < 2) throw std::invalid_argument("build_space: n_cells must be >= 2");

  std::vector<double> vertices(n_cells + 1);
  for (int i = 0; i <= n_cells; ++i) vertices[i] = L * i / n_cells;

  std::vector<int> degrees(n_cells);
  for (int c = 0; c < n_cells; ++c) {
    const double mid = (c + 0.5) / n_cells;  // normalized midpoint
    degrees[c] = policy.degree_at(mid);
  }
  return FeSpace(std::move(vertices), std::move(degrees));
}

ShapeTable shape_eval(const FeSpace& space, int cell, std::span<const double> ref_points) {
  if (cell < 0 || cell >= space.n_cells()) throw std::out_of_range("shape_eval: bad cell index");
  return lagrange_shape(space.degree(cell), ref_points);
}

}  // namespace slwave
