#include "htm/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace htm {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Index nearest_index(const RadialGrid& g, double x) {
  const auto& r = g.nodes;
  const double* begin = r.data();
  const double* end = begin + r.size();
  const double* pos = std::lower_bound(begin, end, x);
  if (pos == begin) return 0;
  if (pos == end) return r.size() - 1;
  const Eigen::Index i = static_cast<Eigen::Index>(pos - begin);
  return (x - r(i - 1) <= r(i) - x) ? i - 1 : i;
}

}  // namespace

double capacity_energy(double a, double b, double s, double r) {
  if (!(s > 0.0) || !(s < r) || !(r < 1.0))
    throw std::invalid_argument("capacity_energy: need 0 < s < r < 1");
  const double diff = b - a;
  return 2.0 * kPi * diff * diff / std::log(r / s);
}

RadialFunction harmonic_annulus(double a, double b, double s, double r, const GridPtr& grid) {
  if (!grid) throw std::invalid_argument("harmonic_annulus: null grid");
  if (!(s < r)) throw std::invalid_argument("harmonic_annulus: need s < r");
  if (s < grid->r_min * (1.0 - 1e-13) || r > grid->outer_radius() * (1.0 + 1e-13))
    throw std::domain_error("harmonic_annulus: annulus outside the grid");
  const Eigen::Index is = nearest_index(*grid, s);
  const Eigen::Index ir = nearest_index(*grid, r);
  if (is >= ir) throw std::domain_error("harmonic_annulus: annulus unresolved by the grid");
  const double s2 = grid->node(is);
  const double r2 = grid->node(ir);
  const double denom = std::log(r2 / s2);

  RadialFunction h;
  h.grid = grid;
  h.values.resize(grid->size());
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    const double x = grid->node(i);
    if (i <= is) h.values(i) = a;
    else if (i >= ir) h.values(i) = b;
    else h.values(i) = (b * std::log(x / s2) + a * std::log(r2 / x)) / denom;
  }
  h.boundary_value = b;
  return h;
}

double annulus_dirichlet_energy(const RadialFunction& u, double s, double r) {
  if (!u.grid) throw std::invalid_argument("annulus_dirichlet_energy: function has no grid");
  if (!(s < r)) throw std::invalid_argument("annulus_dirichlet_energy: need s < r");
  const auto& g = *u.grid;
  if (s < g.r_min * (1.0 - 1e-13) || r > g.outer_radius() * (1.0 + 1e-13))
    throw std::domain_error("annulus_dirichlet_energy: bounds outside the grid");
  const Eigen::Index is = nearest_index(g, s);
  const Eigen::Index ir = nearest_index(g, r);
  if (is >= ir) throw std::domain_error("annulus_dirichlet_energy: annulus unresolved");
  double acc = 0.0;
  for (Eigen::Index i = is; i < ir; ++i) {
    const double h = g.node(i + 1) - g.node(i);
    const double du = u.values(i + 1) - u.values(i);
    acc += kPi * (g.node(i) + g.node(i + 1)) * du * du / h;
  }
  return acc;
}

}  // namespace htm
