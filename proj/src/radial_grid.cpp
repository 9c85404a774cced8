#include "htm/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace htm {

namespace {

void check_structure(const RadialGrid& g) {
  const Eigen::Index n = g.nodes.size();
  if (n < 3) throw std::invalid_argument("RadialGrid: need at least 3 nodes");
  if (!(g.r_min > 0.0) || !(g.delta_b > 0.0) || !(g.delta_b < 1.0) ||
      !(g.r_min < 1.0 - g.delta_b))
    throw std::invalid_argument("RadialGrid: cutoffs must satisfy 0 < r_min < 1 - delta_b < 1");
  if (g.nodes(0) != g.r_min)
    throw std::invalid_argument("RadialGrid: first node must equal r_min");
  if (g.nodes(n - 1) != 1.0 - g.delta_b)
    throw std::invalid_argument("RadialGrid: last node must equal 1 - delta_b");
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    if (!(g.nodes(i) < g.nodes(i + 1)))
      throw std::invalid_argument("RadialGrid: nodes must be strictly increasing");
}

}  // namespace

bool RadialGrid::same_as(const RadialGrid& other) const {
  if (this == &other) return true;
  return nodes.size() == other.nodes.size() && nodes == other.nodes;
}

GridPtr build_grid(Eigen::Index n, double r_min, double delta_b, double grading) {
  if (n < 3) throw std::invalid_argument("build_grid: n must be >= 3");
  if (!(r_min > 0.0) || !(delta_b > 0.0) || !(delta_b < 1.0) || !(r_min < 1.0 - delta_b))
    throw std::invalid_argument("build_grid: need 0 < r_min < 1 - delta_b < 1");
  if (!(grading > 0.0) || !(grading <= 1.0))
    throw std::invalid_argument("build_grid: grading ratio must lie in (0, 1]");

  const Eigen::Index cells = n - 1;
  const Eigen::Index k_outer = (cells + 1) / 2;  // outer side gets the odd cell
  const Eigen::Index k_inner = cells - k_outer;
  const double length = (1.0 - delta_b) - r_min;
  const double len_inner = length * static_cast<double>(k_inner) / static_cast<double>(cells);
  const double len_outer = length - len_inner;
  const double lq = std::log(grading);

  Eigen::VectorXd widths(cells);
  // inner block: smallest cell at r_min, growing toward the split
  double sum = 0.0;
  for (Eigen::Index j = 0; j < k_inner; ++j) {
    widths(j) = std::exp(lq * static_cast<double>(k_inner - 1 - j));
    sum += widths(j);
  }
  widths.head(k_inner) *= len_inner / sum;
  // outer block: largest cell at the split, shrinking toward 1 - delta_b
  sum = 0.0;
  for (Eigen::Index j = 0; j < k_outer; ++j) {
    widths(k_inner + j) = std::exp(lq * static_cast<double>(j));
    sum += widths(k_inner + j);
  }
  widths.tail(k_outer) *= len_outer / sum;

  Eigen::VectorXd nodes(n);
  nodes(0) = r_min;
  long double acc = r_min;
  for (Eigen::Index i = 0; i < cells; ++i) {
    acc += widths(i);
    nodes(i + 1) = static_cast<double>(acc);
  }
  nodes(n - 1) = 1.0 - delta_b;

  for (Eigen::Index i = 0; i + 1 < n; ++i)
    if (!(nodes(i) < nodes(i + 1)))
      throw std::invalid_argument(
          "build_grid: grading too strong for this node count (cells underflow)");

  RadialGrid g{std::move(nodes), r_min, delta_b, grading};
  check_structure(g);
  return std::make_shared<const RadialGrid>(std::move(g));
}

namespace {

// grading ratio that makes the smallest cells land near w_target: solves
// w_target = L (rho - 1) / (rho^k - 1) approximately for rho = e^{x/k}
double graded_ratio(Eigen::Index n, double w_target) {
  const double k = static_cast<double>(n - 1) / 2.0;
  double x = 10.0;
  for (int i = 0; i < 4; ++i) x = std::log(std::max(2.7, 0.5 * x / (k * w_target)));
  return std::clamp(std::exp(-x / k), 0.80, 0.9995);
}

}  // namespace

GridPtr default_grid(Eigen::Index n) {
  if (n < 64) throw std::invalid_argument("default_grid: n must be >= 64");
  const double r_min = 1e-10, delta_b = 1e-8;
  return build_grid(n, r_min, delta_b, graded_ratio(n, r_min / 4.0));
}

GridPtr graded_grid(Eigen::Index n, double r_min, double delta_b, double w_target) {
  return build_grid(n, r_min, delta_b, graded_ratio(n, w_target));
}

GridPtr refine_with(const RadialGrid& base, std::vector<double> extra) {
  const double lo = base.r_min;
  const double hi = base.outer_radius();
  std::vector<double> merged(base.nodes.data(), base.nodes.data() + base.nodes.size());
  for (double x : extra)
    if (x > lo && x < hi && std::isfinite(x)) merged.push_back(x);
  std::sort(merged.begin(), merged.end());
  std::vector<double> kept;
  kept.reserve(merged.size());
  for (double x : merged) {
    if (!kept.empty() && x - kept.back() <= 1e-12 * x) continue;
    kept.push_back(x);
  }
  // never drop the endpoints
  kept.front() = lo;
  if (kept.back() != hi) {
    if (hi - kept.back() <= 1e-12 * hi) kept.back() = hi;
    else kept.push_back(hi);
  }

  RadialGrid g;
  g.nodes = Eigen::Map<const Eigen::VectorXd>(kept.data(), static_cast<Eigen::Index>(kept.size()));
  g.r_min = base.r_min;
  g.delta_b = base.delta_b;
  g.grading = base.grading;
  check_structure(g);
  return std::make_shared<const RadialGrid>(std::move(g));
}

}  // namespace htm
