#pragma once

#include "htm/radial_grid.hpp"

#include <utility>

namespace htm {

/// Nodal values of a radial profile u(r) on a grid, together with the value
/// extrapolated at r = 1 (zero for members of the Hardy space).
struct RadialFunction {
  GridPtr grid;
  Eigen::VectorXd values;
  double boundary_value = 0.0;
};

template <class F>
RadialFunction sample(GridPtr grid, F&& f, double boundary_value = 0.0) {
  RadialFunction out;
  out.grid = std::move(grid);
  const auto& r = out.grid->nodes;
  out.values.resize(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) out.values(i) = f(r(i));
  out.boundary_value = boundary_value;
  return out;
}

RadialFunction zero_function(GridPtr grid);

/// Piecewise-linear evaluation. Constant extension on [0, r_min], linear ramp
/// to boundary_value on [1 - delta_b, 1], boundary_value beyond.
double eval(const RadialFunction& u, double r);

bool all_finite(const RadialFunction& u);

/// Throws std::invalid_argument unless u lives on the given grid (same object
/// or structurally identical nodes).
void require_same_grid(const RadialFunction& u, const RadialGrid& grid);

}  // namespace htm
