#pragma once

#include "htm/radial_function.hpp"

namespace htm {

/// Minimal annulus Dirichlet energy 2 pi (b - a)^2 / log(r/s) among functions
/// bridging the values a at |x| = s and b at |x| = r, 0 < s < r.
double capacity_energy(double a, double b, double s, double r);

/// Log-linear harmonic bridge h(x) = (b log(|x|/s) + a log(r/|x|)) / log(r/s)
/// on the annulus, extended by a inside and b outside. The annulus endpoints
/// snap to the nearest grid nodes, where h takes the values a and b exactly.
RadialFunction harmonic_annulus(double a, double b, double s, double r, const GridPtr& grid);

/// 2 pi int_s^r u'(t)^2 t dt of the piecewise-linear interpolant, endpoints
/// snapped to the nearest nodes.
double annulus_dirichlet_energy(const RadialFunction& u, double s, double r);

}  // namespace htm
