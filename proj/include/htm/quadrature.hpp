#pragma once

#include "htm/radial_function.hpp"

namespace htm {

/// Disc integral 2*pi * int f(r) r dr over [0, 1]: composite trapezoid on the
/// grid, f constant on the inner tail [0, r_min], linear between f(1-delta_b)
/// and boundary_value on the outer tail. Exact for f constant.
double integrate_disc(const RadialFunction& f);

/// int_B u^2 dx with the same trapezoid rule; the outer tail integrates the
/// squared linear ramp of u exactly.
double l2_norm_sq(const RadialFunction& u);

/// int_B u^2 / (1 - |x|^2)^2 dx. Requires boundary_value == 0 (the integral
/// is infinite otherwise); the outer tail is the closed-form integral of the
/// squared ramp against the weight.
double hardy_integral(const RadialFunction& u);

/// int_B |grad u|^2 dx = 2*pi * int u'(r)^2 r dr of the piecewise-linear
/// interpolant. Zero iff u is constant on the grid; the boundary ramp is not
/// included here (it belongs to the quadratic forms).
double dirichlet_energy(const RadialFunction& u);

/// Nodal derivative u'(r): centered second-order differences on interior
/// nodes, one-sided three-point stencils at the ends.
RadialFunction derivative(const RadialFunction& u);

/// Trapezoid of 2*pi*f(s)*s on an arbitrary strictly increasing node set,
/// no endpoint tails. Used for window/profile integrals.
double integrate_radial(const Eigen::VectorXd& s, const Eigen::VectorXd& f);

/// Per-node trapezoid weights of integrate_disc, inner tail folded into the
/// first weight. The outer ramp tail is not representable as a node weight
/// and is exposed through the tail:: coefficients below.
Eigen::VectorXd disc_weights(const RadialGrid& g);

namespace tail {

/// Outer tail of integrate_disc: 2*pi * int_{1-d}^{1} lin(f_last -> b) r dr.
double integral_value(double delta, double f_last, double boundary_value);

/// Coefficient of u_last^2 in the outer-tail mass (ramp to zero).
double mass_coeff(double delta);

/// Coefficient of u_last^2 in the outer-tail Hardy integral (ramp to zero).
double hardy_coeff(double delta);

/// Coefficient of u_last^2 in the outer-tail Dirichlet energy (ramp to zero).
double stiffness_coeff(double delta);

/// General outer-tail L2 contribution for a ramp from A at 1-delta to B at 1.
double l2_value(double delta, double A, double B);

}  // namespace tail

}  // namespace htm
