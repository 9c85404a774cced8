#include "htm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace htm {

namespace {

constexpr double kPi = std::numbers::pi;

// Compensated accumulator: the graded meshes mix scales across ten decades.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double lagrange3_derivative(double x0, double x1, double x2, double f0, double f1, double f2,
                            double at) {
  const double d0 = (2.0 * at - x1 - x2) / ((x0 - x1) * (x0 - x2));
  const double d1 = (2.0 * at - x0 - x2) / ((x1 - x0) * (x1 - x2));
  const double d2 = (2.0 * at - x0 - x1) / ((x2 - x0) * (x2 - x1));
  return f0 * d0 + f1 * d1 + f2 * d2;
}

}  // namespace

RadialFunction zero_function(GridPtr grid) {
  RadialFunction out;
  out.values = Eigen::VectorXd::Zero(grid->size());
  out.grid = std::move(grid);
  out.boundary_value = 0.0;
  return out;
}

double eval(const RadialFunction& u, double r) {
  const auto& nodes = u.grid->nodes;
  const Eigen::Index n = nodes.size();
  if (r <= nodes(0)) return u.values(0);
  if (r >= 1.0) return u.boundary_value;
  if (r >= nodes(n - 1)) {
    const double t = (r - nodes(n - 1)) / (1.0 - nodes(n - 1));
    return (1.0 - t) * u.values(n - 1) + t * u.boundary_value;
  }
  const double* begin = nodes.data();
  const double* pos = std::upper_bound(begin, begin + n, r);
  const Eigen::Index i = static_cast<Eigen::Index>(pos - begin) - 1;
  const double t = (r - nodes(i)) / (nodes(i + 1) - nodes(i));
  return (1.0 - t) * u.values(i) + t * u.values(i + 1);
}

bool all_finite(const RadialFunction& u) {
  return u.values.allFinite() && std::isfinite(u.boundary_value);
}

void require_same_grid(const RadialFunction& u, const RadialGrid& grid) {
  if (!u.grid) throw std::invalid_argument("RadialFunction has no grid");
  if (!u.grid->same_as(grid))
    throw std::invalid_argument("RadialFunction lives on a different grid");
}

namespace tail {

double integral_value(double delta, double f_last, double boundary_value) {
  const double r1 = 1.0 - delta;
  return 2.0 * kPi *
         (f_last * (delta / 2.0 - delta * delta / 3.0) +
          boundary_value * (r1 * delta / 2.0 + delta * delta / 3.0));
}

double mass_coeff(double delta) {
  return 2.0 * kPi * (delta / 3.0 - delta * delta / 4.0);
}

double hardy_coeff(double delta) {
  // (2 pi / d^2) * int_0^d t^2 (1-t) / (t^2 (2-t)^2) dt
  //   = (2 pi / d^2) * (log(2/(2-d)) + 1/2 - 1/(2-d))
  // series form for small d avoids the cancellation of three O(d/2) terms.
  if (delta < 1e-4) {
    return 2.0 * kPi * (1.0 / (4.0 * delta) - delta / 48.0 - delta * delta / 64.0);
  }
  const double core = std::log(2.0 / (2.0 - delta)) + 0.5 - 1.0 / (2.0 - delta);
  return 2.0 * kPi * core / (delta * delta);
}

double stiffness_coeff(double delta) {
  return kPi * (2.0 - delta) / delta;
}

double l2_value(double delta, double A, double B) {
  const double d = delta;
  const double c_aa = d * d * d / 3.0 - d * d * d * d / 4.0;
  const double c_ab = d * d * d / 6.0 - d * d * d * d / 12.0;
  const double c_bb = d * d * d / 3.0 - d * d * d * d / 12.0;
  return 2.0 * kPi / (d * d) * (A * A * c_aa + 2.0 * A * B * c_ab + B * B * c_bb);
}

}  // namespace tail

Eigen::VectorXd disc_weights(const RadialGrid& g) {
  const Eigen::Index n = g.size();
  Eigen::VectorXd w(n);
  const auto& r = g.nodes;
  w(0) = kPi * r(0) * (r(1) - r(0)) + kPi * g.r_min * g.r_min;
  for (Eigen::Index i = 1; i + 1 < n; ++i)
    w(i) = kPi * r(i) * (r(i + 1) - r(i - 1));
  w(n - 1) = kPi * r(n - 1) * (r(n - 1) - r(n - 2));
  return w;
}

double integrate_disc(const RadialFunction& f) {
  if (!f.grid) throw std::invalid_argument("integrate_disc: function has no grid");
  if (!all_finite(f)) throw std::runtime_error("integrate_disc: non-finite nodal value");
  const auto& g = *f.grid;
  const auto& r = g.nodes;
  const auto& v = f.values;
  const Eigen::Index n = g.size();
  Kahan acc;
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    acc.add(kPi * (v(i) * r(i) + v(i + 1) * r(i + 1)) * (r(i + 1) - r(i)));
  acc.add(kPi * g.r_min * g.r_min * v(0));
  acc.add(tail::integral_value(g.delta_b, v(n - 1), f.boundary_value));
  return acc.sum;
}

double l2_norm_sq(const RadialFunction& u) {
  if (!u.grid) throw std::invalid_argument("l2_norm_sq: function has no grid");
  if (!all_finite(u)) throw std::runtime_error("l2_norm_sq: non-finite nodal value");
  const auto& g = *u.grid;
  const auto& r = g.nodes;
  const auto& v = u.values;
  const Eigen::Index n = g.size();
  Kahan acc;
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    acc.add(kPi * (v(i) * v(i) * r(i) + v(i + 1) * v(i + 1) * r(i + 1)) * (r(i + 1) - r(i)));
  acc.add(kPi * g.r_min * g.r_min * v(0) * v(0));
  acc.add(tail::l2_value(g.delta_b, v(n - 1), u.boundary_value));
  return acc.sum;
}

double hardy_integral(const RadialFunction& u) {
  if (!u.grid) throw std::invalid_argument("hardy_integral: function has no grid");
  if (!all_finite(u)) throw std::runtime_error("hardy_integral: non-finite nodal value");
  const auto& g = *u.grid;
  if (!(g.delta_b > 0.0))
    throw std::domain_error("hardy_integral: boundary cutoff delta_b must be positive");
  if (u.boundary_value != 0.0)
    throw std::domain_error("hardy_integral: infinite unless the boundary value is 0");
  const auto& r = g.nodes;
  const auto& v = u.values;
  const Eigen::Index n = g.size();
  auto V = [](double rr) {
    const double d = 1.0 - rr * rr;
    return 1.0 / (d * d);
  };
  Kahan acc;
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    acc.add(kPi *
            (v(i) * v(i) * V(r(i)) * r(i) + v(i + 1) * v(i + 1) * V(r(i + 1)) * r(i + 1)) *
            (r(i + 1) - r(i)));
  acc.add(kPi * g.r_min * g.r_min * v(0) * v(0) * V(r(0)));
  acc.add(tail::hardy_coeff(g.delta_b) * v(n - 1) * v(n - 1));
  return acc.sum;
}

double dirichlet_energy(const RadialFunction& u) {
  if (!u.grid) throw std::invalid_argument("dirichlet_energy: function has no grid");
  if (!all_finite(u)) throw std::runtime_error("dirichlet_energy: non-finite nodal value");
  const auto& r = u.grid->nodes;
  const auto& v = u.values;
  const Eigen::Index n = r.size();
  Kahan acc;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double h = r(i + 1) - r(i);
    const double du = v(i + 1) - v(i);
    acc.add(kPi * (r(i) + r(i + 1)) * du * du / h);
  }
  return acc.sum;
}

RadialFunction derivative(const RadialFunction& u) {
  if (!u.grid) throw std::invalid_argument("derivative: function has no grid");
  const auto& r = u.grid->nodes;
  const auto& v = u.values;
  const Eigen::Index n = r.size();
  RadialFunction out;
  out.grid = u.grid;
  out.values.resize(n);
  out.values(0) = lagrange3_derivative(r(0), r(1), r(2), v(0), v(1), v(2), r(0));
  for (Eigen::Index i = 1; i + 1 < n; ++i)
    out.values(i) =
        lagrange3_derivative(r(i - 1), r(i), r(i + 1), v(i - 1), v(i), v(i + 1), r(i));
  out.values(n - 1) = lagrange3_derivative(r(n - 3), r(n - 2), r(n - 1), v(n - 3), v(n - 2),
                                           v(n - 1), r(n - 1));
  out.boundary_value = out.values(n - 1);
  return out;
}

double integrate_radial(const Eigen::VectorXd& s, const Eigen::VectorXd& f) {
  if (s.size() != f.size() || s.size() < 2)
    throw std::invalid_argument("integrate_radial: mismatched or too-short node set");
  Kahan acc;
  for (Eigen::Index i = 0; i + 1 < s.size(); ++i)
    acc.add(kPi * (f(i) * s(i) + f(i + 1) * s(i + 1)) * (s(i + 1) - s(i)));
  return acc.sum;
}

}  // namespace htm
