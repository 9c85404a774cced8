#include "htm/hardy_forms.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace htm;
namespace {
constexpr double kPi = std::numbers::pi;

RadialFunction paraboloid(const GridPtr& g) {
  return sample(g, [](double r) { return 1.0 - r * r; }, 0.0);
}
}  // namespace

TEST_CASE("form values on 1 - r^2 match the closed forms") {
  auto g = default_grid(2000);
  auto forms = assemble_forms(g, 0.0);
  auto u = paraboloid(g);
  CHECK(stiffness_value(forms, u) == doctest::Approx(2.0 * kPi).epsilon(1e-3));
  CHECK(hardy_value(forms, u) == doctest::Approx(kPi).epsilon(1e-3));
  CHECK(mass_value(forms, u) == doctest::Approx(kPi / 3.0).epsilon(1e-3));
  CHECK(norm_H_sq(u, forms) == doctest::Approx(kPi).epsilon(3e-3));
}

TEST_CASE("forms agree with the radial_core integrals") {
  auto g = default_grid(1000);
  auto forms = assemble_forms(g, 0.0);
  std::mt19937 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RadialFunction u = zero_function(g);
  for (Eigen::Index i = 0; i < g->size(); ++i) u.values(i) = gauss(rng);

  CHECK(mass_value(forms, u) == doctest::Approx(l2_norm_sq(u)).epsilon(1e-12));
  CHECK(stiffness_value(forms, u) ==
        doctest::Approx(dirichlet_energy(u) +
                        tail::stiffness_coeff(g->delta_b) * u.values(g->size() - 1) *
                            u.values(g->size() - 1))
            .epsilon(1e-12));
  // exact hat integration vs nodal trapezoid: same integral to quadrature order
  auto smooth = sample(g, [](double r) { return (1.0 - r * r) * (2.0 - r); }, 0.0);
  CHECK(hardy_value(forms, smooth) == doctest::Approx(hardy_integral(smooth)).epsilon(1e-3));
}

TEST_CASE("each form is positive semidefinite") {
  auto g = default_grid(400);
  auto forms = assemble_forms(g, 0.0);
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    RadialFunction u = zero_function(g);
    for (Eigen::Index i = 0; i < g->size(); ++i) u.values(i) = gauss(rng);
    CHECK(stiffness_value(forms, u) >= 0.0);
    CHECK(hardy_value(forms, u) >= 0.0);
    CHECK(mass_value(forms, u) >= 0.0);
    CHECK(norm_H_sq(u, forms) > 0.0);  // discrete Hardy positivity
  }
}

TEST_CASE("norm identities and alpha validation") {
  auto g = default_grid(800);
  auto u = paraboloid(g);

  auto forms0 = assemble_forms(g, 0.0);
  CHECK(norm_1alpha_sq(u, forms0) == norm_H_sq(u, forms0));

  auto forms1 = assemble_forms(g, 1.0);
  CHECK(norm_1alpha_sq(u, forms1) == doctest::Approx(2.0 * kPi / 3.0).epsilon(2e-3));
  CHECK(norm_1alpha_sq(u, forms1) + 1.0 * mass_value(forms1, u) ==
        doctest::Approx(norm_H_sq(u, forms1)).epsilon(1e-13));
  CHECK(mass_value(forms1, u) == doctest::Approx(l2_norm_sq(u)).epsilon(1e-12));

  // alpha at or above lambda1 breaks norm equivalence
  auto bad = assemble_forms(g, forms0.lambda1 * 1.5);
  CHECK_THROWS_AS((void)norm_1alpha_sq(u, bad), std::domain_error);

  // approaching lambda1 from below drives the ground-state norm to zero
  SpectralResult spec = first_eigenvalue(forms0);
  auto near = assemble_forms(g, forms0.lambda1 * (1.0 - 1e-4));
  const double v = norm_1alpha_sq(spec.eigenfunction, near);
  CHECK(v > 0.0);
  CHECK(v <= 2e-4 * forms0.lambda1);
}

TEST_CASE("grid and boundary mismatches are refused") {
  auto g = default_grid(300);
  auto h = default_grid(301);
  auto forms = assemble_forms(g, 0.0);
  auto u = paraboloid(h);
  CHECK_THROWS_AS((void)norm_H_sq(u, forms), std::invalid_argument);

  RadialFunction w = paraboloid(g);
  w.boundary_value = 1.0;
  CHECK_THROWS_AS((void)norm_H_sq(w, forms), std::domain_error);
}

TEST_CASE("apply_operator is the weak operator") {
  auto g = build_grid(3000, 1e-4, 1e-4, 1.0);
  auto forms = assemble_forms(g, 0.25);

  SUBCASE("manufactured solution") {
    // u = (1-r^2)^2:  -Laplace u = 8 - 16 r^2,  V u = 1. Pointwise consistency
    // is second order away from the natural-boundary rows.
    auto u = sample(g, [](double r) { return (1.0 - r * r) * (1.0 - r * r); }, 0.0);
    auto f = apply_operator(u, forms);
    double worst = 0.0;
    for (Eigen::Index i = 3; i + 3 < g->size(); ++i) {
      const double r = g->node(i);
      const double d = 1.0 - r * r;
      const double exact = 8.0 - 16.0 * r * r - 1.0 - 0.25 * d * d;
      if (r > 0.05 && r < 0.9) worst = std::max(worst, std::abs(f.values(i) - exact));
    }
    CHECK(worst <= 2e-3);
  }

  SUBCASE("zero maps to zero") {
    auto z = apply_operator(zero_function(g), forms);
    CHECK(z.values.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("ground state maps to lambda1 u - alpha u") {
    SpectralResult spec = first_eigenvalue(forms);
    auto f = apply_operator(spec.eigenfunction, forms);
    const Eigen::VectorXd expect = (forms.lambda1 - forms.alpha) * spec.eigenfunction.values;
    const Eigen::VectorXd err = f.values - expect;
    const double m = std::sqrt(err.dot(forms.mass_diag.cwiseProduct(err)));
    CHECK(m <= 1e-5 * forms.lambda1);
  }
}

TEST_CASE("first eigenvalue: bounds, residual, ground state") {
  auto g = default_grid(2000);
  auto forms = assemble_forms(g, 0.0);
  SpectralResult spec = first_eigenvalue(forms);
  CHECK(spec.lambda1 > 0.0);
  CHECK(spec.lambda1 <= 3.0);  // Rayleigh quotient of 1 - r^2 is exactly 3
  CHECK(spec.lambda1 == doctest::Approx(forms.lambda1).epsilon(1e-12));
  CHECK(spec.rayleigh_residual <= 1e-6 * spec.lambda1);
  CHECK(spec.eigenfunction.values.minCoeff() > 0.0);
  CHECK(mass_value(forms, spec.eigenfunction) == doctest::Approx(1.0).epsilon(1e-12));

  // eigensolver consistency: Rayleigh quotient of the ground state
  auto u = spec.eigenfunction;
  const double rq = norm_H_sq(u, forms) / mass_value(forms, u);
  CHECK(rq == doctest::Approx(spec.lambda1).epsilon(1e-10));
}

TEST_CASE("rayleigh quotient minimality over random trials") {
  auto g = default_grid(600);
  auto forms = assemble_forms(g, 0.0);
  std::mt19937 rng(23);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    RadialFunction v = zero_function(g);
    for (Eigen::Index i = 0; i < g->size(); ++i) v.values(i) = gauss(rng);
    const double rq = norm_H_sq(v, forms) / mass_value(forms, v);
    CHECK(rq >= forms.lambda1 - 1e-10);
  }
}

TEST_CASE("inverse iteration matches a dense generalized eigensolve") {
  auto g = build_grid(120, 1e-3, 1e-3, 1.0);
  auto forms = assemble_forms(g, 0.0);
  const Eigen::MatrixXd A = to_dense(forms.energy_matrix());
  const Eigen::MatrixXd M = forms.mass_diag.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, M);
  CHECK(std::abs(forms.lambda1 - es.eigenvalues()(0)) <= 1e-8);
}

TEST_CASE("domain truncation monotonicity") {
  // enlarging the domain (smaller delta_b) can only lower lambda1
  auto wide = assemble_forms(graded_grid(2000, 1e-10, 1e-8, 2.5e-11), 0.0);
  auto narrow = assemble_forms(graded_grid(2000, 1e-10, 1e-6, 2.5e-9), 0.0);
  CHECK(narrow.lambda1 >= wide.lambda1 - 1e-6);
}

TEST_CASE("two-grid agreement of lambda1") {
  const double l1 = assemble_forms(default_grid(1000), 0.0).lambda1;
  const double l2 = assemble_forms(default_grid(2000), 0.0).lambda1;
  CHECK(std::abs(l1 - l2) / l2 <= 2e-4);
}
