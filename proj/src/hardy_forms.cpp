#include "htm/hardy_forms.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace htm {

namespace {

constexpr double kPi = std::numbers::pi;
// the dual-norm residual floors near 1e-10 * lambda on strongly graded grids
// (roundoff through the 1/delta_b boundary entries), so the target sits above
constexpr double kEigTolRel = 1e-8;
constexpr int kEigMaxIter = 2000;

struct GroundState {
  double lambda = 0.0;
  Eigen::VectorXd u;  // mass-normalized
  double residual = 0.0;
};

// Inverse power iteration on (A, M) with M diagonal; residuals in the
// energy-dual norm sqrt(r^T A^{-1} r).
GroundState ground_state(const SymTridiag& A, const TridiagFactor& F, const Eigen::VectorXd& mass) {
  const Eigen::Index n = A.size();
  GroundState gs;
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  x /= std::sqrt(x.dot(mass.cwiseProduct(x)));
  double res = 0.0;
  double res_best = std::numeric_limits<double>::infinity();
  int since_improvement = 0;
  for (int it = 0; it < kEigMaxIter; ++it) {
    Eigen::VectorXd y = solve(F, mass.cwiseProduct(x));
    const double m = std::sqrt(y.dot(mass.cwiseProduct(y)));
    y /= m;
    const double lambda = quad_form(A, y);
    Eigen::VectorXd r = matvec(A, y) - lambda * mass.cwiseProduct(y);
    const Eigen::VectorXd z = solve(F, r);
    res = std::sqrt(std::max(0.0, r.dot(z)));
    x = std::move(y);
    const bool on_floor =
        ++since_improvement >= 30 && res <= 1e-6 * std::abs(lambda);
    if (res <= kEigTolRel * std::abs(lambda) || on_floor) {
      gs.lambda = lambda;
      gs.u = std::move(x);
      gs.residual = res;
      return gs;
    }
    if (res < 0.99 * res_best) {
      res_best = res;
      since_improvement = 0;
    }
  }
  std::ostringstream msg;
  msg << "first_eigenvalue: inverse iteration did not converge in " << kEigMaxIter
      << " sweeps (last dual residual " << res << ")";
  throw std::runtime_error(msg.str());
}

void require_zero_boundary(const RadialFunction& u, const char* what) {
  if (u.boundary_value != 0.0) {
    std::ostringstream msg;
    msg << what << ": quadratic forms are defined on the zero-boundary space";
    throw std::domain_error(msg.str());
  }
}

struct HardyCell {
  double left, right;
};

// Exact cell integrals int phi_a(r) r/(1-r^2)^2 dr for the two P1 hats. The
// fully consistent (phi_a phi_b) form would make the boundary layer exactly
// critical and its pivots sink into round-off, so the potential is row-sum
// lumped: exact hat integrals on the diagonal. This under-shoots the nodal
// trapezoid rule (V is convex), keeping the discrete Hardy difference at
// least as positive while removing most of its boundary-layer quadrature
// error. Near r = 1 the closed forms cancel badly and a series in t = 1 - r
// takes over: (1-t)/(t^2 (2-t)^2) = (1/4t^2) sum d_k t^k, d_0 = 1, d_1 = 0,
// d_k = (1-k)/2^k.
HardyCell hardy_cell(double rL, double rR) {
  const double h = rR - rL;
  const double tL = 1.0 - rL, tR = 1.0 - rR;  // tR < tL
  if (tL < 0.02) {
    double D0 = h / (4.0 * tL * tR);
    double D1 = 0.25 * std::log1p(h / tR);
    double pL = tL * tL, pR = tR * tR;
    double pow2 = 4.0;
    for (int k = 2; k <= 16; ++k) {
      const double dk = (1.0 - k) / pow2;
      D0 += 0.25 * dk * (pL / tL - pR / tR) / (k - 1);
      D1 += 0.25 * dk * (pL - pR) / k;
      pL *= tL;
      pR *= tR;
      pow2 *= 2.0;
    }
    // phi_L = (t - tR)/h, phi_R = (tL - t)/h
    return {(D1 - tR * D0) / h, (tL * D0 - D1) / h};
  }
  auto M0 = [](double r) { return 1.0 / (2.0 * (1.0 - r * r)); };
  auto M1 = [](double r) {
    return r / (2.0 * (1.0 - r * r)) - 0.25 * std::log((1.0 + r) / (1.0 - r));
  };
  const double m0 = M0(rR) - M0(rL);
  const double m1 = M1(rR) - M1(rL);
  return {(rR * m0 - m1) / h, (m1 - rL * m0) / h};
}

}  // namespace

SymTridiag QuadraticForms::energy_matrix() const {
  SymTridiag A = stiffness;
  A.diag -= hardy.diag;
  A.off -= hardy.off;
  return A;
}

SymTridiag QuadraticForms::operator_matrix() const {
  SymTridiag A = energy_matrix();
  A.diag -= alpha * mass_diag;
  return A;
}

void QuadraticForms::require_alpha_admissible() const {
  if (!(alpha >= 0.0) || !(alpha < lambda1 - alpha_margin())) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " is outside [0, lambda1) with lambda1 = " << lambda1
        << "; the norm ||.||_{1,alpha} is not equivalent to ||.||_H";
    throw std::domain_error(msg.str());
  }
}

QuadraticForms assemble_forms(const GridPtr& grid, double alpha) {
  if (!grid) throw std::invalid_argument("assemble_forms: null grid");
  if (!(alpha >= 0.0)) throw std::invalid_argument("assemble_forms: alpha must be >= 0");
  const Eigen::Index n = grid->size();
  const auto& r = grid->nodes;

  QuadraticForms forms;
  forms.grid = grid;
  forms.alpha = alpha;

  forms.stiffness.diag = Eigen::VectorXd::Zero(n);
  forms.stiffness.off = Eigen::VectorXd::Zero(n - 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double k = kPi * (r(i) + r(i + 1)) / (r(i + 1) - r(i));
    forms.stiffness.diag(i) += k;
    forms.stiffness.diag(i + 1) += k;
    forms.stiffness.off(i) -= k;
  }
  forms.stiffness.diag(n - 1) += tail::stiffness_coeff(grid->delta_b);

  const Eigen::VectorXd w = disc_weights(*grid);
  forms.mass_diag = w;
  forms.mass_diag(n - 1) += tail::mass_coeff(grid->delta_b);

  forms.hardy.diag = Eigen::VectorXd::Zero(n);
  forms.hardy.off = Eigen::VectorXd::Zero(n - 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const HardyCell cell = hardy_cell(r(i), r(i + 1));
    forms.hardy.diag(i) += 2.0 * kPi * cell.left;
    forms.hardy.diag(i + 1) += 2.0 * kPi * cell.right;
  }
  {
    const double d0 = 1.0 - r(0) * r(0);
    forms.hardy.diag(0) += kPi * grid->r_min * grid->r_min / (d0 * d0);
  }
  forms.hardy.diag(n - 1) += tail::hardy_coeff(grid->delta_b);

  const SymTridiag A = forms.energy_matrix();
  const TridiagFactor F = ldlt(A);
  if (!F.positive_definite()) {
    std::ostringstream msg;
    msg << "assemble_forms: discrete Hardy form is not positive definite (min pivot "
        << F.min_pivot << "); refine the grid, especially near r = 1";
    throw std::runtime_error(msg.str());
  }
  forms.lambda1 = ground_state(A, F, forms.mass_diag).lambda;
  return forms;
}

double stiffness_value(const QuadraticForms& forms, const RadialFunction& u) {
  require_same_grid(u, *forms.grid);
  require_zero_boundary(u, "stiffness_value");
  return quad_form(forms.stiffness, u.values);
}

double hardy_value(const QuadraticForms& forms, const RadialFunction& u) {
  require_same_grid(u, *forms.grid);
  require_zero_boundary(u, "hardy_value");
  return quad_form(forms.hardy, u.values);
}

double mass_value(const QuadraticForms& forms, const RadialFunction& u) {
  require_same_grid(u, *forms.grid);
  require_zero_boundary(u, "mass_value");
  return forms.mass_diag.dot(u.values.cwiseProduct(u.values));
}

double norm_H_sq(const RadialFunction& u, const QuadraticForms& forms) {
  require_same_grid(u, *forms.grid);
  require_zero_boundary(u, "norm_H_sq");
  return quad_form(forms.energy_matrix(), u.values);
}

double norm_1alpha_sq(const RadialFunction& u, const QuadraticForms& forms) {
  forms.require_alpha_admissible();
  return norm_H_sq(u, forms) - forms.alpha * mass_value(forms, u);
}

Eigen::VectorXd weak_apply(const QuadraticForms& forms, const Eigen::VectorXd& u) {
  const Eigen::Index n = forms.grid->size();
  const auto& r = forms.grid->nodes;
  Eigen::VectorXd out = -matvec(forms.hardy, u) - forms.alpha * forms.mass_diag.cwiseProduct(u);
  double flux_prev = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double flux = 0.0;
    if (i + 1 < n) {
      const double k = kPi * (r(i) + r(i + 1)) / (r(i + 1) - r(i));
      flux = k * (u(i + 1) - u(i));
    }
    out(i) += flux_prev - flux;
    flux_prev = flux;
  }
  out(n - 1) += tail::stiffness_coeff(forms.grid->delta_b) * u(n - 1);
  return out;
}

RadialFunction apply_operator(const RadialFunction& u, const QuadraticForms& forms) {
  require_same_grid(u, *forms.grid);
  require_zero_boundary(u, "apply_operator");
  RadialFunction out;
  out.grid = u.grid;
  out.values = weak_apply(forms, u.values).cwiseQuotient(forms.mass_diag);
  out.boundary_value = 0.0;
  return out;
}

SpectralResult first_eigenvalue(const QuadraticForms& forms) {
  const SymTridiag A = forms.energy_matrix();
  const TridiagFactor F = ldlt(A);
  if (!F.positive_definite())
    throw std::runtime_error("first_eigenvalue: energy matrix lost positivity");
  GroundState gs = ground_state(A, F, forms.mass_diag);

  if (!(gs.lambda > 0.0)) throw std::runtime_error("first_eigenvalue: nonpositive eigenvalue");
  if (gs.u.minCoeff() * gs.u.maxCoeff() < 0.0)
    throw std::runtime_error("first_eigenvalue: ground state changes sign");
  if (gs.u.sum() < 0.0) gs.u = -gs.u;

  SpectralResult out;
  out.lambda1 = gs.lambda;
  out.rayleigh_residual = gs.residual;
  out.eigenfunction.grid = forms.grid;
  out.eigenfunction.values = std::move(gs.u);
  out.eigenfunction.boundary_value = 0.0;
  return out;
}

}  // namespace htm
