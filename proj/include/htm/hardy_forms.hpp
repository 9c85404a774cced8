#pragma once

#include "htm/quadrature.hpp"
#include "htm/tridiag.hpp"

namespace htm {

/// Assembled quadratic forms on a radial grid. Functions carry an implicit
/// linear ramp to zero on [1 - delta_b, 1], so the forms act on the discrete
/// counterpart of the Hardy space: the last stiffness/Hardy/mass diagonal
/// entries contain the closed-form ramp contributions.
struct QuadraticForms {
  GridPtr grid;
  SymTridiag stiffness;        ///< piecewise-linear gradient form
  SymTridiag hardy;            ///< potential 1/(1-r^2)^2, exact on interpolants
  Eigen::VectorXd mass_diag;   ///< lumped mass
  double alpha = 0.0;
  double lambda1 = 0.0;        ///< first eigenvalue of (stiffness - hardy, mass)

  /// stiffness - hardy (the Hardy-space energy matrix).
  SymTridiag energy_matrix() const;
  /// stiffness - hardy - alpha * mass.
  SymTridiag operator_matrix() const;

  double alpha_margin() const { return 1e-8 * lambda1; }
  /// Throws std::domain_error unless 0 <= alpha < lambda1 - margin.
  void require_alpha_admissible() const;
};

/// Assembles the forms and certifies discrete Hardy positivity (all LDL^T
/// pivots of stiffness - hardy positive); computes lambda1 on the way.
/// Throws std::runtime_error with a refinement hint if positivity fails.
QuadraticForms assemble_forms(const GridPtr& grid, double alpha);

double stiffness_value(const QuadraticForms& forms, const RadialFunction& u);
double hardy_value(const QuadraticForms& forms, const RadialFunction& u);
double mass_value(const QuadraticForms& forms, const RadialFunction& u);

/// ||u||_H^2 = int |grad u|^2 - int u^2/(1-r^2)^2, through the forms.
double norm_H_sq(const RadialFunction& u, const QuadraticForms& forms);

/// ||u||_{1,alpha}^2 = ||u||_H^2 - alpha ||u||_2^2. Requires alpha < lambda1.
double norm_1alpha_sq(const RadialFunction& u, const QuadraticForms& forms);

/// Weak application of L_alpha = -Laplace - 1/(1-|x|^2)^2 - alpha:
/// <apply_operator(u), v>_{L2} = (stiffness - hardy - alpha mass)(u, v).
RadialFunction apply_operator(const RadialFunction& u, const QuadraticForms& forms);

/// (stiffness - hardy - alpha mass) u evaluated through cell-flux differences.
/// Equivalent to matvec(operator_matrix(), u) in exact arithmetic but avoids
/// the O(1/h) cancellation of the row sums on strongly graded meshes.
Eigen::VectorXd weak_apply(const QuadraticForms& forms, const Eigen::VectorXd& u);

struct SpectralResult {
  double lambda1 = 0.0;
  RadialFunction eigenfunction;  ///< L2-normalized, positive ground state
  double rayleigh_residual = 0.0;
};

/// Smallest eigenvalue of (stiffness - hardy) u = lambda * mass u by inverse
/// power iteration with the factored energy matrix. Residuals are measured in
/// the energy-dual norm. Throws std::runtime_error on non-convergence.
SpectralResult first_eigenvalue(const QuadraticForms& forms);

}  // namespace htm
