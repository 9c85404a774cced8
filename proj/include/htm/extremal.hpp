#pragma once

#include "htm/hardy_forms.hpp"

#include <optional>
#include <vector>

namespace htm {

struct SolverOptions {
  double tol = 1e-8;          ///< stop when the weak residual drops below this
  int max_iter = 10000;
  double damping = 0.5;       ///< fixed-point step, halved when the residual grows
  bool certify = true;        ///< random feasible perturbations must not improve J
  int certify_samples = 50;
  double certify_scale = 1e-3;
  unsigned seed = 0x7a3e9u;
};

/// Converged maximizer of J(u) = int e^{gamma u^2} dx over ||u||_{1,alpha} <= 1.
struct ExtremalResult {
  RadialFunction u;
  double gamma = 0.0;
  double alpha = 0.0;
  double lambda_eps = 0.0;  ///< int u^2 e^{gamma u^2} dx
  double c_eps = 0.0;       ///< u(0) = max u
  double J = 0.0;           ///< int e^{gamma u^2} dx
  double norm_1alpha = 0.0;
  double el_residual = 0.0;
  int iterations = 0;
};

/// Grid for Euler-Lagrange solves: r_min = 1e-7, delta_b = 1e-6, grading
/// scaled with n. Milder cutoffs than default_grid keep the mass-dual
/// residual well above its roundoff floor while still resolving the blow-up
/// core scales of the subcritical sweeps.
GridPtr maximizer_grid(Eigen::Index n);

/// lambda = int u^2 e^{gamma u^2} dx. Zero iff u vanishes.
double lambda_of(const RadialFunction& u, double gamma);

/// Dual-norm residual of L_alpha u = (1/lambda) u e^{gamma u^2}, measured in
/// the norm induced by the lumped mass. lambda <= 0 is a parameter error.
double el_residual(const RadialFunction& u, double lambda, double gamma,
                   const QuadraticForms& forms);

/// Damped fixed-point solve of the Euler-Lagrange system with projection to
/// the constraint sphere. Two seeds are tried (concentrated and flat); the
/// run with larger J wins. gamma must lie in (0, 4 pi), alpha below lambda1.
ExtremalResult maximize_subcritical(double gamma, double alpha, const QuadraticForms& forms,
                                    const SolverOptions& opts = {});

/// ||min(u, beta c)||_{1,alpha}^2 for 0 < beta < 1, c > 0.
double truncation_energy(const RadialFunction& u, double beta, double c,
                         const QuadraticForms& forms);

/// ||u||_{1,alpha}^2 - 16 pi log int e^u dx.
double weak_form_gap(const RadialFunction& u, const QuadraticForms& forms);

struct ConcentrationRow {
  double gamma = 0.0;
  double eps = 0.0;
  double J = 0.0;
  double lambda_eps = 0.0;
  double c_eps = 0.0;
  double r_eps = 0.0;
  double energy_gap_rel = 0.0;  ///< |(J - pi) - lambda/c^2| / (J - pi)
  double dirac_value = 0.0;     ///< int testfn (c u / lambda) e^{gamma u^2} dx
  double dirac_gap = 0.0;       ///< |dirac_value - testfn(0)|
};

struct ConcentrationReport {
  std::vector<ConcentrationRow> rows;
  std::optional<bool> c_eps_increasing;    ///< present only for sweeps of >= 2 entries
  std::optional<bool> gap_decreasing;
  std::optional<bool> dirac_gap_decreasing;
};

/// Diagnostics across a sweep ordered by increasing gamma; testfn is the
/// smooth test function of the Dirac-mass functional.
ConcentrationReport concentration_report(const std::vector<ExtremalResult>& sweep,
                                         const RadialFunction& testfn);

}  // namespace htm
