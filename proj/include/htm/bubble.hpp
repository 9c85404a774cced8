#pragma once

#include "htm/radial_function.hpp"

namespace htm {

/// The entire solution of Delta phi = -e^{8 pi phi} with phi(0) = 0:
/// phi(s) = -log(1 + pi s^2) / (4 pi). Nonpositive, radially decreasing.
double bubble_value(double s);

/// int_{B_R} e^{8 pi phi} dx = 1 - 1/(1 + pi R^2), closed form.
double bubble_mass(double R);

/// int_{B_R} |grad phi|^2 dx = (1/4pi) [log(1 + pi R^2) + 1/(1 + pi R^2) - 1].
double bubble_dirichlet_energy(double R);

/// Blow-up radius sqrt(lambda) c^{-1} e^{-(2 pi - eps/2) c^2}.
double r_eps(double lambda, double c, double eps);

/// Rescaled blow-up profiles on a reference window [0, window_radius]:
/// psi(x) = u(r_scale x) / c and phi(x) = c (u(r_scale x) - c), sampled
/// uniformly, with deviations from the limiting bubble.
struct BlowupDiagnostics {
  double c_eps = 0.0;
  double lambda_eps = 0.0;
  double eps = 0.0;
  double r_eps = 0.0;
  Eigen::VectorXd window;        ///< sample abscissae x
  Eigen::VectorXd phi_rescaled;  ///< c (u(r_scale x) - c)
  Eigen::VectorXd psi_rescaled;  ///< u(r_scale x) / c
  Eigen::VectorXd phi_bubble;    ///< bubble_value(x)
  double sup_deviation = 0.0;    ///< max |phi_rescaled - phi_bubble|
  double psi_deviation = 0.0;    ///< max |psi_rescaled - 1|
  double dphi_deviation = 0.0;   ///< max difference-quotient gap (C^1 proxy)
};

BlowupDiagnostics rescale_blowup(const RadialFunction& u, double c, double r_scale,
                                 double window_radius = 5.0, int samples = 512);

/// Sup-norm deviation of the rescaled profile from the bubble.
double bubble_deviation(const BlowupDiagnostics& d);

}  // namespace htm
