#pragma once

#include "htm/hardy_forms.hpp"

namespace htm {

enum class GreenMode { hardy, pure_laplace };

/// Green function of L_alpha with unit Dirac mass at the origin, represented
/// through the regularized splitting w = G + (1/2 pi) log r.
struct GreenResult {
  RadialFunction G;             ///< Green profile, zero boundary value
  RadialFunction regular_part;  ///< w = G + (1/2 pi) log r = A0 + psi~
  double A0 = 0.0;
  double A0_error = 0.0;        ///< extrapolation-error estimate
  double alpha = 0.0;
  double flux_defect = 0.0;     ///< |2 pi r (-G') - 1| at r_min, log part exact
  GreenMode mode = GreenMode::hardy;
};

/// Solves L_alpha G = delta_0 radially: the log singularity is subtracted
/// exactly and the bounded remainder w solves
/// (stiffness - hardy - alpha mass) w = (hardy + alpha mass)(-log r / 2 pi)
/// with zero boundary data. In pure_laplace mode (potential and alpha both
/// off, alpha must be 0) G is the disc Green function of -Laplace.
GreenResult solve_green(double alpha, const GridPtr& grid, GreenMode mode = GreenMode::hardy);

/// A0 from the regular part: linear extrapolation of w to r = 0 across the
/// innermost decade.
double extract_A0(const GreenResult& res);

/// int_B G^2 dx; the inner tail [0, r_min] uses the closed form of
/// int (A0 - log r / 2 pi)^2 2 pi r dr.
double green_l2_sq(const GreenResult& res);

/// G(r) with the log part evaluated exactly and w interpolated linearly.
double eval_green(const GreenResult& res, double r);

/// Critical threshold pi + pi e^{1 + 4 pi A0}; strictly increasing in A0.
double upper_bound(double A0);

}  // namespace htm
