#include "htm/bubble.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace htm {

namespace {
constexpr double kPi = std::numbers::pi;
}

double bubble_value(double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("bubble_value: radius must be >= 0");
  return -std::log1p(kPi * s * s) / (4.0 * kPi);
}

double bubble_mass(double R) {
  return 1.0 - 1.0 / (1.0 + kPi * R * R);
}

double bubble_dirichlet_energy(double R) {
  if (!(R >= 0.0)) throw std::invalid_argument("bubble_dirichlet_energy: radius must be >= 0");
  const double t = kPi * R * R;
  return (std::log1p(t) + 1.0 / (1.0 + t) - 1.0) / (4.0 * kPi);
}

double r_eps(double lambda, double c, double eps) {
  if (!(lambda > 0.0) || !(c > 0.0))
    throw std::invalid_argument("r_eps: lambda and c must be positive");
  if (!(eps >= 0.0) || !(eps < 4.0 * kPi))
    throw std::invalid_argument("r_eps: eps must lie in [0, 4 pi)");
  return std::sqrt(lambda) / c * std::exp(-(2.0 * kPi - eps / 2.0) * c * c);
}

BlowupDiagnostics rescale_blowup(const RadialFunction& u, double c, double r_scale,
                                 double window_radius, int samples) {
  if (!u.grid) throw std::invalid_argument("rescale_blowup: function has no grid");
  if (!(c > 0.0) || !(r_scale > 0.0))
    throw std::invalid_argument("rescale_blowup: c and r_scale must be positive");
  if (samples < 2) throw std::invalid_argument("rescale_blowup: need at least 2 samples");
  if (r_scale * window_radius > u.grid->outer_radius())
    throw std::domain_error("rescale_blowup: window exceeds the grid domain");

  BlowupDiagnostics d;
  d.c_eps = c;
  d.window.resize(samples);
  d.phi_rescaled.resize(samples);
  d.psi_rescaled.resize(samples);
  d.phi_bubble.resize(samples);
  for (int j = 0; j < samples; ++j) {
    const double x = window_radius * static_cast<double>(j) / static_cast<double>(samples - 1);
    const double uv = eval(u, r_scale * x);
    d.window(j) = x;
    d.psi_rescaled(j) = uv / c;
    d.phi_rescaled(j) = c * (uv - c);
    d.phi_bubble(j) = bubble_value(x);
  }
  d.sup_deviation = (d.phi_rescaled - d.phi_bubble).cwiseAbs().maxCoeff();
  d.psi_deviation = (d.psi_rescaled.array() - 1.0).abs().maxCoeff();
  double worst = 0.0;
  for (int j = 0; j + 1 < samples; ++j) {
    const double dx = d.window(j + 1) - d.window(j);
    const double q_num = (d.phi_rescaled(j + 1) - d.phi_rescaled(j)) / dx;
    const double q_bub = (d.phi_bubble(j + 1) - d.phi_bubble(j)) / dx;
    worst = std::max(worst, std::abs(q_num - q_bub));
  }
  d.dphi_deviation = worst;
  return d;
}

double bubble_deviation(const BlowupDiagnostics& d) {
  if (d.phi_rescaled.size() == 0)
    throw std::invalid_argument("bubble_deviation: profiles not present");
  return (d.phi_rescaled - d.phi_bubble).cwiseAbs().maxCoeff();
}

}  // namespace htm
