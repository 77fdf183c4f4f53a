#include "silcal/loss/polar_line.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace silcal::loss {

double line_difference(const PolarLine& l1, const PolarLine& l2,
                       double gamma_rho) {
  const double dt = std::abs(l1.theta - l2.theta);
  const double wrapped = std::min(dt, std::numbers::pi - dt);
  return wrapped + gamma_rho * std::abs(l1.rho - l2.rho);
}

PolarLine mean_polar_line(const PolarLine& l1, const PolarLine& l2) {
  const double c = std::cos(2.0 * l1.theta) + std::cos(2.0 * l2.theta);
  const double s = std::sin(2.0 * l1.theta) + std::sin(2.0 * l2.theta);
  double theta;
  if (std::abs(c) < 1e-12 && std::abs(s) < 1e-12) {
    // Perpendicular pair: the doubled-angle mean is undefined; fall back
    // to the arithmetic midpoint for a deterministic answer.
    theta = 0.5 * (l1.theta + l2.theta);
  } else {
    theta = 0.5 * std::atan2(s, c);
  }
  // Wrap theta alone: rho stays the arithmetic mean, so averaging a line
  // with itself returns that line unchanged.
  if (theta < 0.0) theta += std::numbers::pi;
  if (theta >= std::numbers::pi) theta -= std::numbers::pi;
  return PolarLine{0.5 * (l1.rho + l2.rho), theta};
}

double cylinder_loss(const std::pair<PolarLine, PolarLine>& ref,
                     const std::pair<PolarLine, PolarLine>& proj,
                     double gamma_rho) {
  const double direct = line_difference(ref.first, proj.first, gamma_rho) +
                        line_difference(ref.second, proj.second, gamma_rho);
  const double crossed = line_difference(ref.first, proj.second, gamma_rho) +
                         line_difference(ref.second, proj.first, gamma_rho);
  const double mean_term = line_difference(
      mean_polar_line(ref.first, ref.second),
      mean_polar_line(proj.first, proj.second), gamma_rho);
  return std::min(direct, crossed) + mean_term;
}

}  // namespace silcal::loss
