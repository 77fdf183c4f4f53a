#pragma once

namespace silcal::imgproc {

/// Line in polar (Hesse) form: x*cos(theta) + y*sin(theta) = rho, with
/// x = column (u) and y = row (v) in pixels. Canonical form keeps theta in
/// [0, pi); rho carries the sign needed to reach lines on either side of
/// the origin (the pair (rho, theta) and (-rho, theta+pi) name one line).
struct PolarLine {
  double rho = 0.0;    // pixels, signed
  double theta = 0.0;  // radians in [0, pi)
};

/// Wrap theta into [0, pi), flipping the sign of rho per half-turn.
PolarLine normalize_polar_line(double rho, double theta);

}  // namespace silcal::imgproc
