#pragma once

#include <utility>

#include "silcal/imgproc/polar_line.hpp"

namespace silcal::loss {

using imgproc::PolarLine;

/// d(l1, l2) = min(|t1 - t2|, pi - |t1 - t2|) + gamma_rho * |r1 - r2|:
/// wrapped angular gap plus weighted rho gap. A pseudo-metric on (rho,
/// theta) tuples.
double line_difference(const PolarLine& l1, const PolarLine& l2,
                       double gamma_rho);

/// Component-wise mean line: theta averaged as a direction on the
/// half-circle (circular mean of the doubled angle), rho arithmetic.
PolarLine mean_polar_line(const PolarLine& l1, const PolarLine& l2);

/// Association-free two-line distance: best of the two pairings plus the
/// difference of the mean lines.
double cylinder_loss(const std::pair<PolarLine, PolarLine>& ref,
                     const std::pair<PolarLine, PolarLine>& proj,
                     double gamma_rho);

}  // namespace silcal::loss
