#pragma once

#include <utility>

#include "silcal/common/image.hpp"
#include "silcal/imgproc/polar_line.hpp"

namespace silcal::imgproc {

/// Extract the two highest-voted, mutually distinct lines from an edge map
/// with a 1 px x 1 degree accumulator and local-centroid sub-bin
/// refinement. Peaks closer than 5 px in rho AND 5 degrees in theta to the
/// first line are treated as the same physical edge and skipped. Throws
/// HoughError when fewer than two sufficiently strong peaks exist; callers
/// fall back to rendering-loss-only matching.
std::pair<PolarLine, PolarLine> hough_two_lines(const BinaryMask& edges,
                                                bool parallel = true);

}  // namespace silcal::imgproc
