#pragma once

#include "silcal/common/image.hpp"

namespace silcal::imgproc {

/// One-pixel boundary of the mask region via the full Canny pipeline
/// (Gaussian smooth, Sobel, non-maximum suppression, hysteresis at
/// 0.1/0.3 of the max gradient). Ties in the suppression step resolve
/// toward the brighter side, so on binary input the edge lands on the
/// innermost mask pixels; the morphological inner boundary is folded in to
/// keep corners and single-pixel features. Throws EmptyMaskError if the
/// mask has no positive pixel.
BinaryMask canny_edges(const BinaryMask& mask);

/// The same detector on an arbitrary grayscale image in [0, 1], without the
/// binary-specific boundary union.
BinaryMask canny_on_gray(const Image<double>& gray);

/// Mask pixels with a 4-neighbour off (or out-of-frame) pixel.
BinaryMask inner_boundary(const BinaryMask& mask);

}  // namespace silcal::imgproc
