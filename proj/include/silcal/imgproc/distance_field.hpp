#pragma once

#include "silcal/common/image.hpp"

namespace silcal::imgproc {

/// Euclidean distance to the reference silhouette, divided by the decay
/// factor. Zero exactly on mask pixels.
struct DistanceField {
  Image<double> values;
  double gamma_decay = 0.0;
};

/// Exact two-pass Euclidean distance transform (column then row lower
/// envelopes of squared distance). Throws EmptyMaskError when the mask has
/// no positive pixel. `parallel` toggles the threaded code path; serial and
/// threaded results are identical.
DistanceField distance_field(const BinaryMask& mask, double gamma_decay,
                             bool parallel = true);

/// 16-bit scaled dump for debugging: 0 .. max value mapped to 0 .. 65535.
Image<std::uint16_t> distance_field_to_png16(const DistanceField& field);

}  // namespace silcal::imgproc
