#pragma once

#include <optional>
#include <utility>

#include "silcal/loss/cylinder_edges.hpp"
#include "silcal/loss/keypoints.hpp"
#include "silcal/loss/pixel_losses.hpp"
#include "silcal/loss/polar_line.hpp"

namespace silcal::loss {

/// Individual terms of the composite objective. `total` is
/// lambda-weighted: render + lambda4 * cylinder + lambda5 * keypoint.
struct LossBreakdown {
  double mse = 0.0;
  double dist = 0.0;
  double scale = 0.0;
  double render = 0.0;
  double cylinder = 0.0;   // 0 when either line pair is absent
  double keypoint = 0.0;   // 0 when either keypoint pair is absent
  double total = 0.0;
};

/// Composite objective. Geometric inputs are optional: a missing reference
/// (Hough fallback, no annotations) or a missing projection (tips behind
/// the near plane) silently zeroes that term.
LossBreakdown total_loss_breakdown(
    const SoftSilhouette& S, const BinaryMask& M,
    const imgproc::DistanceField& D,
    const std::optional<std::pair<PolarLine, PolarLine>>& ref_lines,
    const std::optional<std::pair<PolarLine, PolarLine>>& proj_lines,
    const std::optional<KeypointPair>& ref_kpts,
    const std::optional<KeypointPair>& proj_kpts, const LossWeights& w);

double total_loss(
    const SoftSilhouette& S, const BinaryMask& M,
    const imgproc::DistanceField& D,
    const std::optional<std::pair<PolarLine, PolarLine>>& ref_lines,
    const std::optional<std::pair<PolarLine, PolarLine>>& proj_lines,
    const std::optional<KeypointPair>& ref_kpts,
    const std::optional<KeypointPair>& proj_kpts, const LossWeights& w);

}  // namespace silcal::loss
