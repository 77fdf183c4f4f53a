#include "silcal/loss/total.hpp"

namespace silcal::loss {

LossBreakdown total_loss_breakdown(
    const SoftSilhouette& S, const BinaryMask& M,
    const imgproc::DistanceField& D,
    const std::optional<std::pair<PolarLine, PolarLine>>& ref_lines,
    const std::optional<std::pair<PolarLine, PolarLine>>& proj_lines,
    const std::optional<KeypointPair>& ref_kpts,
    const std::optional<KeypointPair>& proj_kpts, const LossWeights& w) {
  w.validate();
  LossBreakdown out;
  out.mse = mse_loss(S, M);
  out.dist = dist_loss(S, D);
  out.scale = scale_loss(S, M);
  out.render = w.lambda1 * out.mse + w.lambda2 * out.dist + w.lambda3 * out.scale;
  if (ref_lines && proj_lines)
    out.cylinder = cylinder_loss(*ref_lines, *proj_lines, w.gamma_rho);
  if (ref_kpts && proj_kpts) out.keypoint = keypoint_loss(*ref_kpts, *proj_kpts);
  out.total = out.render + w.lambda4 * out.cylinder + w.lambda5 * out.keypoint;
  return out;
}

double total_loss(
    const SoftSilhouette& S, const BinaryMask& M,
    const imgproc::DistanceField& D,
    const std::optional<std::pair<PolarLine, PolarLine>>& ref_lines,
    const std::optional<std::pair<PolarLine, PolarLine>>& proj_lines,
    const std::optional<KeypointPair>& ref_kpts,
    const std::optional<KeypointPair>& proj_kpts, const LossWeights& w) {
  return total_loss_breakdown(S, M, D, ref_lines, proj_lines, ref_kpts,
                              proj_kpts, w)
      .total;
}

}  // namespace silcal::loss
