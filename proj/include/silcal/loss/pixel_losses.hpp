#pragma once

#include "silcal/common/image.hpp"
#include "silcal/imgproc/distance_field.hpp"

namespace silcal::loss {

/// Scale factors for every loss term plus the two decay coefficients.
/// The pixel-term lambdas default to 1/(640*480) so image sums land on a
/// per-pixel scale commensurate with the geometric terms; rebuild them for
/// other resolutions with defaults_for().
struct LossWeights {
  double lambda1 = 1.0 / (640.0 * 480.0);  // MSE
  double lambda2 = 1.0 / (640.0 * 480.0);  // distance-field
  double lambda3 = 1.0 / (640.0 * 480.0);  // silhouette-area scale
  double lambda4 = 1.0;                    // cylinder edge lines
  double lambda5 = 0.01;                   // gripper-tip keypoints
  double gamma_decay = 20.0;               // distance-field decay, pixels
  double gamma_rho = 0.01;                 // rho weight in line distance

  static LossWeights defaults_for(int width, int height);
  void validate() const;
};

/// Sum over pixels of (S - M)^2 (a sum, not a mean).
double mse_loss(const SoftSilhouette& S, const BinaryMask& M);

/// Sum over pixels of S * D: penalizes silhouette mass far from the
/// reference, with gradients that reach across the whole image.
double dist_loss(const SoftSilhouette& S, const imgproc::DistanceField& D);

/// | sum(S) - sum(M) |: compares total silhouette area.
double scale_loss(const SoftSilhouette& S, const BinaryMask& M);

/// lambda1 * MSE + lambda2 * dist + lambda3 * scale.
double render_loss(const SoftSilhouette& S, const BinaryMask& M,
                   const imgproc::DistanceField& D, const LossWeights& w);

/// d(render_loss)/dS per pixel: 2*lambda1*(S-M) + lambda2*D +
/// lambda3*sign(sum S - sum M). Feed to the rasterizer backward pass.
Image<double> render_loss_gradient_image(const SoftSilhouette& S,
                                         const BinaryMask& M,
                                         const imgproc::DistanceField& D,
                                         const LossWeights& w);

}  // namespace silcal::loss
