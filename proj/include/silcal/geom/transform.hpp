#pragma once

#include <array>

#include "silcal/geom/rotation.hpp"

namespace silcal::geom {

/// SE(3) pose: x' = rotation * x + translation. Column vectors, active,
/// right-handed; camera looks down +z with image u right and v down.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

  RigidTransform compose(const RigidTransform& rhs) const {
    return {rotation * rhs.rotation, rotation * rhs.translation + translation};
  }

  RigidTransform inverse() const {
    Mat3 rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }

  /// 4x4 homogeneous matrix, row-major flattening.
  std::array<double, 16> matrix_row_major() const;
};

inline RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
  return a.compose(b);
}

/// Candidate pose from the 4-DoF orientation/depth parametrization:
/// rotation Ry(gamma) * Rx(alpha) * Rz(beta), translation (0, 0, d).
/// Throws InvalidParameterError for d <= 0.
RigidTransform look_at_transform(double alpha, double beta, double gamma, double d);

}  // namespace silcal::geom
