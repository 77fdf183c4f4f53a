#pragma once

#include <Eigen/Core>

namespace silcal::geom {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

enum class Axis { X, Y, Z };

/// Right-handed active rotation about a coordinate axis.
Mat3 rotation_about_axis(Axis axis, double angle);

/// Rodrigues exponential: rotation by the axis-angle vector omega.
Mat3 rotation_exp(const Vec3& omega);

/// Right Jacobian of the rotation exponential (maps increments of omega to
/// local tangent increments; series expansion near zero).
Mat3 rotation_right_jacobian(const Vec3& omega);

/// Geodesic angle between two rotations, radians in [0, pi].
double rotation_angle_between(const Mat3& a, const Mat3& b);

}  // namespace silcal::geom
