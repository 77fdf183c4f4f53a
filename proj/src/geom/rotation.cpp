#include "silcal/geom/rotation.hpp"

#include <cmath>

#include "silcal/common/errors.hpp"

namespace silcal::geom {

Mat3 rotation_about_axis(Axis axis, double angle) {
  if (!std::isfinite(angle))
    throw InvalidParameterError("rotation_about_axis: angle must be finite");
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 r = Mat3::Identity();
  switch (axis) {
    case Axis::X:
      r(1, 1) = c; r(1, 2) = -s;
      r(2, 1) = s; r(2, 2) = c;
      break;
    case Axis::Y:
      r(0, 0) = c;  r(0, 2) = s;
      r(2, 0) = -s; r(2, 2) = c;
      break;
    case Axis::Z:
      r(0, 0) = c; r(0, 1) = -s;
      r(1, 0) = s; r(1, 1) = c;
      break;
  }
  return r;
}

static Mat3 skew(const Vec3& w) {
  Mat3 m;
  m << 0, -w.z(), w.y(),
       w.z(), 0, -w.x(),
       -w.y(), w.x(), 0;
  return m;
}

Mat3 rotation_exp(const Vec3& omega) {
  const double theta = omega.norm();
  const Mat3 k = skew(omega);
  if (theta < 1e-9) {
    // second-order series keeps orthonormality to machine precision here
    return Mat3::Identity() + k + 0.5 * (k * k);
  }
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return Mat3::Identity() + a * k + b * (k * k);
}

Mat3 rotation_right_jacobian(const Vec3& omega) {
  const double theta = omega.norm();
  const Mat3 k = skew(omega);
  if (theta < 1e-6) {
    return Mat3::Identity() - 0.5 * k + (1.0 / 6.0) * (k * k);
  }
  const double t2 = theta * theta;
  const double a = (1.0 - std::cos(theta)) / t2;
  const double b = (theta - std::sin(theta)) / (t2 * theta);
  return Mat3::Identity() - a * k + b * (k * k);
}

double rotation_angle_between(const Mat3& a, const Mat3& b) {
  const double tr = (a.transpose() * b).trace();
  const double c = std::clamp((tr - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

}  // namespace silcal::geom
