#include "silcal/geom/transform.hpp"

#include <cmath>

#include "silcal/common/errors.hpp"

namespace silcal::geom {

std::array<double, 16> RigidTransform::matrix_row_major() const {
  std::array<double, 16> m{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m[4 * r + c] = rotation(r, c);
    m[4 * r + 3] = translation(r);
  }
  m[15] = 1.0;
  return m;
}

RigidTransform look_at_transform(double alpha, double beta, double gamma, double d) {
  if (!(d > 0.0) || !std::isfinite(d))
    throw InvalidParameterError("look_at_transform: distance d must be positive");
  RigidTransform t;
  t.rotation = rotation_about_axis(Axis::Y, gamma) *
               rotation_about_axis(Axis::X, alpha) *
               rotation_about_axis(Axis::Z, beta);
  t.translation = Vec3(0.0, 0.0, d);
  return t;
}

}  // namespace silcal::geom
