#include "silcal/loss/cylinder_edges.hpp"

#include <Eigen/Geometry>

#include <cmath>

#include "silcal/common/errors.hpp"

namespace silcal::loss {

using geom::Vec3;

void Cylinder::validate() const {
  if (std::abs(dir.norm() - 1.0) > 1e-12)
    throw InvalidParameterError("cylinder direction must be unit length");
  if (!(radius > 0.0))
    throw InvalidParameterError("cylinder radius must be positive");
}

Cylinder shaft_cylinder(const geom::RobotModel& model,
                        const geom::JointState& joints,
                        const geom::RigidTransform& camera_from_robot) {
  model.validate();
  const auto poses = geom::forward_kinematics(model, joints);
  const geom::RigidTransform shaft_cam = camera_from_robot * poses[0];
  Cylinder cyl;
  cyl.p0 = shaft_cam.translation;
  cyl.dir = shaft_cam.rotation.col(2);  // local z-axis is the shaft axis
  cyl.radius = model.shaft_radius;
  cyl.validate();
  return cyl;
}

PolarLine polar_from_normalized(double a, double b, double c) {
  const double norm = std::hypot(a, b);
  if (!(norm > 0.0))
    throw InvalidParameterError("line has a zero normal vector");
  return imgproc::normalize_polar_line(c / norm, std::atan2(b, a));
}

std::pair<PolarLine, PolarLine> project_cylinder_edges(
    const Cylinder& cyl, const geom::CameraIntrinsics& cam) {
  cyl.validate();
  cam.validate();
  const Vec3& p0 = cyl.p0;
  const Vec3& d = cyl.dir;
  const double along = p0.dot(d);
  const double ell2 = p0.squaredNorm() - along * along;
  const double disc = ell2 - cyl.radius * cyl.radius;
  if (!(disc > 0.0))
    throw CameraInsideCylinderError(
        "camera center lies inside or on the shaft cylinder (axis distance^2 " +
        std::to_string(ell2) + ", radius " + std::to_string(cyl.radius) + ")");

  const Vec3 m = p0 - along * d;       // camera->axis perpendicular (scaled)
  const Vec3 w = d.cross(p0);          // in-plane direction, |w|^2 = ell2
  const double root = std::sqrt(disc);

  auto to_line = [&cam](const Vec3& n) {
    // Plane n . X = 0 meets the image at A*u + B*v + C = 0 after the
    // pinhole substitution X ~ ((u-cu)/fx, (v-cv)/fy, 1).
    const double A = n.x() / cam.fx;
    const double B = n.y() / cam.fy;
    const double C = n.z() - n.x() * cam.cu / cam.fx - n.y() * cam.cv / cam.fy;
    return polar_from_normalized(A, B, -C);
  };

  return {to_line(cyl.radius * m + root * w),
          to_line(cyl.radius * m - root * w)};
}

}  // namespace silcal::loss
