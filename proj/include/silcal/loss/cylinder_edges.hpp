#pragma once

#include <utility>

#include "silcal/geom/camera.hpp"
#include "silcal/geom/robot.hpp"
#include "silcal/imgproc/polar_line.hpp"

namespace silcal::loss {

using imgproc::PolarLine;

/// Infinite cylinder in camera coordinates: a point on the center line, a
/// unit direction, and the radius.
struct Cylinder {
  geom::Vec3 p0 = geom::Vec3::Zero();
  geom::Vec3 dir = geom::Vec3::UnitZ();
  double radius = 0.0;

  void validate() const;
};

/// The insertion-shaft cylinder (link 0) as seen from the camera: origin
/// and local z-axis pushed through kinematics and the camera transform.
Cylinder shaft_cylinder(const geom::RobotModel& model,
                        const geom::JointState& joints,
                        const geom::RigidTransform& camera_from_robot);

/// Image lines of the two planes through the camera center tangent to the
/// cylinder, in pixel polar form. With m = p0 - (p0.dir)dir the plane
/// normals are r*m +/- sqrt(|p0|^2 - (p0.dir)^2 - r^2) * (dir x p0); the
/// term under the root must be positive (camera outside the cylinder) or
/// CameraInsideCylinderError is thrown.
std::pair<PolarLine, PolarLine> project_cylinder_edges(
    const Cylinder& cyl, const geom::CameraIntrinsics& cam);

/// Polar form of the line a*u + b*v = c (the normalized standard form
/// a*u + b*v = 1 is the c = 1 case): rho = c/sqrt(a^2+b^2) sign-folded
/// into theta in [0, pi). Throws InvalidParameterError when (a, b) = 0.
PolarLine polar_from_normalized(double a, double b, double c = 1.0);

}  // namespace silcal::loss
