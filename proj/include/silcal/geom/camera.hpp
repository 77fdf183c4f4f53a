#pragma once

#include "silcal/geom/rotation.hpp"

namespace silcal::geom {

/// Pinhole intrinsics, pixel units, no distortion.
struct CameraIntrinsics {
  double fx = 800.0;
  double fy = 800.0;
  double cu = 320.0;
  double cv = 240.0;
  int width = 640;
  int height = 480;

  void validate() const;
};

/// Projects a camera-frame point to pixel coordinates (u, v).
/// Throws BehindCameraError when p.z <= 0.
Vec2 project_point(const CameraIntrinsics& cam, const Vec3& p);

/// Ray direction (X, Y, 1) for a pixel, i.e. the normalized image coordinates.
Vec3 back_project(const CameraIntrinsics& cam, double u, double v);

}  // namespace silcal::geom
