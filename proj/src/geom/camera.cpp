#include "silcal/geom/camera.hpp"

#include "silcal/common/errors.hpp"

namespace silcal::geom {

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0))
    throw ConfigError("intrinsics: focal lengths must be positive");
  if (width <= 0 || height <= 0)
    throw ConfigError("intrinsics: image size must be positive");
  if (cu < 0.0 || cu >= width || cv < 0.0 || cv >= height)
    throw ConfigError("intrinsics: principal point must lie inside the image");
}

Vec2 project_point(const CameraIntrinsics& cam, const Vec3& p) {
  if (!(p.z() > 0.0))
    throw BehindCameraError("project_point: point has non-positive depth");
  return {cam.fx * p.x() / p.z() + cam.cu, cam.fy * p.y() / p.z() + cam.cv};
}

Vec3 back_project(const CameraIntrinsics& cam, double u, double v) {
  return {(u - cam.cu) / cam.fx, (v - cam.cv) / cam.fy, 1.0};
}

}  // namespace silcal::geom
