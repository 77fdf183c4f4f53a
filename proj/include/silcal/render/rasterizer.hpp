#pragma once

#include <array>
#include <vector>

#include "silcal/common/image.hpp"
#include "silcal/geom/camera.hpp"
#include "silcal/geom/robot.hpp"

namespace silcal::render {

using geom::Vec2;
using geom::Vec3;

/// Softness and clipping knobs for the silhouette rasterizer. `sigma` is
/// the boundary falloff width in pixels: the soft value crosses 0.5 on the
/// silhouette outline and completes ~84% of its swing one sigma away.
struct RenderSettings {
  double sigma = 1.5;        // pixels
  double near_plane = 0.005;  // meters

  void validate() const;
};

/// Where a clipped triangle corner came from: vertex `a` of the link mesh,
/// or the near-plane intersection between vertices `a` and `b` at
/// parameter `t` (b < 0 means an original, unclipped vertex).
struct ClipVertRef {
  int a = -1;
  int b = -1;
  double t = 0.0;
};

/// One screen-space triangle ready for rasterization.
struct PreparedFace {
  int link = -1;
  std::array<Vec3, 3> cam;   // camera-frame corners, z >= near plane
  std::array<Vec2, 3> px;    // projected corners, (u, v) pixels
  std::array<ClipVertRef, 3> ref;
  double area2 = 0.0;        // twice the signed projected area (< 0: front)
  double weight = 1.0;       // edge-on fade factor in [0, 1]
  int row0 = 0, row1 = -1, col0 = 0, col1 = -1;  // banded bbox, inclusive
};

/// Forward-pass record kept for the analytic backward pass.
struct RenderGraph {
  SoftSilhouette soft;                     // clamped to [0, 1]
  Image<double> raw;                       // pre-clamp per-pixel sums
  std::vector<PreparedFace> faces;
  std::vector<std::vector<Vec3>> cam_verts;    // per link, camera frame
  std::vector<std::vector<Vec3>> robot_verts;  // per link, robot base frame
  std::vector<geom::RigidTransform> link_poses;  // robot base frame
  geom::RigidTransform camera_from_robot;
  geom::CameraIntrinsics camera;
  RenderSettings settings;
};

/// Differentiable soft silhouette: per pixel, front-facing triangles
/// contribute a sigmoid of their signed 2D distance (clamped to a band of
/// 3.6 sigma and normalized so two faces sharing an edge sum to exactly 1),
/// and contributions add with a final clamp at 1. Faces are near-plane
/// clipped; back-facing and degenerate projections fade out smoothly via
/// `weight`. Throws InvalidParameterError when the model has no faces.
SoftSilhouette render_soft(const geom::RobotModel& model,
                           const geom::JointState& joints,
                           const geom::RigidTransform& camera_from_robot,
                           const geom::CameraIntrinsics& camera,
                           const RenderSettings& settings,
                           bool parallel = true);

/// Same as render_soft but optionally captures the intermediate state the
/// backward pass consumes.
SoftSilhouette render_scene(const geom::RobotModel& model,
                            const geom::JointState& joints,
                            const geom::RigidTransform& camera_from_robot,
                            const geom::CameraIntrinsics& camera,
                            const RenderSettings& settings, bool parallel,
                            RenderGraph* graph);

/// Exact binary coverage: pixel centers inside any near-clipped triangle
/// (front or back facing, boundary inclusive).
BinaryMask render_hard(const geom::RobotModel& model,
                       const geom::JointState& joints,
                       const geom::RigidTransform& camera_from_robot,
                       const geom::CameraIntrinsics& camera,
                       double near_plane = RenderSettings{}.near_plane,
                       bool parallel = true);

/// Signed 2D distance from point p to the triangle (a, b, c) wound
/// clockwise in image coordinates: negative inside, positive outside.
double signed_distance_to_triangle(const Vec2& p, const Vec2& a,
                                   const Vec2& b, const Vec2& c);

/// The banded, normalized sigmoid profile applied to that distance.
double soft_coverage_profile(double signed_distance, double sigma);

}  // namespace silcal::render
