#pragma once

#include <array>
#include <vector>

#include "silcal/geom/transform.hpp"

namespace silcal::geom {

/// Indexed triangle soup, meters. Faces are wound counter-clockwise when
/// viewed from outside the solid.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;

  bool empty() const { return faces.empty(); }

  /// Checks index bounds and (optionally) that no face has zero area.
  void validate(bool reject_degenerate = true) const;
};

/// Applies T * link_pose to every vertex; faces are untouched.
TriangleMesh transform_mesh_to_camera(const TriangleMesh& mesh,
                                      const RigidTransform& link_pose,
                                      const RigidTransform& camera_from_robot);

}  // namespace silcal::geom
