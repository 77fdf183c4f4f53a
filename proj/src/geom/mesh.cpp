#include "silcal/geom/mesh.hpp"

#include <Eigen/Geometry>

#include "silcal/common/errors.hpp"

namespace silcal::geom {

void TriangleMesh::validate(bool reject_degenerate) const {
  const int n = static_cast<int>(vertices.size());
  for (const auto& f : faces) {
    for (int idx : f) {
      if (idx < 0 || idx >= n)
        throw InvalidParameterError("mesh: face index out of range");
    }
    if (reject_degenerate) {
      const Vec3 e1 = vertices[f[1]] - vertices[f[0]];
      const Vec3 e2 = vertices[f[2]] - vertices[f[0]];
      if (e1.cross(e2).norm() < 1e-16)
        throw InvalidParameterError("mesh: zero-area face");
    }
  }
}

TriangleMesh transform_mesh_to_camera(const TriangleMesh& mesh,
                                      const RigidTransform& link_pose,
                                      const RigidTransform& camera_from_robot) {
  const RigidTransform full = camera_from_robot * link_pose;
  TriangleMesh out;
  out.vertices.reserve(mesh.vertices.size());
  for (const auto& v : mesh.vertices) out.vertices.push_back(full.apply(v));
  out.faces = mesh.faces;
  return out;
}

}  // namespace silcal::geom
