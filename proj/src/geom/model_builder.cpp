#include "silcal/geom/model_builder.hpp"

#include <cmath>
#include <numbers>

#include "silcal/common/errors.hpp"

namespace silcal::geom {

void PsmDimensions::validate() const {
  const double values[] = {shaft_radius,   shaft_length, wrist_width,
                           wrist_depth,    wrist_length, wrist_offset,
                           jaw_offset,     jaw_length,   jaw_base_width,
                           jaw_base_thickness};
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidParameterError("instrument dimensions must be positive");
  }
  if (shaft_sides < 3)
    throw InvalidParameterError("shaft needs at least 3 sides");
}

TriangleMesh make_shaft_mesh(double radius, double length, int sides) {
  if (radius <= 0.0 || length <= 0.0)
    throw InvalidParameterError("shaft radius and length must be positive");
  if (sides < 3) throw InvalidParameterError("shaft needs at least 3 sides");
  TriangleMesh mesh;
  const int n = sides;
  mesh.vertices.reserve(static_cast<std::size_t>(2 * n + 2));
  for (int k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n;
    const double x = radius * std::cos(theta);
    const double y = radius * std::sin(theta);
    mesh.vertices.emplace_back(x, y, -length);  // bottom ring: 0..n-1
    mesh.vertices.emplace_back(x, y, 0.0);      // top ring: n..2n-1 interleaved
  }
  // Interleaved layout: bottom_k = 2k, top_k = 2k + 1.
  const int c_bottom = 2 * n;
  const int c_top = 2 * n + 1;
  mesh.vertices.emplace_back(0.0, 0.0, -length);
  mesh.vertices.emplace_back(0.0, 0.0, 0.0);
  mesh.faces.reserve(static_cast<std::size_t>(4 * n));
  for (int k = 0; k < n; ++k) {
    const int k1 = (k + 1) % n;
    const int b0 = 2 * k, b1 = 2 * k1;
    const int t0 = 2 * k + 1, t1 = 2 * k1 + 1;
    mesh.faces.push_back({b0, b1, t1});  // side, outward radial normal
    mesh.faces.push_back({b0, t1, t0});
    mesh.faces.push_back({c_top, t0, t1});     // distal cap, +z
    mesh.faces.push_back({c_bottom, b1, b0});  // proximal cap, -z
  }
  return mesh;
}

TriangleMesh make_box_mesh(double size_x, double size_y, double size_z) {
  if (size_x <= 0.0 || size_y <= 0.0 || size_z <= 0.0)
    throw InvalidParameterError("box dimensions must be positive");
  const double hx = 0.5 * size_x, hy = 0.5 * size_y, hz = 0.5 * size_z;
  TriangleMesh mesh;
  mesh.vertices = {{-hx, -hy, -hz}, {hx, -hy, -hz}, {hx, hy, -hz},
                   {-hx, hy, -hz},  {-hx, -hy, hz}, {hx, -hy, hz},
                   {hx, hy, hz},    {-hx, hy, hz}};
  mesh.faces = {{0, 2, 1}, {0, 3, 2},   // -z
                {4, 5, 6}, {4, 6, 7},   // +z
                {0, 1, 5}, {0, 5, 4},   // -y
                {3, 7, 6}, {3, 6, 2},   // +y
                {0, 4, 7}, {0, 7, 3},   // -x
                {1, 2, 6}, {1, 6, 5}};  // +x
  return mesh;
}

TriangleMesh make_jaw_mesh(double length, double base_width,
                           double base_thickness) {
  if (length <= 0.0 || base_width <= 0.0 || base_thickness <= 0.0)
    throw InvalidParameterError("jaw dimensions must be positive");
  const double hw = 0.5 * base_width, ht = 0.5 * base_thickness;
  TriangleMesh mesh;
  mesh.vertices = {{-hw, -ht, 0.0},    {hw, -ht, 0.0}, {hw, ht, 0.0},
                   {-hw, ht, 0.0},     {-hw, 0.0, length},
                   {hw, 0.0, length}};
  mesh.faces = {{0, 3, 2}, {0, 2, 1},   // base, -z
                {2, 3, 4}, {2, 4, 5},   // upper slant, +y-ish
                {0, 1, 5}, {0, 5, 4},   // lower slant, -y-ish
                {1, 2, 5},              // +x end
                {0, 4, 3}};             // -x end
  return mesh;
}

RobotModel build_psm_model(const PsmDimensions& dims) {
  dims.validate();
  RobotModel model;
  model.joint_count = 4;
  model.joint_names = {"shaft_roll", "wrist_pitch", "wrist_yaw", "jaw"};
  model.shaft_radius = dims.shaft_radius;

  Link shaft;
  shaft.name = "shaft";
  shaft.parent = -1;
  shaft.axis = Vec3::UnitZ();
  shaft.joint_index = 0;
  shaft.mesh = make_shaft_mesh(dims.shaft_radius, dims.shaft_length,
                               dims.shaft_sides);
  model.links.push_back(std::move(shaft));

  Link wrist;
  wrist.name = "wrist";
  wrist.parent = 0;
  wrist.offset.translation = Vec3(0.0, 0.0, dims.wrist_offset);
  wrist.axis = Vec3::UnitX();
  wrist.joint_index = 1;
  wrist.mesh =
      make_box_mesh(dims.wrist_width, dims.wrist_depth, dims.wrist_length);
  model.links.push_back(std::move(wrist));

  Link jaw_mount;  // pure pivot, no geometry of its own
  jaw_mount.name = "jaw_mount";
  jaw_mount.parent = 1;
  jaw_mount.offset.translation = Vec3(0.0, 0.0, dims.jaw_offset);
  jaw_mount.axis = Vec3::UnitY();
  jaw_mount.joint_index = 2;
  model.links.push_back(std::move(jaw_mount));

  const TriangleMesh jaw_mesh =
      make_jaw_mesh(dims.jaw_length, dims.jaw_base_width,
                    dims.jaw_base_thickness);
  Link jaw_a;
  jaw_a.name = "jaw_a";
  jaw_a.parent = 2;
  jaw_a.axis = Vec3::UnitX();
  jaw_a.joint_index = 3;
  jaw_a.joint_scale = 0.5;
  jaw_a.mesh = jaw_mesh;
  model.links.push_back(std::move(jaw_a));

  Link jaw_b = model.links.back();
  jaw_b.name = "jaw_b";
  jaw_b.joint_scale = -0.5;
  model.links.push_back(std::move(jaw_b));

  model.tips[0] = TipKeypoint{3, Vec3(0.0, 0.0, dims.jaw_length)};
  model.tips[1] = TipKeypoint{4, Vec3(0.0, 0.0, dims.jaw_length)};
  model.validate();
  return model;
}

}  // namespace silcal::geom
