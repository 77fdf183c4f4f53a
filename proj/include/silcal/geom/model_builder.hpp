#pragma once

#include "silcal/geom/robot.hpp"

namespace silcal::geom {

/// Dimensions of the procedurally built instrument, metres. Defaults match
/// a large-needle-driver style tool: 8 mm shaft, short boxy wrist, 12 mm
/// gripper jaws that split a single jaw angle symmetrically.
struct PsmDimensions {
  double shaft_radius = 0.004;
  double shaft_length = 0.20;
  int shaft_sides = 32;
  double wrist_width = 0.009;       // x extent of the wrist box
  double wrist_depth = 0.009;       // y extent
  double wrist_length = 0.012;      // z extent
  double wrist_offset = 0.006;      // shaft tip -> wrist pitch pivot
  double jaw_offset = 0.006;        // wrist pivot -> jaw pivot
  double jaw_length = 0.012;
  double jaw_base_width = 0.003;
  double jaw_base_thickness = 0.0015;

  void validate() const;
};

/// Closed prism approximating the shaft cylinder: n-gon cross-section,
/// axis along local z, spanning z in [-length, 0] so the link origin sits
/// at the distal (wrist) end.
TriangleMesh make_shaft_mesh(double radius, double length, int sides);

/// Axis-aligned closed box centred at the origin.
TriangleMesh make_box_mesh(double size_x, double size_y, double size_z);

/// Tapered jaw wedge: rectangular base in the z=0 plane narrowing to an
/// edge at z=length (6 vertices, 8 faces). The tip keypoint sits at the
/// midpoint of that edge, local (0, 0, length).
TriangleMesh make_jaw_mesh(double length, double base_width,
                           double base_thickness);

/// Assemble the four-joint chain: shaft roll (z), wrist pitch (x), wrist
/// yaw (y), and a jaw angle shared by both gripper fingers with scales
/// +1/2 and -1/2. Joint order matches that list.
RobotModel build_psm_model(const PsmDimensions& dims = PsmDimensions{});

}  // namespace silcal::geom
