#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "silcal/geom/mesh.hpp"

namespace silcal::geom {

/// One body of the serial chain. `joint_index` < 0 means the link is rigidly
/// attached; otherwise the link rotates about `axis` (local frame) by
/// joint_scale * q[joint_index]. Shared joint indices let one joint value
/// drive mirrored bodies (the two gripper jaws split the jaw angle +-1/2).
struct Link {
  std::string name;
  int parent = -1;
  RigidTransform offset;            // parent frame -> link home frame
  Vec3 axis = Vec3::UnitZ();
  int joint_index = -1;
  double joint_scale = 1.0;
  TriangleMesh mesh;                // may be empty for internal pivots
};

/// Keypoint pinned to a link, used for the gripper tips.
struct TipKeypoint {
  int link = -1;
  Vec3 local = Vec3::Zero();
};

/// Kinematic tree plus the geometry the renderer and the shaft constraint
/// need. Link 0 is the insertion shaft; its local z axis is the cylinder
/// axis and `shaft_radius` its radius.
struct RobotModel {
  std::vector<Link> links;
  int joint_count = 0;
  std::vector<std::string> joint_names;  // optional, size joint_count if set
  double shaft_radius = 0.0;
  std::array<TipKeypoint, 2> tips;

  void validate() const;
  std::size_t total_face_count() const;
};

/// Joint vector (radians) plus the per-entry optimizable flags. The default
/// mask marks exactly the last three entries (wrist pitch, wrist yaw, jaw).
struct JointState {
  Eigen::VectorXd q;
  std::vector<std::uint8_t> optimizable;

  static JointState with_default_mask(const Eigen::VectorXd& values);
  std::vector<int> optimizable_indices() const;
};

/// Per-link poses in the robot base frame. Link i's pose is
/// parent_pose * offset * Rot(axis, joint_scale * q[joint_index]).
/// Throws InvalidParameterError if the joint count does not match.
std::vector<RigidTransform> forward_kinematics(const RobotModel& model,
                                               const JointState& joints);

}  // namespace silcal::geom
