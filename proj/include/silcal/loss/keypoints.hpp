#pragma once

#include <optional>
#include <string>

#include "silcal/geom/camera.hpp"
#include "silcal/geom/robot.hpp"

namespace silcal::loss {

/// Two gripper-tip image points plus their midpoint.
struct KeypointPair {
  geom::Vec2 a = geom::Vec2::Zero();
  geom::Vec2 b = geom::Vec2::Zero();
  geom::Vec2 mean = geom::Vec2::Zero();

  static KeypointPair from_points(const geom::Vec2& a, const geom::Vec2& b);
};

/// Model tip keypoints through kinematics and projection. Returns nullopt
/// when either tip sits behind the near plane: the keypoint term is
/// dropped for that frame instead of failing.
std::optional<KeypointPair> project_tip_keypoints(
    const geom::RobotModel& model, const geom::JointState& joints,
    const geom::RigidTransform& camera_from_robot,
    const geom::CameraIntrinsics& cam, double near_plane);

/// Association-free pair distance: best of the two matchings plus the
/// midpoint distance, Euclidean pixels.
double keypoint_loss(const KeypointPair& ref, const KeypointPair& proj);

/// Manual annotation file: plain text, one "u v" pair per line, two lines.
KeypointPair load_keypoint_annotations(const std::string& path);

}  // namespace silcal::loss
