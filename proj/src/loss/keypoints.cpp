#include "silcal/loss/keypoints.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "silcal/common/errors.hpp"

namespace silcal::loss {

using geom::Vec2;
using geom::Vec3;

KeypointPair KeypointPair::from_points(const Vec2& a, const Vec2& b) {
  KeypointPair kp;
  kp.a = a;
  kp.b = b;
  kp.mean = 0.5 * (a + b);
  return kp;
}

std::optional<KeypointPair> project_tip_keypoints(
    const geom::RobotModel& model, const geom::JointState& joints,
    const geom::RigidTransform& camera_from_robot,
    const geom::CameraIntrinsics& cam, double near_plane) {
  const auto poses = geom::forward_kinematics(model, joints);
  Vec2 px[2];
  for (int i = 0; i < 2; ++i) {
    const geom::TipKeypoint& tip = model.tips[static_cast<std::size_t>(i)];
    const Vec3 p_cam = camera_from_robot.apply(
        poses[static_cast<std::size_t>(tip.link)].apply(tip.local));
    if (p_cam.z() < near_plane) return std::nullopt;
    px[i] = geom::project_point(cam, p_cam);
  }
  return KeypointPair::from_points(px[0], px[1]);
}

double keypoint_loss(const KeypointPair& ref, const KeypointPair& proj) {
  const double direct = (ref.a - proj.a).norm() + (ref.b - proj.b).norm();
  const double crossed = (ref.a - proj.b).norm() + (ref.b - proj.a).norm();
  return std::min(direct, crossed) + (ref.mean - proj.mean).norm();
}

KeypointPair load_keypoint_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open annotation file " + path);
  Vec2 pts[2];
  std::string line;
  int found = 0;
  while (found < 2 && std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double u, v;
    if (!(ls >> u >> v))
      throw ConfigError(path + ": expected \"u v\" on line, got \"" + line +
                        "\"");
    pts[found] = Vec2(u, v);
    ++found;
  }
  if (found != 2)
    throw ConfigError(path + ": expected two keypoint lines, found " +
                      std::to_string(found));
  return KeypointPair::from_points(pts[0], pts[1]);
}

}  // namespace silcal::loss
