#include "silcal/geom/robot.hpp"

#include <cmath>

#include "silcal/common/errors.hpp"
#include "silcal/geom/rotation.hpp"

namespace silcal::geom {

void RobotModel::validate() const {
  if (links.empty()) throw InvalidParameterError("robot model has no links");
  if (joint_count <= 0)
    throw InvalidParameterError("robot model needs at least one joint");
  for (std::size_t i = 0; i < links.size(); ++i) {
    const Link& link = links[i];
    if (link.parent >= static_cast<int>(i))
      throw InvalidParameterError("link '" + link.name +
                                  "' must appear after its parent");
    if (i == 0 && link.parent != -1)
      throw InvalidParameterError("first link must be the root");
    if (link.joint_index >= joint_count)
      throw InvalidParameterError("link '" + link.name +
                                  "' references joint " +
                                  std::to_string(link.joint_index) +
                                  " but joint_count is " +
                                  std::to_string(joint_count));
    const double axis_norm = link.axis.norm();
    if (!std::isfinite(axis_norm) || std::abs(axis_norm - 1.0) > 1e-9)
      throw InvalidParameterError("link '" + link.name +
                                  "' has a non-unit joint axis");
    if (!link.mesh.empty()) link.mesh.validate();
  }
  if (!joint_names.empty() &&
      joint_names.size() != static_cast<std::size_t>(joint_count))
    throw InvalidParameterError("joint_names size does not match joint_count");
  if (shaft_radius <= 0.0)
    throw InvalidParameterError("shaft_radius must be positive");
  for (const TipKeypoint& tip : tips) {
    if (tip.link < 0 || tip.link >= static_cast<int>(links.size()))
      throw InvalidParameterError("tip keypoint references missing link");
  }
}

std::size_t RobotModel::total_face_count() const {
  std::size_t n = 0;
  for (const Link& link : links) n += link.mesh.faces.size();
  return n;
}

JointState JointState::with_default_mask(const Eigen::VectorXd& values) {
  JointState js;
  js.q = values;
  js.optimizable.assign(static_cast<std::size_t>(values.size()), 0);
  const auto n = js.optimizable.size();
  for (std::size_t i = (n >= 3 ? n - 3 : 0); i < n; ++i) js.optimizable[i] = 1;
  return js;
}

std::vector<int> JointState::optimizable_indices() const {
  std::vector<int> idx;
  for (std::size_t i = 0; i < optimizable.size(); ++i)
    if (optimizable[i]) idx.push_back(static_cast<int>(i));
  return idx;
}

std::vector<RigidTransform> forward_kinematics(const RobotModel& model,
                                               const JointState& joints) {
  if (joints.q.size() != model.joint_count)
    throw InvalidParameterError(
        "joint vector has " + std::to_string(joints.q.size()) +
        " entries, model expects " + std::to_string(model.joint_count));
  std::vector<RigidTransform> poses(model.links.size());
  for (std::size_t i = 0; i < model.links.size(); ++i) {
    const Link& link = model.links[i];
    RigidTransform local = link.offset;
    if (link.joint_index >= 0) {
      const double angle = link.joint_scale * joints.q[link.joint_index];
      RigidTransform spin;
      spin.rotation = rotation_exp(link.axis * angle);
      local = local * spin;
    }
    poses[i] = (link.parent < 0) ? local : poses[link.parent] * local;
  }
  return poses;
}

}  // namespace silcal::geom
