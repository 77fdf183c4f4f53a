#include "silcal/optim/objective.hpp"

#include <cmath>

#include "silcal/common/errors.hpp"
#include "silcal/loss/cylinder_edges.hpp"
#include "silcal/loss/keypoints.hpp"
#include "silcal/render/gradient.hpp"

namespace silcal::optim {

namespace {

// Central-difference steps for the geometric terms. The tangent-line and
// tip-projection maps steepen sharply when the shaft comes close to the
// camera, so the steps sit far below that curvature scale while staying
// clear of double rounding on ~1e-2 loss values.
constexpr double kStepRot = 1e-6;    // radians
constexpr double kStepTrans = 1e-7;  // meters
constexpr double kStepJoint = 1e-6;  // radians

}  // namespace

SceneObjective::SceneObjective(const geom::RobotModel& model,
                               const geom::CameraIntrinsics& camera,
                               const geom::JointState& joints,
                               const SceneRefs& refs,
                               const loss::LossWeights& weights,
                               const render::RenderSettings& settings)
    : model_(model),
      camera_(camera),
      refs_(refs),
      weights_(weights),
      settings_(settings),
      base_joints_(joints) {
  model_.validate();
  camera_.validate();
  weights_.validate();
  settings_.validate();
  if (base_joints_.q.size() != model_.joint_count)
    throw InvalidParameterError("joint vector size does not match the model");
  require_same_shape(refs_.mask, camera_.height, camera_.width,
                     "objective mask");
  require_same_shape(refs_.dist.values, camera_.height, camera_.width,
                     "objective distance field");
  opt_joints_ = base_joints_.optimizable_indices();
}

Eigen::VectorXd SceneObjective::pack(const geom::RigidTransform& pose,
                                     const Eigen::VectorXd& q) const {
  if (q.size() != model_.joint_count)
    throw InvalidParameterError("joint vector size does not match the model");
  Eigen::VectorXd params = Eigen::VectorXd::Zero(param_count());
  params.segment<3>(3) = pose.translation;
  for (std::size_t k = 0; k < opt_joints_.size(); ++k)
    params[6 + static_cast<Eigen::Index>(k)] = q[opt_joints_[k]];
  return params;
}

geom::RigidTransform SceneObjective::unpack_pose(
    const PoseChart& chart, const Eigen::VectorXd& params) const {
  geom::RigidTransform pose;
  pose.rotation = geom::rotation_exp(params.head<3>()) * chart.R0;
  pose.translation = params.segment<3>(3);
  return pose;
}

geom::JointState SceneObjective::unpack_joints(
    const Eigen::VectorXd& params) const {
  geom::JointState joints = base_joints_;
  for (std::size_t k = 0; k < opt_joints_.size(); ++k)
    joints.q[opt_joints_[k]] = params[6 + static_cast<Eigen::Index>(k)];
  return joints;
}

double SceneObjective::geometric_loss(const PoseChart& chart,
                                      const Eigen::VectorXd& params) const {
  const geom::RigidTransform pose = unpack_pose(chart, params);
  const geom::JointState joints = unpack_joints(params);
  double out = 0.0;
  if (refs_.lines && weights_.lambda4 > 0.0) {
    try {
      const auto proj = loss::project_cylinder_edges(
          loss::shaft_cylinder(model_, joints, pose), camera_);
      out += weights_.lambda4 *
             loss::cylinder_loss(*refs_.lines, proj, weights_.gamma_rho);
    } catch (const CameraInsideCylinderError&) {
      // Degenerate viewpoint: skip the term for this evaluation and let
      // the pixel losses push the pose back out.
    }
  }
  if (refs_.keypoints && weights_.lambda5 > 0.0) {
    const auto proj = loss::project_tip_keypoints(model_, joints, pose,
                                                  camera_,
                                                  settings_.near_plane);
    if (proj)
      out += weights_.lambda5 * loss::keypoint_loss(*refs_.keypoints, *proj);
  }
  return out;
}

double SceneObjective::evaluate(const PoseChart& chart,
                                const Eigen::VectorXd& params,
                                bool parallel) const {
  const geom::RigidTransform pose = unpack_pose(chart, params);
  const geom::JointState joints = unpack_joints(params);
  const SoftSilhouette soft = render_scene(model_, joints, pose, camera_,
                                           settings_, parallel, nullptr);
  return loss::render_loss(soft, refs_.mask, refs_.dist, weights_) +
         geometric_loss(chart, params);
}

loss::LossBreakdown SceneObjective::evaluate_breakdown(
    const PoseChart& chart, const Eigen::VectorXd& params,
    bool parallel) const {
  const geom::RigidTransform pose = unpack_pose(chart, params);
  const geom::JointState joints = unpack_joints(params);
  const SoftSilhouette soft = render_scene(model_, joints, pose, camera_,
                                           settings_, parallel, nullptr);

  std::optional<std::pair<loss::PolarLine, loss::PolarLine>> proj_lines;
  if (refs_.lines) {
    try {
      proj_lines = loss::project_cylinder_edges(
          loss::shaft_cylinder(model_, joints, pose), camera_);
    } catch (const CameraInsideCylinderError&) {
    }
  }
  std::optional<loss::KeypointPair> proj_kpts;
  if (refs_.keypoints)
    proj_kpts = loss::project_tip_keypoints(model_, joints, pose, camera_,
                                            settings_.near_plane);
  return loss::total_loss_breakdown(soft, refs_.mask, refs_.dist, refs_.lines,
                                    proj_lines, refs_.keypoints, proj_kpts,
                                    weights_);
}

double SceneObjective::evaluate_with_gradient(const PoseChart& chart,
                                              const Eigen::VectorXd& params,
                                              Eigen::VectorXd* grad,
                                              bool parallel) const {
  const geom::RigidTransform pose = unpack_pose(chart, params);
  const geom::JointState joints = unpack_joints(params);

  render::RenderGraph graph;
  const SoftSilhouette soft = render_scene(model_, joints, pose, camera_,
                                           settings_, parallel, &graph);
  const Image<double> dl_ds =
      loss::render_loss_gradient_image(soft, refs_.mask, refs_.dist, weights_);
  const Eigen::VectorXd full = render::backward_render(
      graph, model_, joints, dl_ds, params.head<3>(), parallel);

  grad->resize(param_count());
  grad->head<6>() = full.head<6>();
  for (std::size_t k = 0; k < opt_joints_.size(); ++k)
    (*grad)[6 + static_cast<Eigen::Index>(k)] = full[6 + opt_joints_[k]];

  double geo = 0.0;
  const bool has_geo = (refs_.lines && weights_.lambda4 > 0.0) ||
                       (refs_.keypoints && weights_.lambda5 > 0.0);
  if (has_geo) {
    geo = geometric_loss(chart, params);
    Eigen::VectorXd steps(param_count());
    steps.head<3>().setConstant(kStepRot);
    steps.segment<3>(3).setConstant(kStepTrans);
    steps.tail(params.size() - 6).setConstant(kStepJoint);
    *grad += render::loss_gradient(
        params,
        [&](const Eigen::VectorXd& p) { return geometric_loss(chart, p); },
        steps);
  }
  return loss::render_loss(soft, refs_.mask, refs_.dist, weights_) + geo;
}

}  // namespace silcal::optim
