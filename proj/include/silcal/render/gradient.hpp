#pragma once

#include <functional>

#include <Eigen/Core>

#include "silcal/render/rasterizer.hpp"

namespace silcal::render {

/// Central finite differences of a scalar loss over a small parameter
/// vector. `steps` gives the per-component step; a non-finite loss value
/// raises NonFiniteLossError carrying the parameter index being probed
/// (-1 for the base point).
Eigen::VectorXd loss_gradient(
    const Eigen::VectorXd& params,
    const std::function<double(const Eigen::VectorXd&)>& loss_eval,
    const Eigen::VectorXd& steps);

/// Gradient of sum_pixels dl_ds(i,j) * soft(i,j) with respect to the pose
/// chart and all joints, computed by walking the render graph backwards
/// (pixel -> projected corner -> camera vertex -> clip parents -> chain).
///
/// The pose chart is camera_from_robot = (exp([omega]x) * R0, t); `omega`
/// is the current chart coordinate (R0 is implied) and the returned layout
/// is [d/d_omega (3), d/d_t (3), d/d_q (joint_count)].
Eigen::VectorXd backward_render(const RenderGraph& graph,
                                const geom::RobotModel& model,
                                const geom::JointState& joints,
                                const Image<double>& dl_ds,
                                const geom::Vec3& omega,
                                bool parallel = true);

}  // namespace silcal::render
