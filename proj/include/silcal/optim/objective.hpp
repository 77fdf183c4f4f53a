#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "silcal/geom/robot.hpp"
#include "silcal/imgproc/distance_field.hpp"
#include "silcal/loss/total.hpp"
#include "silcal/render/rasterizer.hpp"

namespace silcal::optim {

/// Reference observations for one frame: the mask, its distance field,
/// and the optional geometric cues.
struct SceneRefs {
  BinaryMask mask;
  imgproc::DistanceField dist;
  std::optional<std::pair<loss::PolarLine, loss::PolarLine>> lines;
  std::optional<loss::KeypointPair> keypoints;
};

/// Local chart for pose parameters: rotation = exp([omega]x) * R0 with
/// omega the first three parameters, translation the next three (absolute,
/// so t0 is folded into the start value), then the optimizable joints in
/// ascending joint order (absolute radians).
struct PoseChart {
  geom::Mat3 R0 = geom::Mat3::Identity();
};

/// Composite objective for one scene. Evaluation is pure and re-entrant;
/// `parallel` picks the threaded render path (candidate ranking calls it
/// serially from many workers, refinement threads a single evaluation).
class SceneObjective {
 public:
  /// `joints` supplies the encoder prior: non-optimizable entries stay
  /// pinned to these values; optimizable ones seed the parameter vector.
  SceneObjective(const geom::RobotModel& model,
                 const geom::CameraIntrinsics& camera,
                 const geom::JointState& joints, const SceneRefs& refs,
                 const loss::LossWeights& weights,
                 const render::RenderSettings& settings);

  /// params = [omega(3), t(3), q_opt(k)] with k = optimizable joint count.
  /// Build the chart from the same pose (chart.R0 = pose.rotation), so the
  /// packed omega is zero.
  Eigen::VectorXd pack(const geom::RigidTransform& pose,
                       const Eigen::VectorXd& q) const;
  geom::RigidTransform unpack_pose(const PoseChart& chart,
                                   const Eigen::VectorXd& params) const;
  geom::JointState unpack_joints(const Eigen::VectorXd& params) const;

  double evaluate(const PoseChart& chart, const Eigen::VectorXd& params,
                  bool parallel) const;
  loss::LossBreakdown evaluate_breakdown(const PoseChart& chart,
                                         const Eigen::VectorXd& params,
                                         bool parallel) const;

  /// Loss and gradient: analytic backward pass through the rasterizer and
  /// pixel losses, central finite differences for the cheap geometric
  /// terms (no rendering inside the difference stencil).
  double evaluate_with_gradient(const PoseChart& chart,
                                const Eigen::VectorXd& params,
                                Eigen::VectorXd* grad, bool parallel) const;

  Eigen::Index param_count() const { return 6 + static_cast<Eigen::Index>(opt_joints_.size()); }
  const std::vector<int>& optimizable_joints() const { return opt_joints_; }
  const geom::JointState& base_joints() const { return base_joints_; }
  const geom::RobotModel& model() const { return model_; }
  const geom::CameraIntrinsics& camera() const { return camera_; }
  const SceneRefs& refs() const { return refs_; }
  const loss::LossWeights& weights() const { return weights_; }
  const render::RenderSettings& settings() const { return settings_; }

  /// Geometric terms only (lambda4 cylinder + lambda5 keypoints); public
  /// for the finite-difference path and for tests.
  double geometric_loss(const PoseChart& chart,
                        const Eigen::VectorXd& params) const;

 private:
  geom::RobotModel model_;
  geom::CameraIntrinsics camera_;
  SceneRefs refs_;
  loss::LossWeights weights_;
  render::RenderSettings settings_;
  geom::JointState base_joints_;
  std::vector<int> opt_joints_;
};

}  // namespace silcal::optim
