#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "silcal/hypothesis/sampler.hpp"
#include "silcal/optim/objective.hpp"

namespace silcal::optim {

/// Knobs of the two-stage search. Noise sigmas feed the plateau
/// perturbation (halved at each trigger); `block_cycle` is the coordinate-
/// descent window in iterations, cycling rotation -> translation -> joints.
struct OptimConfig {
  int candidate_count = 500;
  int coarse_iters = 100;
  double lr_coarse = 0.003;
  int refine_iters = 1000;
  double lr_refine = 0.0005;
  int patience = 50;
  double noise_rot = 0.008726646259971648;    // 0.5 deg, radians
  double noise_trans = 0.001;                 // meters
  double noise_joint = 0.008726646259971648;  // 0.5 deg, radians
  int block_cycle = 25;
  int top_k = 3;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: OpenMP default

  void validate() const;
};

/// One coarse-optimized candidate: the original sample (by index), the
/// pose after the coarse iterations, its loss, and the per-iteration loss
/// trace (coarse_iters + 1 entries, raw not best-so-far).
struct CoarseResult {
  int index = -1;
  hypothesis::PoseCandidate sample;
  geom::RigidTransform pose;
  double loss = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
};

/// Coarse-optimize every candidate independently (pose only, joints
/// frozen) and sort ascending by final loss, ties broken by candidate
/// index. Candidates whose evaluation turns non-finite rank last with an
/// infinite loss; if that happens to all of them, NonFiniteLossError.
/// Parallel across candidates, deterministic for any thread count.
std::vector<CoarseResult> rank_candidates(
    const SceneObjective& objective,
    const std::vector<hypothesis::PoseCandidate>& candidates,
    const OptimConfig& config);

struct RefineOutcome {
  geom::RigidTransform pose;
  geom::JointState joints;
  double loss = std::numeric_limits<double>::infinity();
  loss::LossBreakdown breakdown;
  std::vector<double> trace;  // best-so-far, non-increasing
  int perturbation_count = 0;
};

/// Joint pose + joint-angle refinement from the best coarse pose:
/// block-coordinate Adam with plateau restarts (jump back to the best
/// iterate, kick the active block with Gaussian noise, fresh moments).
/// The returned loss is never worse than the loss at `start_pose`.
RefineOutcome refine(const SceneObjective& objective,
                     const geom::RigidTransform& start_pose,
                     const OptimConfig& config);

/// Summary line for one ranked candidate (initial sample parameters, loss
/// after coarse optimization).
struct RankedCandidate {
  int index = -1;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double d = 0.0;
  double loss = std::numeric_limits<double>::infinity();
};

struct CalibrationResult {
  geom::RigidTransform camera_from_robot;
  geom::JointState joints;
  double final_loss = std::numeric_limits<double>::infinity();
  loss::LossBreakdown final_breakdown;
  std::vector<double> coarse_trace;  // of the winning candidate
  std::vector<double> refine_trace;  // best-so-far, non-increasing
  std::vector<RankedCandidate> top_candidates;
  bool hough_failed = false;
  int perturbation_count = 0;
  OptimConfig config;
};

/// End-to-end single-frame calibration: distance field and edge lines from
/// the mask (Hough failure downgrades to no line term and sets a flag),
/// stratified candidates, coarse ranking, refinement. Throws EmptyMaskError
/// on an all-zero mask. Optional reference keypoints switch on the tip
/// term. `space.sample_count` is ignored: config.candidate_count rules.
CalibrationResult calibrate(
    const BinaryMask& mask, const geom::JointState& joints,
    const geom::RobotModel& model, const geom::CameraIntrinsics& camera,
    const loss::LossWeights& weights, const OptimConfig& config,
    const render::RenderSettings& settings = {},
    const std::optional<loss::KeypointPair>& keypoints = std::nullopt,
    const hypothesis::HypothesisSpace& space = {});

}  // namespace silcal::optim
