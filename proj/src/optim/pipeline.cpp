#include "silcal/optim/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "silcal/common/errors.hpp"
#include "silcal/imgproc/canny.hpp"
#include "silcal/imgproc/hough.hpp"
#include "silcal/optim/adam.hpp"

#if SILCAL_HAVE_OPENMP
#include <omp.h>
#endif

namespace silcal::optim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Decorrelates the refinement noise stream from the candidate sampler,
// which consumes config.seed directly.
constexpr std::uint64_t kRefineSeedMix = 0x9e3779b97f4a7c15ULL;

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw InvalidParameterError(std::string(what) + " must be positive");
}

// One candidate's coarse pass: plain Adam with the joint block of the
// gradient zeroed. Returns +inf loss (instead of throwing) when the
// iterates turn non-finite, so one bad seed cannot sink the ranking.
CoarseResult coarse_optimize(const SceneObjective& objective,
                             const hypothesis::PoseCandidate& candidate,
                             int index, const OptimConfig& config) {
  CoarseResult result;
  result.index = index;
  result.sample = candidate;

  PoseChart chart{candidate.transform.rotation};
  Eigen::VectorXd params =
      objective.pack(candidate.transform, objective.base_joints().q);
  AdamState adam = AdamState::init(params.size(), config.lr_coarse);
  result.trace.reserve(static_cast<std::size_t>(config.coarse_iters) + 1);

  try {
    Eigen::VectorXd grad;
    for (int it = 0; it < config.coarse_iters; ++it) {
      const double l =
          objective.evaluate_with_gradient(chart, params, &grad, false);
      result.trace.push_back(l);
      if (!std::isfinite(l))
        throw NonFiniteLossError("coarse loss is not finite", -1);
      grad.tail(grad.size() - 6).setZero();  // joints stay frozen here
      adam_step(adam, params, grad);
    }
    const double l = objective.evaluate(chart, params, false);
    result.trace.push_back(l);
    if (!std::isfinite(l))
      throw NonFiniteLossError("coarse loss is not finite", -1);
    result.loss = l;
  } catch (const NonFiniteLossError&) {
    result.loss = kInf;
  }
  result.pose = objective.unpack_pose(chart, params);
  return result;
}

}  // namespace

void OptimConfig::validate() const {
  if (candidate_count < 1)
    throw InvalidParameterError("candidate_count must be >= 1");
  if (coarse_iters < 1 || refine_iters < 1)
    throw InvalidParameterError("iteration counts must be >= 1");
  check_positive(lr_coarse, "lr_coarse");
  check_positive(lr_refine, "lr_refine");
  if (patience < 1) throw InvalidParameterError("patience must be >= 1");
  if (noise_rot < 0.0 || noise_trans < 0.0 || noise_joint < 0.0)
    throw InvalidParameterError("noise sigmas must be non-negative");
  if (block_cycle < 1) throw InvalidParameterError("block_cycle must be >= 1");
  if (top_k < 1) throw InvalidParameterError("top_k must be >= 1");
  if (threads < 0) throw InvalidParameterError("threads must be >= 0");
}

std::vector<CoarseResult> rank_candidates(
    const SceneObjective& objective,
    const std::vector<hypothesis::PoseCandidate>& candidates,
    const OptimConfig& config) {
  config.validate();
  if (candidates.empty())
    throw InvalidParameterError("ranking needs at least one candidate");

  const int n = static_cast<int>(candidates.size());
  std::vector<CoarseResult> results(candidates.size());

#if SILCAL_HAVE_OPENMP
  const int workers =
      config.threads > 0 ? config.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int i = 0; i < n; ++i)
    results[i] = coarse_optimize(objective, candidates[i], i, config);
#else
  for (int i = 0; i < n; ++i)
    results[i] = coarse_optimize(objective, candidates[i], i, config);
#endif

  // Input order is index order, so a stable sort on loss alone realizes
  // the (loss, index) ordering.
  std::stable_sort(results.begin(), results.end(),
                   [](const CoarseResult& a, const CoarseResult& b) {
                     return a.loss < b.loss;
                   });
  if (!std::isfinite(results.front().loss))
    throw NonFiniteLossError("all candidates produced non-finite loss", -1);
  return results;
}

RefineOutcome refine(const SceneObjective& objective,
                     const geom::RigidTransform& start_pose,
                     const OptimConfig& config) {
  config.validate();
  const PoseChart chart{start_pose.rotation};
  Eigen::VectorXd params =
      objective.pack(start_pose, objective.base_joints().q);
  const Eigen::Index joint_dim = params.size() - 6;

  // Block layout: [0,3) rotation, [3,6) translation, [6,..) joints. Each
  // block owns its Adam moments so the cycle does not cross-pollute them.
  const std::array<Eigen::Index, 3> block_off = {0, 3, 6};
  const std::array<Eigen::Index, 3> block_len = {3, 3, joint_dim};
  const std::array<double, 3> block_sigma = {config.noise_rot,
                                             config.noise_trans,
                                             config.noise_joint};
  std::array<AdamState, 3> adam;
  const auto fresh_moments = [&] {
    for (int b = 0; b < 3; ++b)
      adam[b] = AdamState::init(block_len[b], config.lr_refine);
  };
  fresh_moments();

  std::mt19937_64 rng(config.seed ^ kRefineSeedMix);
  std::normal_distribution<double> unit(0.0, 1.0);

  RefineOutcome out;
  out.trace.reserve(static_cast<std::size_t>(config.refine_iters) + 1);
  Eigen::VectorXd best_params = params;
  double best_loss = kInf;
  int since_improve = 0;
  double kick_scale = 1.0;

  Eigen::VectorXd grad;
  for (int it = 0; it < config.refine_iters; ++it) {
    const double l = objective.evaluate_with_gradient(chart, params, &grad,
                                                      /*parallel=*/true);
    if (!std::isfinite(l))
      throw NonFiniteLossError("refine loss is not finite", -1);
    if (l < best_loss) {
      best_loss = l;
      best_params = params;
      since_improve = 0;
    } else {
      ++since_improve;
    }
    out.trace.push_back(best_loss);

    const int block = (it / config.block_cycle) % 3;
    if (since_improve >= config.patience) {
      // Plateau: jump back to the best iterate, kick the active block
      // with zero-mean noise (sigma halved at every trigger), restart
      // the moment estimates.
      ++out.perturbation_count;
      params = best_params;
      for (Eigen::Index k = 0; k < block_len[block]; ++k)
        params[block_off[block] + k] +=
            kick_scale * block_sigma[block] * unit(rng);
      kick_scale *= 0.5;
      fresh_moments();
      since_improve = 0;
      continue;  // the gradient belongs to the pre-jump iterate
    }
    if (block_len[block] == 0) continue;  // no optimizable joints
    Eigen::VectorXd p = params.segment(block_off[block], block_len[block]);
    Eigen::VectorXd g = grad.segment(block_off[block], block_len[block]);
    adam_step(adam[block], p, g);
    params.segment(block_off[block], block_len[block]) = p;
  }
  const double l = objective.evaluate(chart, params, /*parallel=*/true);
  if (std::isfinite(l) && l < best_loss) {
    best_loss = l;
    best_params = params;
  }
  out.trace.push_back(best_loss);

  out.loss = best_loss;
  out.pose = objective.unpack_pose(chart, best_params);
  out.joints = objective.unpack_joints(best_params);
  out.breakdown =
      objective.evaluate_breakdown(chart, best_params, /*parallel=*/true);
  return out;
}

CalibrationResult calibrate(
    const BinaryMask& mask, const geom::JointState& joints,
    const geom::RobotModel& model, const geom::CameraIntrinsics& camera,
    const loss::LossWeights& weights, const OptimConfig& config,
    const render::RenderSettings& settings,
    const std::optional<loss::KeypointPair>& keypoints,
    const hypothesis::HypothesisSpace& space_in) {
  config.validate();

  bool any = false;
  for (std::size_t i = 0; i < mask.size() && !any; ++i)
    any = mask.data()[i] != 0;
  if (!any) throw EmptyMaskError("mask has no foreground pixels");

  SceneRefs refs;
  refs.mask = mask;
  refs.dist = imgproc::distance_field(mask, weights.gamma_decay);
  refs.keypoints = keypoints;
  bool hough_failed = false;
  try {
    refs.lines = imgproc::hough_two_lines(imgproc::canny_edges(mask));
  } catch (const HoughError&) {
    hough_failed = true;  // carry on without the line term
  }

  const SceneObjective objective(model, camera, joints, refs, weights,
                                 settings);

  hypothesis::HypothesisSpace space = space_in;
  space.sample_count = config.candidate_count;
  const auto candidates = hypothesis::sample_candidates(space, config.seed);
  auto ranked = rank_candidates(objective, candidates, config);
  const RefineOutcome outcome = refine(objective, ranked.front().pose, config);

  CalibrationResult result;
  result.camera_from_robot = outcome.pose;
  result.joints = outcome.joints;
  result.final_loss = outcome.loss;
  result.final_breakdown = outcome.breakdown;
  result.coarse_trace = std::move(ranked.front().trace);
  result.refine_trace = outcome.trace;
  const int keep = std::min<int>(config.top_k, static_cast<int>(ranked.size()));
  result.top_candidates.reserve(keep);
  for (int i = 0; i < keep; ++i) {
    const CoarseResult& r = ranked[i];
    result.top_candidates.push_back({r.index, r.sample.alpha, r.sample.beta,
                                     r.sample.gamma, r.sample.d, r.loss});
  }
  result.hough_failed = hough_failed;
  result.perturbation_count = outcome.perturbation_count;
  result.config = config;
  return result;
}

}  // namespace silcal::optim
