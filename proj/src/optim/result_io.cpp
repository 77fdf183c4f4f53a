#include "silcal/optim/result_io.hpp"

#include "silcal/geom/config_io.hpp"

namespace silcal::optim {

using geom::transform_from_json;
using geom::transform_to_json;

namespace {

Json breakdown_to_json(const loss::LossBreakdown& b) {
  return Json{{"mse", b.mse},           {"dist", b.dist},
              {"scale", b.scale},       {"render", b.render},
              {"cylinder", b.cylinder}, {"keypoint", b.keypoint},
              {"total", b.total}};
}

loss::LossBreakdown breakdown_from_json(const Json& j,
                                        const std::string& context) {
  check_allowed_keys(
      j, {"mse", "dist", "scale", "render", "cylinder", "keypoint", "total"},
      context);
  loss::LossBreakdown b;
  for (const char* key :
       {"mse", "dist", "scale", "render", "cylinder", "keypoint", "total"})
    require_key(j, key, context);
  b.mse = j.at("mse").get<double>();
  b.dist = j.at("dist").get<double>();
  b.scale = j.at("scale").get<double>();
  b.render = j.at("render").get<double>();
  b.cylinder = j.at("cylinder").get<double>();
  b.keypoint = j.at("keypoint").get<double>();
  b.total = j.at("total").get<double>();
  return b;
}

}  // namespace

Json optim_config_to_json(const OptimConfig& c) {
  return Json{{"candidate_count", c.candidate_count},
              {"coarse_iters", c.coarse_iters},
              {"lr_coarse", c.lr_coarse},
              {"refine_iters", c.refine_iters},
              {"lr_refine", c.lr_refine},
              {"patience", c.patience},
              {"noise_rot", c.noise_rot},
              {"noise_trans", c.noise_trans},
              {"noise_joint", c.noise_joint},
              {"block_cycle", c.block_cycle},
              {"top_k", c.top_k},
              {"seed", c.seed},
              {"threads", c.threads}};
}

OptimConfig optim_config_from_json(const Json& j, const std::string& context) {
  check_allowed_keys(j,
                     {"candidate_count", "coarse_iters", "lr_coarse",
                      "refine_iters", "lr_refine", "patience", "noise_rot",
                      "noise_trans", "noise_joint", "block_cycle", "top_k",
                      "seed", "threads"},
                     context);
  OptimConfig c;
  if (j.contains("candidate_count"))
    c.candidate_count = j.at("candidate_count").get<int>();
  if (j.contains("coarse_iters")) c.coarse_iters = j.at("coarse_iters").get<int>();
  if (j.contains("lr_coarse")) c.lr_coarse = j.at("lr_coarse").get<double>();
  if (j.contains("refine_iters")) c.refine_iters = j.at("refine_iters").get<int>();
  if (j.contains("lr_refine")) c.lr_refine = j.at("lr_refine").get<double>();
  if (j.contains("patience")) c.patience = j.at("patience").get<int>();
  if (j.contains("noise_rot")) c.noise_rot = j.at("noise_rot").get<double>();
  if (j.contains("noise_trans")) c.noise_trans = j.at("noise_trans").get<double>();
  if (j.contains("noise_joint")) c.noise_joint = j.at("noise_joint").get<double>();
  if (j.contains("block_cycle")) c.block_cycle = j.at("block_cycle").get<int>();
  if (j.contains("top_k")) c.top_k = j.at("top_k").get<int>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("threads")) c.threads = j.at("threads").get<int>();
  c.validate();
  return c;
}

Json calibration_result_to_json(const CalibrationResult& r) {
  Json cands = Json::array();
  for (const RankedCandidate& c : r.top_candidates)
    cands.push_back(Json{{"index", c.index},
                         {"alpha", c.alpha},
                         {"beta", c.beta},
                         {"gamma", c.gamma},
                         {"d", c.d},
                         {"loss", c.loss}});
  std::vector<double> joints(r.joints.q.data(),
                             r.joints.q.data() + r.joints.q.size());
  std::vector<int> mask(r.joints.optimizable.begin(),
                        r.joints.optimizable.end());
  // Warn downstream consumers when the search budget was a small fraction
  // of the defaults (smoke-test territory, not a trustworthy estimate).
  const bool low_effort = r.config.candidate_count < 50 ||
                          r.config.coarse_iters < 10 ||
                          r.config.refine_iters < 100;
  return Json{{"schema_version", 1},
              {"low_effort", low_effort},
              {"artifact", "calibration_result"},
              {"camera_from_robot", transform_to_json(r.camera_from_robot)},
              {"joints", joints},
              {"joints_optimizable", mask},
              {"final_loss", r.final_loss},
              {"breakdown", breakdown_to_json(r.final_breakdown)},
              {"coarse_trace", r.coarse_trace},
              {"refine_trace", r.refine_trace},
              {"top_candidates", cands},
              {"hough_failed", r.hough_failed},
              {"perturbation_count", r.perturbation_count},
              {"config", optim_config_to_json(r.config)}};
}

CalibrationResult calibration_result_from_json(const Json& j,
                                               const std::string& context) {
  // low_effort and truth_error are derived annotations: accepted, not
  // stored (low_effort is recomputed from the config echo on save).
  check_allowed_keys(j,
                     {"schema_version", "artifact", "camera_from_robot",
                      "joints", "joints_optimizable", "final_loss",
                      "breakdown", "coarse_trace", "refine_trace",
                      "top_candidates", "hough_failed", "perturbation_count",
                      "config", "low_effort", "truth_error"},
                     context);
  check_schema_version(j, 1, context);
  require_key(j, "artifact", context);
  if (j.at("artifact").get<std::string>() != "calibration_result")
    throw ConfigError(context + ": not a calibration result file");
  for (const char* key :
       {"camera_from_robot", "joints", "joints_optimizable", "final_loss",
        "breakdown", "coarse_trace", "refine_trace", "top_candidates",
        "hough_failed", "perturbation_count", "config"})
    require_key(j, key, context);

  CalibrationResult r;
  r.camera_from_robot =
      transform_from_json(j.at("camera_from_robot"), context);
  const auto joints = j.at("joints").get<std::vector<double>>();
  const auto mask = j.at("joints_optimizable").get<std::vector<int>>();
  if (mask.size() != joints.size())
    throw ConfigError(context + ": joints and joints_optimizable disagree");
  r.joints.q = Eigen::Map<const Eigen::VectorXd>(
      joints.data(), static_cast<Eigen::Index>(joints.size()));
  r.joints.optimizable.assign(mask.begin(), mask.end());
  r.final_loss = j.at("final_loss").get<double>();
  r.final_breakdown = breakdown_from_json(j.at("breakdown"), context);
  r.coarse_trace = j.at("coarse_trace").get<std::vector<double>>();
  r.refine_trace = j.at("refine_trace").get<std::vector<double>>();
  for (const Json& c : j.at("top_candidates")) {
    check_allowed_keys(c, {"index", "alpha", "beta", "gamma", "d", "loss"},
                       context);
    RankedCandidate rc;
    rc.index = c.at("index").get<int>();
    rc.alpha = c.at("alpha").get<double>();
    rc.beta = c.at("beta").get<double>();
    rc.gamma = c.at("gamma").get<double>();
    rc.d = c.at("d").get<double>();
    // dump() writes non-finite doubles as null; map null back to +inf
    // (a candidate whose coarse pass diverged).
    rc.loss = c.at("loss").is_null()
                  ? std::numeric_limits<double>::infinity()
                  : c.at("loss").get<double>();
    r.top_candidates.push_back(rc);
  }
  r.hough_failed = j.at("hough_failed").get<bool>();
  r.perturbation_count = j.at("perturbation_count").get<int>();
  r.config = optim_config_from_json(j.at("config"), context + ".config");
  return r;
}

void save_calibration_result(const std::string& path,
                             const CalibrationResult& result) {
  save_json_file(path, calibration_result_to_json(result));
}

CalibrationResult load_calibration_result(const std::string& path) {
  return calibration_result_from_json(load_json_file(path, "calibration result"),
                                      "calibration result");
}

}  // namespace silcal::optim
