#include "silcal/cli/run_config.hpp"

#include <cctype>
#include <filesystem>

#include "silcal/optim/result_io.hpp"

namespace silcal::cli {

namespace {

std::array<double, 2> range_from_json(const Json& j,
                                      const std::string& context) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError(context + ": expected a [min, max] pair");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) return;
  if (!std::filesystem::exists(path))
    throw ConfigError(std::string(what) + " file does not exist: " + path);
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  const Json j = load_json_file(path, "run config");
  const std::string context = "run config";
  check_schema_version(j, 1, context);
  check_allowed_keys(j,
                     {"schema_version", "mask", "model", "intrinsics", "out",
                      "keypoints", "truth", "joints", "hypothesis", "weights",
                      "optim", "render", "overlay", "dump_traces"},
                     context);

  RunConfig config;
  if (j.contains("mask")) config.mask_path = j.at("mask").get<std::string>();
  if (j.contains("model")) config.model_path = j.at("model").get<std::string>();
  if (j.contains("intrinsics"))
    config.intrinsics_path = j.at("intrinsics").get<std::string>();
  if (j.contains("out")) config.out_dir = j.at("out").get<std::string>();
  if (j.contains("keypoints"))
    config.keypoints_path = j.at("keypoints").get<std::string>();
  if (j.contains("truth")) config.truth_path = j.at("truth").get<std::string>();
  if (j.contains("joints"))
    config.joints = j.at("joints").get<std::vector<double>>();

  if (j.contains("hypothesis")) {
    const Json& h = j.at("hypothesis");
    check_allowed_keys(h,
                       {"alpha_range", "beta_range", "gamma_range", "d_range",
                        "min_axis_z"},
                       context + ".hypothesis");
    if (h.contains("alpha_range"))
      config.hypothesis.alpha_range =
          range_from_json(h.at("alpha_range"), context + ".alpha_range");
    if (h.contains("beta_range"))
      config.hypothesis.beta_range =
          range_from_json(h.at("beta_range"), context + ".beta_range");
    if (h.contains("gamma_range"))
      config.hypothesis.gamma_range =
          range_from_json(h.at("gamma_range"), context + ".gamma_range");
    if (h.contains("d_range"))
      config.hypothesis.d_range =
          range_from_json(h.at("d_range"), context + ".d_range");
    if (h.contains("min_axis_z"))
      config.hypothesis.min_axis_z = h.at("min_axis_z").get<double>();
    config.hypothesis.validate();
  }

  if (j.contains("weights")) {
    const Json& w = j.at("weights");
    check_allowed_keys(w,
                       {"lambda1", "lambda2", "lambda3", "lambda4", "lambda5",
                        "gamma_decay", "gamma_rho"},
                       context + ".weights");
    config.weight_overrides = w;
  }

  if (j.contains("optim"))
    config.optim = optim::optim_config_from_json(j.at("optim"),
                                                 context + ".optim");

  if (j.contains("render")) {
    const Json& r = j.at("render");
    check_allowed_keys(r, {"sigma", "near_plane"}, context + ".render");
    if (r.contains("sigma"))
      config.render_settings.sigma = r.at("sigma").get<double>();
    if (r.contains("near_plane"))
      config.render_settings.near_plane = r.at("near_plane").get<double>();
    config.render_settings.validate();
  }

  if (j.contains("overlay")) config.overlay = j.at("overlay").get<bool>();
  if (j.contains("dump_traces"))
    config.dump_traces = j.at("dump_traces").get<bool>();

  require_file(config.mask_path, "mask");
  require_file(config.model_path, "model");
  require_file(config.intrinsics_path, "intrinsics");
  require_file(config.keypoints_path, "keypoints");
  require_file(config.truth_path, "truth");
  return config;
}

loss::LossWeights resolve_weights(const RunConfig& config,
                                  const geom::CameraIntrinsics& cam) {
  loss::LossWeights w = loss::LossWeights::defaults_for(cam.width, cam.height);
  const Json& o = config.weight_overrides;
  if (o.contains("lambda1")) w.lambda1 = o.at("lambda1").get<double>();
  if (o.contains("lambda2")) w.lambda2 = o.at("lambda2").get<double>();
  if (o.contains("lambda3")) w.lambda3 = o.at("lambda3").get<double>();
  if (o.contains("lambda4")) w.lambda4 = o.at("lambda4").get<double>();
  if (o.contains("lambda5")) w.lambda5 = o.at("lambda5").get<double>();
  if (o.contains("gamma_decay"))
    w.gamma_decay = o.at("gamma_decay").get<double>();
  if (o.contains("gamma_rho")) w.gamma_rho = o.at("gamma_rho").get<double>();
  w.validate();
  return w;
}

std::vector<double> parse_joint_list(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string token = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      throw ConfigError("joint list: \"" + token + "\" is not a number");
    }
    while (used < token.size() &&
           std::isspace(static_cast<unsigned char>(token[used])))
      ++used;
    if (used != token.size())
      throw ConfigError("joint list: \"" + token + "\" is not a number");
    values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

const std::vector<const char*>& run_config_keys() {
  static const std::vector<const char*> keys = {
      "mask",        "model",        "intrinsics",  "out",
      "keypoints",   "truth",        "joints",      "hypothesis",
      "alpha_range", "beta_range",   "gamma_range", "d_range",
      "min_axis_z",  "weights",      "lambda1",     "lambda2",
      "lambda3",     "lambda4",      "lambda5",     "gamma_decay",
      "gamma_rho",   "optim",        "candidate_count",
      "coarse_iters", "lr_coarse",   "refine_iters", "lr_refine",
      "patience",    "noise_rot",    "noise_trans", "noise_joint",
      "block_cycle", "top_k",        "seed",        "threads",
      "render",      "sigma",        "near_plane",  "overlay",
      "dump_traces"};
  return keys;
}

}  // namespace silcal::cli
