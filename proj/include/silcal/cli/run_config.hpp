#pragma once

#include <string>
#include <vector>

#include "silcal/common/json_util.hpp"
#include "silcal/geom/camera.hpp"
#include "silcal/hypothesis/sampler.hpp"
#include "silcal/loss/pixel_losses.hpp"
#include "silcal/optim/pipeline.hpp"
#include "silcal/render/rasterizer.hpp"

namespace silcal::cli {

/// Everything a calibration run needs, assembled from an optional JSON
/// config file plus command-line flags (flags win). Pixel-term loss
/// weights are resolved against the camera resolution at run time unless
/// the config pins them, hence the raw `weight_overrides` fragment.
struct RunConfig {
  std::string mask_path;
  std::string model_path;
  std::string intrinsics_path;
  std::string out_dir = ".";
  std::string keypoints_path;  // optional tip annotations
  std::string truth_path;      // optional scene-record sidecar
  std::vector<double> joints;  // radians
  hypothesis::HypothesisSpace hypothesis;
  Json weight_overrides = Json::object();
  optim::OptimConfig optim;
  render::RenderSettings render_settings;
  bool overlay = false;
  bool dump_traces = false;
};

/// Load and validate a run config file: unknown keys are hard errors and
/// every referenced file must exist.
RunConfig load_run_config(const std::string& path);

/// Per-pixel lambdas default to 1/(width*height) of this camera; explicit
/// config values override.
loss::LossWeights resolve_weights(const RunConfig& config,
                                  const geom::CameraIntrinsics& cam);

/// Comma-separated radians list, e.g. "0.1,-0.2,0.05,0.4".
std::vector<double> parse_joint_list(const std::string& text);

/// Every key the run-config schema accepts (including nested section
/// keys), in documentation order. The calibrate --help footer and the
/// help-coverage test both derive from this list.
const std::vector<const char*>& run_config_keys();

}  // namespace silcal::cli
