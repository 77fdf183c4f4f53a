#include "silcal/cli/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "silcal/cli/run_config.hpp"
#include "silcal/geom/config_io.hpp"
#include "silcal/imgproc/canny.hpp"
#include "silcal/imgproc/distance_field.hpp"
#include "silcal/imgproc/hough.hpp"
#include "silcal/imgproc/mask_io.hpp"
#include "silcal/loss/cylinder_edges.hpp"
#include "silcal/optim/result_io.hpp"
#include "silcal/rcm/consistency.hpp"
#include "silcal/render/gradient.hpp"
#include "silcal/synth/scene_gen.hpp"

#if SILCAL_HAVE_OPENMP
#include <omp.h>
#endif

namespace silcal::cli {

namespace fs = std::filesystem;

namespace {

void set_threads(int threads) {
#if SILCAL_HAVE_OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

/// Maps the error hierarchy onto exit codes: bad input 1, computation 2.
template <typename F>
int guarded(F&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ImageIoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const EmptyMaskError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

geom::RobotModel model_or_default(const std::string& path) {
  return path.empty() ? geom::build_psm_model({})
                      : geom::load_robot_model(path);
}

geom::CameraIntrinsics intrinsics_or_default(const std::string& path) {
  return path.empty() ? geom::CameraIntrinsics{}
                      : geom::load_intrinsics(path);
}

geom::JointState joint_state_for(const geom::RobotModel& model,
                                 const std::vector<double>& values) {
  if (static_cast<int>(values.size()) != model.joint_count)
    throw ConfigError("expected " + std::to_string(model.joint_count) +
                      " joint values, got " + std::to_string(values.size()));
  return geom::JointState::with_default_mask(Eigen::Map<const Eigen::VectorXd>(
      values.data(), static_cast<Eigen::Index>(values.size())));
}

geom::Vec3 parse_vec3(const std::string& text, const char* what) {
  const std::vector<double> v = parse_joint_list(text);
  if (v.size() != 3)
    throw ConfigError(std::string(what) + ": expected \"x,y,z\"");
  return {v[0], v[1], v[2]};
}

// ---- overlay rendering ----

using Rgb = std::array<std::uint8_t, 3>;

void blend_add(Rgb& px, const Rgb& color, double scale) {
  for (int c = 0; c < 3; ++c) {
    const double v = px[c] + scale * color[c];
    px[c] = static_cast<std::uint8_t>(std::min(255.0, v));
  }
}

void draw_polar_line(imgproc::RgbImage& img, const loss::PolarLine& line,
                     const Rgb& color) {
  const double ct = std::cos(line.theta);
  const double st = std::sin(line.theta);
  if (std::abs(st) >= std::abs(ct)) {
    for (int u = 0; u < img.width(); ++u) {
      const int v = static_cast<int>(std::lround((line.rho - u * ct) / st));
      if (img.in_bounds(v, u)) img.at(v, u) = color;
    }
  } else {
    for (int v = 0; v < img.height(); ++v) {
      const int u = static_cast<int>(std::lround((line.rho - v * st) / ct));
      if (img.in_bounds(v, u)) img.at(v, u) = color;
    }
  }
}

void draw_cross(imgproc::RgbImage& img, const geom::Vec2& p,
                const Rgb& color) {
  const int u = static_cast<int>(std::lround(p.x()));
  const int v = static_cast<int>(std::lround(p.y()));
  for (int k = -3; k <= 3; ++k) {
    if (img.in_bounds(v + k, u)) img.at(v + k, u) = color;
    if (img.in_bounds(v, u + k)) img.at(v, u + k) = color;
  }
}

// Reference content is tinted orange, the estimate blue; overlap mixes.
constexpr Rgb kRefFill{255, 160, 32};
constexpr Rgb kRefLine{255, 210, 90};
constexpr Rgb kEstFill{64, 128, 255};
constexpr Rgb kEstLine{140, 190, 255};

imgproc::RgbImage make_overlay(
    const BinaryMask& ref_mask, const SoftSilhouette& estimate,
    const std::optional<std::pair<loss::PolarLine, loss::PolarLine>>& ref_lines,
    const std::optional<std::pair<loss::PolarLine, loss::PolarLine>>& est_lines,
    const std::optional<loss::KeypointPair>& ref_tips,
    const std::optional<loss::KeypointPair>& est_tips) {
  imgproc::RgbImage img(ref_mask.height(), ref_mask.width(), Rgb{0, 0, 0});
  for (int v = 0; v < img.height(); ++v) {
    for (int u = 0; u < img.width(); ++u) {
      if (ref_mask.at(v, u)) blend_add(img.at(v, u), kRefFill, 0.55);
      const double s = estimate.at(v, u);
      if (s > 0.0) blend_add(img.at(v, u), kEstFill, 0.8 * s);
    }
  }
  if (ref_lines) {
    draw_polar_line(img, ref_lines->first, kRefLine);
    draw_polar_line(img, ref_lines->second, kRefLine);
  }
  if (est_lines) {
    draw_polar_line(img, est_lines->first, kEstLine);
    draw_polar_line(img, est_lines->second, kEstLine);
  }
  if (ref_tips) {
    draw_cross(img, ref_tips->a, kRefLine);
    draw_cross(img, ref_tips->b, kRefLine);
  }
  if (est_tips) {
    draw_cross(img, est_tips->a, kEstLine);
    draw_cross(img, est_tips->b, kEstLine);
  }
  return img;
}

void write_trace_csv(const std::string& path,
                     const std::vector<double>& trace) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "iter,loss\n" << std::setprecision(17);
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << i << ',' << trace[i] << '\n';
}

Json truth_error_json(const synth::SceneRecord& truth,
                      const optim::CalibrationResult& result) {
  const double rot = geom::rotation_angle_between(
      truth.true_transform.rotation, result.camera_from_robot.rotation);
  const double trans = (truth.true_transform.translation -
                        result.camera_from_robot.translation)
                           .norm();
  Json joint_errors = Json::array();
  if (truth.true_joints.size() == result.joints.q.size())
    for (Eigen::Index i = 0; i < truth.true_joints.size(); ++i)
      joint_errors.push_back(
          std::abs(result.joints.q[i] - truth.true_joints[i]));
  return Json{{"rotation_rad", rot},
              {"rotation_deg", rot * 180.0 / 3.141592653589793},
              {"translation_m", trans},
              {"joint_errors_rad", joint_errors}};
}

// ---- subcommand bodies ----

int cmd_calibrate(const RunConfig& cfg) {
  if (cfg.mask_path.empty()) throw ConfigError("no mask given (--mask)");
  if (cfg.joints.empty())
    throw ConfigError("no joint prior given (--joints \"q1,...,qn\")");
  set_threads(cfg.optim.threads);

  const geom::RobotModel model = model_or_default(cfg.model_path);
  const geom::CameraIntrinsics cam = intrinsics_or_default(cfg.intrinsics_path);
  const BinaryMask mask = imgproc::load_mask(cfg.mask_path);
  const geom::JointState joints = joint_state_for(model, cfg.joints);
  const loss::LossWeights weights = resolve_weights(cfg, cam);
  std::optional<loss::KeypointPair> keypoints;
  if (!cfg.keypoints_path.empty())
    keypoints = loss::load_keypoint_annotations(cfg.keypoints_path);

  const optim::CalibrationResult result =
      optim::calibrate(mask, joints, model, cam, weights, cfg.optim,
                       cfg.render_settings, keypoints, cfg.hypothesis);

  fs::create_directories(cfg.out_dir);
  Json out_json = optim::calibration_result_to_json(result);
  if (!cfg.truth_path.empty()) {
    const synth::SceneRecord truth = synth::load_scene_record(cfg.truth_path);
    out_json["truth_error"] = truth_error_json(truth, result);
  }
  const std::string result_path =
      (fs::path(cfg.out_dir) / "result.json").string();
  save_json_file(result_path, out_json);

  if (cfg.dump_traces) {
    write_trace_csv((fs::path(cfg.out_dir) / "coarse_trace.csv").string(),
                    result.coarse_trace);
    write_trace_csv((fs::path(cfg.out_dir) / "refine_trace.csv").string(),
                    result.refine_trace);
  }

  if (cfg.overlay) {
    const SoftSilhouette estimate =
        render::render_soft(model, result.joints, result.camera_from_robot,
                            cam, cfg.render_settings, true);
    std::optional<std::pair<loss::PolarLine, loss::PolarLine>> ref_lines;
    try {
      ref_lines = imgproc::hough_two_lines(imgproc::canny_edges(mask));
    } catch (const HoughError&) {
    }
    std::optional<std::pair<loss::PolarLine, loss::PolarLine>> est_lines;
    try {
      est_lines = loss::project_cylinder_edges(
          loss::shaft_cylinder(model, result.joints, result.camera_from_robot),
          cam);
    } catch (const CameraInsideCylinderError&) {
    }
    const std::optional<loss::KeypointPair> est_tips =
        loss::project_tip_keypoints(model, result.joints,
                                    result.camera_from_robot, cam,
                                    cfg.render_settings.near_plane);
    imgproc::save_rgb_png(
        make_overlay(mask, estimate, ref_lines, est_lines, keypoints,
                     est_tips),
        (fs::path(cfg.out_dir) / "overlay.png").string());
  }

  std::cout << "calibrate: final loss " << std::setprecision(6)
            << result.final_loss << ", wrote " << result_path;
  if (result.hough_failed) std::cout << " (warning: Hough line term disabled)";
  std::cout << '\n';
  return 0;
}

struct SynthOpts {
  std::string out, model, intrinsics, preset = "easy", orbit;
  int count = 10;
  double noise_sigma = 0.05235987755982989;  // 3 deg
  std::uint64_t seed = 0;
  int threads = 0;
};

int cmd_synth(const SynthOpts& o) {
  set_threads(o.threads);
  const geom::RobotModel model = model_or_default(o.model);
  const geom::CameraIntrinsics cam = intrinsics_or_default(o.intrinsics);
  if (o.count < 1) throw ConfigError("--count must be >= 1");

  std::vector<synth::SceneRecord> records;
  Json extra;
  if (!o.orbit.empty()) {
    const geom::Vec3 rcm = parse_vec3(o.orbit, "--orbit");
    records = synth::orbit_rcm_dataset(model, cam, rcm, o.count,
                                       o.noise_sigma, o.seed);
    extra = Json{{"generator", "orbit"},
                 {"rcm", {rcm[0], rcm[1], rcm[2]}},
                 {"joint_noise_sigma", o.noise_sigma},
                 {"seed", o.seed}};
  } else {
    synth::ScenePreset preset;
    if (o.preset == "easy") preset = synth::ScenePreset::kEasy;
    else if (o.preset == "medium") preset = synth::ScenePreset::kMedium;
    else if (o.preset == "hard") preset = synth::ScenePreset::kHard;
    else throw ConfigError("--preset must be easy, medium, or hard");
    std::mt19937_64 master(o.seed);
    records.reserve(o.count);
    for (int i = 0; i < o.count; ++i)
      records.push_back(synth::random_scene(model, cam, preset,
                                            o.noise_sigma, master()));
    extra = Json{{"generator", "preset"},
                 {"preset", o.preset},
                 {"joint_noise_sigma", o.noise_sigma},
                 {"seed", o.seed}};
  }
  synth::save_dataset(o.out, records, cam, extra);
  std::cout << "synth: wrote " << records.size() << " scenes to " << o.out
            << '\n';
  return 0;
}

struct EvalRcmOpts {
  std::string results_dir, model, out;
  int threads = 0;
};

int cmd_eval_rcm(const EvalRcmOpts& o) {
  set_threads(o.threads);
  const geom::RobotModel model = model_or_default(o.model);

  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(o.results_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());

  std::vector<optim::CalibrationResult> results;
  std::vector<std::string> names;
  for (const std::string& f : files) {
    try {
      results.push_back(optim::load_calibration_result(f));
      names.push_back(fs::path(f).filename().string());
    } catch (const ConfigError&) {
      std::cerr << "note: skipping " << f
                << " (not a calibration result)\n";
    }
  }
  if (results.size() < 2)
    throw InvalidParameterError(
        "eval-rcm needs at least two calibration results in " +
        o.results_dir);

  const rcm::ConsistencyReport report = rcm::rcm_experiment(results, model);

  const std::string out_path =
      o.out.empty() ? (fs::path(o.results_dir) / "consistency_report.json")
                          .string()
                    : o.out;
  save_json_file(out_path, rcm::consistency_report_to_json(report));

  std::cout << std::left << std::setw(36) << "result" << std::right
            << std::setw(16) << "dist_to_x*_m" << '\n';
  std::cout << std::setprecision(6) << std::fixed;
  for (std::size_t i = 0; i < names.size(); ++i)
    std::cout << std::left << std::setw(36) << names[i] << std::right
              << std::setw(16) << report.line_distances[i] << '\n';
  std::cout << "converging point: (" << report.converging[0] << ", "
            << report.converging[1] << ", " << report.converging[2]
            << ") m\n";
  std::cout << "sigma (origin-distance spread): " << report.sigma << " m\n";
  std::cout << "sigma_line (line-distance spread): " << report.sigma_line
            << " m\n";
  std::cout.unsetf(std::ios::fixed);
  std::cout << "wrote " << out_path << '\n';
  return 0;
}

struct RenderOpts {
  std::string model, intrinsics, joints, pose = "0.2,1.0,-0.1,0.15", result,
              out;
  double sigma = 1.5;
  bool hard = false;
  std::uint64_t seed = 0;  // accepted for interface uniformity; no RNG here
  int threads = 0;
};

int cmd_render(const RenderOpts& o) {
  set_threads(o.threads);
  const geom::RobotModel model = model_or_default(o.model);
  const geom::CameraIntrinsics cam = intrinsics_or_default(o.intrinsics);
  render::RenderSettings settings;
  settings.sigma = o.sigma;
  settings.validate();

  geom::RigidTransform pose;
  geom::JointState joints;
  if (!o.result.empty()) {
    const optim::CalibrationResult r = optim::load_calibration_result(o.result);
    pose = r.camera_from_robot;
    joints = r.joints;
  } else {
    const std::vector<double> p = parse_joint_list(o.pose);
    if (p.size() != 4)
      throw ConfigError("--pose: expected \"alpha,beta,gamma,d\"");
    pose = geom::look_at_transform(p[0], p[1], p[2], p[3]);
    std::vector<double> q(static_cast<std::size_t>(model.joint_count), 0.0);
    if (!o.joints.empty()) q = parse_joint_list(o.joints);
    joints = joint_state_for(model, q);
  }

  double occupancy = 0.0;
  if (o.hard) {
    const BinaryMask mask =
        render::render_hard(model, joints, pose, cam, settings.near_plane);
    occupancy = synth::mask_occupancy(mask);
    imgproc::save_mask(mask, o.out);
  } else {
    const SoftSilhouette soft =
        render::render_soft(model, joints, pose, cam, settings);
    Image<std::uint8_t> gray(soft.height(), soft.width());
    double total = 0.0;
    for (std::size_t i = 0; i < soft.size(); ++i) {
      total += soft.data()[i];
      gray.data()[i] =
          static_cast<std::uint8_t>(std::lround(255.0 * soft.data()[i]));
    }
    occupancy = total / static_cast<double>(soft.size());
    imgproc::save_gray8_png(gray, o.out);
  }
  if (occupancy == 0.0)
    std::cerr << "warning: rendered silhouette is empty (pose outside the "
                 "frustum?)\n";
  std::cout << "render: wrote " << o.out << " (occupancy "
            << std::setprecision(3) << 100.0 * occupancy << "%)\n";
  return 0;
}

struct GradcheckOpts {
  int trials = 20;
  std::uint64_t seed = 0;
  double tolerance = 1e-3;
  int threads = 0;
};

int cmd_gradcheck(const GradcheckOpts& o) {
  set_threads(o.threads);
  if (o.trials < 1) throw ConfigError("--trials must be >= 1");
  const geom::RobotModel model = geom::build_psm_model({});
  const geom::CameraIntrinsics cam;
  const loss::LossWeights weights =
      loss::LossWeights::defaults_for(cam.width, cam.height);
  const render::RenderSettings settings;
  constexpr double kAbsFloor = 1e-6;

  std::mt19937_64 master(o.seed);
  int bad = 0;
  double worst_rel = 0.0;
  std::printf("%-6s %-5s %14s %14s %10s  %s\n", "trial", "param", "analytic",
              "fd", "rel_err", "status");
  for (int t = 0; t < o.trials; ++t) {
    const std::uint64_t scene_seed = master();
    const std::uint64_t perturb_seed = master();
    const synth::SceneRecord scene = synth::random_scene(
        model, cam, synth::ScenePreset::kEasy, 0.0, scene_seed);

    optim::SceneRefs refs;
    refs.mask = scene.mask;
    refs.dist = imgproc::distance_field(scene.mask, weights.gamma_decay);
    const geom::JointState true_joints =
        geom::JointState::with_default_mask(scene.true_joints);
    refs.lines = loss::project_cylinder_edges(
        loss::shaft_cylinder(model, true_joints, scene.true_transform), cam);
    refs.keypoints = scene.tips;
    const optim::SceneObjective objective(model, cam, true_joints, refs,
                                          weights, settings);

    // Evaluate slightly off the truth so every term contributes. The
    // |sum S - sum M| term has a derivative jump where the areas tie, so
    // redraw any perturbation whose area gap the stencil could straddle:
    // central differences cannot probe that measure-zero locus.
    const optim::PoseChart chart{scene.true_transform.rotation};
    const Eigen::VectorXd packed =
        objective.pack(scene.true_transform, scene.true_joints);
    double mask_area = 0.0;
    for (std::size_t i = 0; i < scene.mask.size(); ++i)
      mask_area += scene.mask.data()[i] ? 1.0 : 0.0;
    std::mt19937_64 rng(perturb_seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    constexpr double kAreaMargin = 50.0;  // px^2, > any stencil area swing
    Eigen::VectorXd params;
    double best_gap = -1.0;
    for (int draw = 0; draw < 60; ++draw) {
      Eigen::VectorXd cand = packed;
      for (int i = 0; i < 3; ++i) cand[i] += 0.008 * unit(rng);
      for (int i = 3; i < 6; ++i) cand[i] += 0.0012 * unit(rng);
      for (Eigen::Index i = 6; i < cand.size(); ++i)
        cand[i] += 0.008 * unit(rng);
      const SoftSilhouette soft = render::render_soft(
          model, objective.unpack_joints(cand),
          objective.unpack_pose(chart, cand), cam, settings, true);
      double area = 0.0;
      for (std::size_t i = 0; i < soft.size(); ++i) area += soft.data()[i];
      const double gap = std::abs(area - mask_area);
      if (gap > best_gap) {
        best_gap = gap;
        params = cand;
      }
      if (gap > kAreaMargin) break;
    }

    Eigen::VectorXd analytic;
    objective.evaluate_with_gradient(chart, params, &analytic, true);
    // Oracle steps sit well below the cylinder term's curvature scale
    // (its tangent-line geometry steepens sharply at short standoff) and
    // well above double-precision cancellation in the pixel sums.
    Eigen::VectorXd steps(params.size());
    steps.head<3>().setConstant(1e-7);
    steps.segment<3>(3).setConstant(1e-8);
    steps.tail(params.size() - 6).setConstant(1e-7);
    const Eigen::VectorXd fd = render::loss_gradient(
        params,
        [&](const Eigen::VectorXd& p) {
          return objective.evaluate(chart, p, true);
        },
        steps);

    for (Eigen::Index i = 0; i < params.size(); ++i) {
      std::string name;
      if (i < 3) name = "w" + std::to_string(i);
      else if (i < 6) name = "t" + std::to_string(i - 3);
      else name = "q" + std::to_string(objective.optimizable_joints()[i - 6]);
      const double a = analytic[i];
      double f = fd[i];
      const auto accept = [&](double v) {
        return std::abs(a - v) <=
               std::max(o.tolerance * std::max(std::abs(a), std::abs(v)),
                        kAbsFloor);
      };
      bool ok = accept(f);
      // A miss at the base step can be a stencil straddling one of the
      // soft profile's banded kinks. Shrink the step: a wrong analytic
      // value stays wrong at every step, a straddle clears.
      for (double shrink : {0.25, 0.0625}) {
        if (ok) break;
        const double h = steps[i] * shrink;
        Eigen::VectorXd pp = params, pm = params;
        pp[i] += h;
        pm[i] -= h;
        f = (objective.evaluate(chart, pp, true) -
             objective.evaluate(chart, pm, true)) /
            (2.0 * h);
        ok = accept(f);
      }
      const double err = std::abs(a - f);
      const double scale = std::max(std::abs(a), std::abs(f));
      const double rel = scale > 0.0 ? err / scale : 0.0;
      if (!ok) ++bad;
      worst_rel = std::max(worst_rel, err > kAbsFloor ? rel : 0.0);
      std::printf("%-6d %-5s %14.6e %14.6e %10.2e  %s\n", t, name.c_str(), a,
                  f, rel, ok ? "ok" : "FAIL");
    }
  }
  std::printf(
      "gradcheck: %d trials, %d failing components "
      "(tolerance rel %.1e, abs floor %.1e), worst rel %.2e\n",
      o.trials, bad, o.tolerance, kAbsFloor, worst_rel);
  return bad == 0 ? 0 : 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"silcal: single-mask camera-to-robot calibration for a "
               "surgical-style manipulator"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ---- calibrate ----
  auto* cal = app.add_subcommand(
      "calibrate", "Estimate camera-to-robot pose and joint corrections "
                   "from one silhouette mask");
  std::string c_config, c_mask, c_model, c_intrinsics, c_out, c_joints,
      c_keypoints, c_truth;
  int c_candidates = 500, c_coarse = 100, c_refine = 1000, c_threads = 0;
  double c_lr_coarse = 0.003, c_lr_refine = 0.0005, c_sigma = 1.5;
  std::uint64_t c_seed = 0;
  bool c_overlay = false, c_dump = false;
  cal->add_option("--config", c_config,
                  "Run config JSON; flags override its values");
  auto* o_mask =
      cal->add_option("--mask", c_mask, "Reference silhouette mask (PNG/PGM)");
  auto* o_model = cal->add_option("--model", c_model,
                                  "Robot model JSON (default: built-in PSM)");
  auto* o_intr = cal->add_option(
      "--intrinsics", c_intrinsics,
      "Camera intrinsics JSON (default: 800px focal, 640x480)");
  auto* o_out = cal->add_option("--out", c_out, "Output directory");
  auto* o_joints = cal->add_option(
      "--joints", c_joints, "Joint prior, comma-separated radians "
                            "\"q1,...,qn\" (the errorful encoder readings)");
  auto* o_kpts = cal->add_option("--keypoints", c_keypoints,
                                 "Tip annotation file (two \"u v\" lines)");
  auto* o_truth = cal->add_option(
      "--truth", c_truth,
      "Scene-record sidecar; adds truth_error fields to result.json");
  auto* o_cand = cal->add_option("--candidates", c_candidates,
                                 "Pose hypothesis count")->capture_default_str();
  auto* o_ci =
      cal->add_option("--coarse-iters", c_coarse, "Coarse Adam steps")->capture_default_str();
  auto* o_lc = cal->add_option("--lr-coarse", c_lr_coarse,
                               "Coarse learning rate")->capture_default_str();
  auto* o_ri =
      cal->add_option("--refine-iters", c_refine, "Refine Adam steps")->capture_default_str();
  auto* o_lr = cal->add_option("--lr-refine", c_lr_refine,
                               "Refine learning rate")->capture_default_str();
  auto* o_seed = cal->add_option("--seed", c_seed, "RNG seed")->capture_default_str();
  auto* o_thr = cal->add_option("--threads", c_threads,
                                "Worker threads (0 = all cores)")->capture_default_str();
  auto* o_sig = cal->add_option("--sigma", c_sigma,
                                "Soft-silhouette falloff width, px")->capture_default_str();
  cal->add_flag("--overlay", c_overlay,
                "Write overlay.png (reference orange, estimate blue, both "
                "edge-line pairs)");
  cal->add_flag("--dump-traces", c_dump,
                "Write coarse_trace.csv and refine_trace.csv");
  {
    std::string footer =
        "Run-config keys (flags win over the file; see README):\n  ";
    const auto& keys = run_config_keys();
    for (std::size_t i = 0; i < keys.size(); ++i) {
      footer += keys[i];
      if (i + 1 < keys.size()) footer += ", ";
      if (i % 8 == 7 && i + 1 < keys.size()) footer += "\n  ";
    }
    cal->footer(footer);
  }
  cal->callback([&] {
    exit_code = guarded([&] {
      RunConfig cfg;
      if (!c_config.empty()) cfg = load_run_config(c_config);
      if (o_mask->count()) cfg.mask_path = c_mask;
      if (o_model->count()) cfg.model_path = c_model;
      if (o_intr->count()) cfg.intrinsics_path = c_intrinsics;
      if (o_out->count()) cfg.out_dir = c_out;
      if (o_joints->count()) cfg.joints = parse_joint_list(c_joints);
      if (o_kpts->count()) cfg.keypoints_path = c_keypoints;
      if (o_truth->count()) cfg.truth_path = c_truth;
      if (o_cand->count()) cfg.optim.candidate_count = c_candidates;
      if (o_ci->count()) cfg.optim.coarse_iters = c_coarse;
      if (o_lc->count()) cfg.optim.lr_coarse = c_lr_coarse;
      if (o_ri->count()) cfg.optim.refine_iters = c_refine;
      if (o_lr->count()) cfg.optim.lr_refine = c_lr_refine;
      if (o_seed->count()) cfg.optim.seed = c_seed;
      if (o_thr->count()) cfg.optim.threads = c_threads;
      if (o_sig->count()) cfg.render_settings.sigma = c_sigma;
      if (c_overlay) cfg.overlay = true;
      if (c_dump) cfg.dump_traces = true;
      return cmd_calibrate(cfg);
    });
  });

  // ---- synth ----
  auto* syn = app.add_subcommand(
      "synth", "Generate ground-truth synthetic scenes (masks + sidecars)");
  SynthOpts so;
  syn->add_option("--out", so.out, "Output dataset directory")->required();
  syn->add_option("--model", so.model,
                  "Robot model JSON (default: built-in PSM)");
  syn->add_option("--intrinsics", so.intrinsics,
                  "Camera intrinsics JSON (default: 800px focal, 640x480)");
  syn->add_option("--count", so.count, "Number of scenes")->capture_default_str();
  syn->add_option("--preset", so.preset,
                  "Difficulty preset: easy, medium, hard")->capture_default_str();
  syn->add_option("--orbit", so.orbit,
                  "RCM pivot \"x,y,z\" (meters, camera frame); switches to "
                  "orbit-dataset mode");
  syn->add_option("--noise-sigma", so.noise_sigma,
                  "Joint encoder noise sigma, radians")->capture_default_str();
  syn->add_option("--seed", so.seed, "RNG seed")->capture_default_str();
  syn->add_option("--threads", so.threads, "Worker threads (0 = all cores)")->capture_default_str();
  syn->callback([&] { exit_code = guarded([&] { return cmd_synth(so); }); });

  // ---- eval-rcm ----
  auto* rcm_cmd = app.add_subcommand(
      "eval-rcm", "Converging-point consistency of calibration results");
  EvalRcmOpts ro;
  rcm_cmd->add_option("--results", ro.results_dir,
                      "Directory of calibration result JSON files")
      ->required();
  rcm_cmd->add_option("--model", ro.model,
                      "Robot model JSON (default: built-in PSM)");
  rcm_cmd->add_option("--out", ro.out,
                      "Report path (default: <results>/consistency_report.json)");
  rcm_cmd->add_option("--threads", ro.threads,
                      "Worker threads (0 = all cores)")->capture_default_str();
  rcm_cmd->callback(
      [&] { exit_code = guarded([&] { return cmd_eval_rcm(ro); }); });

  // ---- render ----
  auto* ren = app.add_subcommand(
      "render", "Render the soft or hard silhouette for a pose and joints");
  RenderOpts no;
  ren->add_option("--model", no.model,
                  "Robot model JSON (default: built-in PSM)");
  ren->add_option("--intrinsics", no.intrinsics,
                  "Camera intrinsics JSON (default: 800px focal, 640x480)");
  ren->add_option("--joints", no.joints,
                  "Joint values, comma-separated radians (default: zeros)");
  ren->add_option("--pose", no.pose,
                  "LookAt pose \"alpha,beta,gamma,d\" (radians, meters)")->capture_default_str();
  ren->add_option("--result", no.result,
                  "Render the pose/joints of a result.json instead");
  ren->add_option("--out", no.out, "Output PNG path")->required();
  ren->add_option("--sigma", no.sigma, "Soft falloff width, px")->capture_default_str();
  ren->add_flag("--hard", no.hard, "Exact binary coverage instead of soft");
  ren->add_option("--seed", no.seed,
                  "RNG seed (unused; accepted for uniformity)")->capture_default_str();
  ren->add_option("--threads", no.threads, "Worker threads (0 = all cores)")->capture_default_str();
  ren->callback([&] { exit_code = guarded([&] { return cmd_render(no); }); });

  // ---- gradcheck ----
  auto* gc = app.add_subcommand(
      "gradcheck",
      "Analytic vs. finite-difference gradients on random scenes");
  GradcheckOpts go;
  gc->add_option("--trials", go.trials, "Number of random configurations")->capture_default_str();
  gc->add_option("--seed", go.seed, "RNG seed")->capture_default_str();
  gc->add_option("--tolerance", go.tolerance, "Relative tolerance")->capture_default_str();
  gc->add_option("--threads", go.threads, "Worker threads (0 = all cores)")->capture_default_str();
  gc->callback(
      [&] { exit_code = guarded([&] { return cmd_gradcheck(go); }); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // normalize every usage error to exit 1
  }
  return exit_code;
}

}  // namespace silcal::cli
