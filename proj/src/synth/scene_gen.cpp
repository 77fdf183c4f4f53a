#include "silcal/synth/scene_gen.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "silcal/common/errors.hpp"
#include "silcal/hypothesis/sampler.hpp"
#include "silcal/imgproc/mask_io.hpp"
#include "silcal/render/rasterizer.hpp"

namespace silcal::synth {

namespace fs = std::filesystem;

namespace {

constexpr int kMaxDraws = 2000;
constexpr double kOccupancyMin = 0.02;
constexpr double kOccupancyMax = 0.40;
constexpr double kEasyOccupancy = 0.10;
constexpr double kEdgeMarginPx = 5.0;
constexpr double kMinShaftSeparation = 0.034906585039886591;  // 2 deg
constexpr double kOrbitAxisZMin = 0.5;   // cos(60 deg): orbit cone
constexpr double kOrbitTauMin = 0.06;    // rcm depth along the shaft, m
constexpr double kOrbitTauMax = 0.14;

std::string scene_stem(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "scene_%04d", index);
  return buf;
}

Eigen::VectorXd draw_joints(const geom::RobotModel& model,
                            std::mt19937_64& rng) {
  std::uniform_real_distribution<double> roll(-3.141592653589793,
                                              3.141592653589793);
  std::uniform_real_distribution<double> wrist(-0.4, 0.4);
  std::uniform_real_distribution<double> jaw(0.15, 0.6);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(model.joint_count);
  const int n = model.joint_count;
  if (n > 0) q[0] = roll(rng);
  for (int i = 1; i < n - 1; ++i) q[i] = wrist(rng);
  if (n > 1) q[n - 1] = jaw(rng);
  return q;
}

/// Smallest distance of either tip pixel to the frame border; negative
/// when a tip projects outside. nullopt when a tip is behind the near
/// plane (clipped away).
std::optional<double> tip_margin(const SceneRecord& record,
                                 const geom::CameraIntrinsics& cam) {
  if (!record.tips) return std::nullopt;
  double margin = std::numeric_limits<double>::infinity();
  for (const geom::Vec2& p : {record.tips->a, record.tips->b}) {
    margin = std::min(margin, p.x());
    margin = std::min(margin, p.y());
    margin = std::min(margin, cam.width - 1.0 - p.x());
    margin = std::min(margin, cam.height - 1.0 - p.y());
  }
  return margin;
}

bool preset_accepts(ScenePreset preset, const SceneRecord& record,
                    const geom::CameraIntrinsics& cam, double occupancy) {
  if (occupancy < kOccupancyMin || occupancy > kOccupancyMax) return false;
  const std::optional<double> margin = tip_margin(record, cam);
  switch (preset) {
    case ScenePreset::kEasy:
      return margin && *margin >= kEdgeMarginPx && occupancy >= kEasyOccupancy;
    case ScenePreset::kMedium:
      return true;  // the standoff-distance constraint is applied at draw
    case ScenePreset::kHard:
      return !margin || *margin < kEdgeMarginPx;
  }
  return false;
}

}  // namespace

double mask_occupancy(const BinaryMask& mask) {
  std::size_t on = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) on += mask.data()[i] != 0;
  return static_cast<double>(on) / static_cast<double>(mask.size());
}

SceneRecord generate_scene(const geom::RobotModel& model,
                           const geom::CameraIntrinsics& cam,
                           const geom::RigidTransform& true_transform,
                           const Eigen::VectorXd& true_joints,
                           double joint_noise_sigma, std::uint64_t seed) {
  if (joint_noise_sigma < 0.0)
    throw InvalidParameterError("joint noise sigma must be non-negative");
  SceneRecord record;
  record.true_transform = true_transform;
  record.true_joints = true_joints;
  record.seed = seed;

  const geom::JointState joints = geom::JointState::with_default_mask(true_joints);
  record.mask = render::render_hard(model, joints, true_transform, cam);
  if (mask_occupancy(record.mask) == 0.0)
    throw EmptyMaskError("rendered mask is empty: pose projects outside the frame");
  record.tips = loss::project_tip_keypoints(model, joints, true_transform, cam,
                                            render::RenderSettings{}.near_plane);

  record.noisy_joints = true_joints;
  if (joint_noise_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, joint_noise_sigma);
    const Eigen::Index n = record.noisy_joints.size();
    for (Eigen::Index i = std::max<Eigen::Index>(0, n - 3); i < n; ++i)
      record.noisy_joints[i] += noise(rng);
  }
  return record;
}

SceneRecord random_scene(const geom::RobotModel& model,
                         const geom::CameraIntrinsics& cam, ScenePreset preset,
                         double joint_noise_sigma, std::uint64_t seed) {
  const hypothesis::HypothesisSpace space;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(space.alpha_range[0],
                                            space.alpha_range[1]);
  std::uniform_real_distribution<double> ub(space.beta_range[0],
                                            space.beta_range[1]);
  std::uniform_real_distribution<double> ug(space.gamma_range[0],
                                            space.gamma_range[1]);
  const double d_lo = preset == ScenePreset::kMedium
                          ? 0.5 * (space.d_range[0] + space.d_range[1])
                          : space.d_range[0];
  std::uniform_real_distribution<double> ud(d_lo, space.d_range[1]);

  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    double alpha = ua(rng);
    double gamma = ug(rng);
    if (hypothesis::shaft_axis_z(alpha, gamma) < space.min_axis_z) continue;
    const double beta = ub(rng);
    const double d = ud(rng);
    const Eigen::VectorXd q = draw_joints(model, rng);
    const std::uint64_t sub_seed = rng();

    SceneRecord record;
    try {
      record = generate_scene(model, cam, geom::look_at_transform(alpha, beta, gamma, d),
                              q, joint_noise_sigma, sub_seed);
    } catch (const EmptyMaskError&) {
      continue;
    }
    if (preset_accepts(preset, record, cam, mask_occupancy(record.mask)))
      return record;
  }
  throw InvalidParameterError(
      "could not draw a scene matching the preset within the attempt budget");
}

std::vector<SceneRecord> orbit_rcm_dataset(const geom::RobotModel& model,
                                           const geom::CameraIntrinsics& cam,
                                           const geom::Vec3& rcm, int count,
                                           double joint_noise_sigma,
                                           std::uint64_t seed) {
  if (count < 2)
    throw InvalidParameterError("orbit dataset needs at least two scenes");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(-1.2217304763960306,
                                            1.2217304763960306);
  std::uniform_real_distribution<double> ub(-3.141592653589793,
                                            3.141592653589793);
  std::uniform_real_distribution<double> utau(kOrbitTauMin, kOrbitTauMax);

  std::vector<SceneRecord> records;
  std::vector<geom::Vec3> axes;
  records.reserve(count);
  axes.reserve(count);

  while (static_cast<int>(records.size()) < count) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
      const double alpha = ua(rng);
      const double gamma = ua(rng);
      if (hypothesis::shaft_axis_z(alpha, gamma) < kOrbitAxisZMin) continue;
      const geom::Vec3 axis(std::cos(alpha) * std::sin(gamma),
                            -std::sin(alpha),
                            std::cos(alpha) * std::cos(gamma));
      bool separated = true;
      for (const geom::Vec3& prev : axes) {
        const double c = std::clamp(axis.dot(prev), -1.0, 1.0);
        if (std::acos(c) < kMinShaftSeparation) {
          separated = false;
          break;
        }
      }
      if (!separated) continue;

      geom::RigidTransform pose;
      pose.rotation = geom::rotation_about_axis(geom::Axis::Y, gamma) *
                      geom::rotation_about_axis(geom::Axis::X, alpha) *
                      geom::rotation_about_axis(geom::Axis::Z, ub(rng));
      // The RCM sits on the shaft: the shaft origin (distal end) is tau
      // meters past the pivot along the axis.
      pose.translation = rcm + utau(rng) * axis;
      // Keep the camera center clear of the cylinder surface.
      const geom::Vec3 t = pose.translation;
      if ((t - t.dot(axis) * axis).norm() <= 2.0 * model.shaft_radius)
        continue;

      const Eigen::VectorXd q = draw_joints(model, rng);
      const std::uint64_t sub_seed = rng();
      SceneRecord record;
      try {
        record = generate_scene(model, cam, pose, q, joint_noise_sigma,
                                sub_seed);
      } catch (const EmptyMaskError&) {
        continue;
      }
      const double occ = mask_occupancy(record.mask);
      if (occ < kOccupancyMin || occ > kOccupancyMax) continue;

      records.push_back(std::move(record));
      axes.push_back(axis);
      placed = true;
      break;
    }
    if (!placed)
      throw InvalidParameterError(
          "could not place an orbit scene within the attempt budget; "
          "check that the RCM is well inside the camera frustum");
  }
  return records;
}

void save_dataset(const std::string& dir, std::vector<SceneRecord>& records,
                  const geom::CameraIntrinsics& cam,
                  const Json& manifest_extra) {
  fs::create_directories(dir);
  Json scenes = Json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    SceneRecord& rec = records[i];
    const std::string stem = scene_stem(static_cast<int>(i));
    rec.mask_path = stem + ".png";
    imgproc::save_mask(rec.mask, (fs::path(dir) / rec.mask_path).string());

    std::vector<double> q(rec.true_joints.data(),
                          rec.true_joints.data() + rec.true_joints.size());
    std::vector<double> qn(rec.noisy_joints.data(),
                           rec.noisy_joints.data() + rec.noisy_joints.size());
    Json side{{"schema_version", 1},
              {"artifact", "scene_record"},
              {"mask", rec.mask_path},
              {"camera_from_robot", geom::transform_to_json(rec.true_transform)},
              {"joints", q},
              {"noisy_joints", qn},
              {"seed", rec.seed}};
    if (rec.tips)
      side["tips"] = Json::array({{rec.tips->a.x(), rec.tips->a.y()},
                                  {rec.tips->b.x(), rec.tips->b.y()}});
    save_json_file((fs::path(dir) / (stem + ".json")).string(), side);
    scenes.push_back(stem + ".json");
  }
  Json manifest{{"schema_version", 1},
                {"artifact", "synth_dataset"},
                {"intrinsics", geom::intrinsics_to_json(cam)},
                {"count", records.size()},
                {"scenes", scenes}};
  for (const auto& item : manifest_extra.items())
    manifest[item.key()] = item.value();
  save_json_file((fs::path(dir) / "dataset.json").string(), manifest);
}

SceneRecord load_scene_record(const std::string& json_path) {
  const Json j = load_json_file(json_path, "scene record");
  const std::string context = "scene record";
  check_schema_version(j, 1, context);
  check_allowed_keys(j,
                     {"schema_version", "artifact", "mask",
                      "camera_from_robot", "joints", "noisy_joints", "seed",
                      "tips"},
                     context);
  require_key(j, "artifact", context);
  if (j.at("artifact").get<std::string>() != "scene_record")
    throw ConfigError(context + ": not a scene record file");
  for (const char* key :
       {"mask", "camera_from_robot", "joints", "noisy_joints", "seed"})
    require_key(j, key, context);

  SceneRecord rec;
  rec.true_transform = geom::transform_from_json(j.at("camera_from_robot"),
                                                 context);
  const auto q = j.at("joints").get<std::vector<double>>();
  const auto qn = j.at("noisy_joints").get<std::vector<double>>();
  if (q.size() != qn.size())
    throw ConfigError(context + ": joints and noisy_joints disagree");
  rec.true_joints = Eigen::Map<const Eigen::VectorXd>(
      q.data(), static_cast<Eigen::Index>(q.size()));
  rec.noisy_joints = Eigen::Map<const Eigen::VectorXd>(
      qn.data(), static_cast<Eigen::Index>(qn.size()));
  rec.seed = j.at("seed").get<std::uint64_t>();
  rec.mask_path = j.at("mask").get<std::string>();
  rec.mask = imgproc::load_mask(
      (fs::path(json_path).parent_path() / rec.mask_path).string());
  if (j.contains("tips")) {
    const Json& t = j.at("tips");
    if (!t.is_array() || t.size() != 2 || t.at(0).size() != 2 ||
        t.at(1).size() != 2)
      throw ConfigError(context + ": tips must be two [u, v] pairs");
    rec.tips = loss::KeypointPair::from_points(
        {t.at(0).at(0).get<double>(), t.at(0).at(1).get<double>()},
        {t.at(1).at(0).get<double>(), t.at(1).at(1).get<double>()});
  }
  return rec;
}

Dataset load_dataset(const std::string& dir) {
  Dataset out;
  out.manifest = load_json_file((fs::path(dir) / "dataset.json").string(),
                                "dataset manifest");
  const std::string context = "dataset manifest";
  check_schema_version(out.manifest, 1, context);
  require_key(out.manifest, "artifact", context);
  if (out.manifest.at("artifact").get<std::string>() != "synth_dataset")
    throw ConfigError(context + ": not a dataset manifest");
  require_key(out.manifest, "intrinsics", context);
  require_key(out.manifest, "scenes", context);
  out.cam = geom::intrinsics_from_json(out.manifest.at("intrinsics"),
                                       context + ".intrinsics");
  for (const Json& name : out.manifest.at("scenes"))
    out.records.push_back(load_scene_record(
        (fs::path(dir) / name.get<std::string>()).string()));
  return out;
}

}  // namespace silcal::synth
