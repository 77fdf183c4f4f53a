#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "silcal/common/image.hpp"
#include "silcal/common/json_util.hpp"
#include "silcal/geom/config_io.hpp"
#include "silcal/geom/robot.hpp"
#include "silcal/loss/keypoints.hpp"

namespace silcal::synth {

/// One ground-truth scene: the pose and joints the mask was rendered
/// from, the encoder-style noisy joints handed to the calibration, and
/// the mask itself. `tips` are the true projected gripper-tip pixels
/// when both are in front of the near plane.
struct SceneRecord {
  geom::RigidTransform true_transform;
  Eigen::VectorXd true_joints;
  Eigen::VectorXd noisy_joints;
  BinaryMask mask;
  std::optional<loss::KeypointPair> tips;
  std::string mask_path;  // relative file name once saved into a dataset
  std::uint64_t seed = 0;
};

/// Fraction of positive pixels.
double mask_occupancy(const BinaryMask& mask);

/// Render the exact mask for a known pose and joints, and perturb the
/// last three joints with N(0, sigma) encoder noise. Throws
/// EmptyMaskError when the pose renders nothing (out of frame).
SceneRecord generate_scene(const geom::RobotModel& model,
                           const geom::CameraIntrinsics& cam,
                           const geom::RigidTransform& true_transform,
                           const Eigen::VectorXd& true_joints,
                           double joint_noise_sigma, std::uint64_t seed);

/// Difficulty tiers: easy = both tips well inside the frame (>= 5 px
/// margin) and occupancy >= 10%; medium = standoff distance in the upper
/// half of the sampling range; hard = a tip within 5 px of the frame
/// edge or clipped away entirely. All tiers keep occupancy in [2%, 40%].
enum class ScenePreset { kEasy, kMedium, kHard };

/// Rejection-sample a scene matching the preset from the standard
/// hypothesis ranges. Deterministic per seed.
SceneRecord random_scene(const geom::RobotModel& model,
                         const geom::CameraIntrinsics& cam, ScenePreset preset,
                         double joint_noise_sigma, std::uint64_t seed);

/// `count` scenes whose true shaft center lines all pass exactly through
/// `rcm` (camera frame), emulating pivoting about a fixed insertion
/// point. Shaft directions are drawn in the hypothesis cone and kept
/// pairwise >= 2 degrees apart.
std::vector<SceneRecord> orbit_rcm_dataset(const geom::RobotModel& model,
                                           const geom::CameraIntrinsics& cam,
                                           const geom::Vec3& rcm, int count,
                                           double joint_noise_sigma,
                                           std::uint64_t seed);

/// Directory layout: scene_0000.png + scene_0000.json per record plus a
/// dataset.json manifest carrying the intrinsics and any generator
/// fields passed in `manifest_extra`.
void save_dataset(const std::string& dir, std::vector<SceneRecord>& records,
                  const geom::CameraIntrinsics& cam,
                  const Json& manifest_extra = Json::object());

SceneRecord load_scene_record(const std::string& json_path);

struct Dataset {
  geom::CameraIntrinsics cam;
  std::vector<SceneRecord> records;
  Json manifest;
};

Dataset load_dataset(const std::string& dir);

}  // namespace silcal::synth
