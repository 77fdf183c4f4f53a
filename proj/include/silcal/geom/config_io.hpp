#pragma once

#include <string>

#include "silcal/common/json_util.hpp"
#include "silcal/geom/camera.hpp"
#include "silcal/geom/model_builder.hpp"

namespace silcal::geom {

/// Read a robot model config (JSON, schema_version 1, kind
/// "psm_procedural"). Every dimension lives in the file; missing keys fall
/// back to the documented defaults, unknown keys are rejected.
RobotModel load_robot_model(const std::string& path);

/// Parse the same schema from an in-memory JSON string (used by tests and
/// by the synthetic-scene sidecars).
PsmDimensions parse_psm_dimensions(const std::string& json_text,
                                   const std::string& context);

/// Write the dimensions back out as a schema_version 1 config.
void save_robot_model(const std::string& path, const PsmDimensions& dims);

/// Camera intrinsics config (JSON, schema_version 1): fx, fy, cu, cv,
/// width, height.
CameraIntrinsics load_intrinsics(const std::string& path);
void save_intrinsics(const std::string& path, const CameraIntrinsics& cam);

/// Intrinsics as a bare JSON fragment (no schema_version), for embedding
/// in larger documents such as dataset manifests.
CameraIntrinsics intrinsics_from_json(const Json& obj,
                                      const std::string& context);
Json intrinsics_to_json(const CameraIntrinsics& cam);

/// RigidTransform as a 16-element row-major 4x4 matrix. Parsing checks
/// the bottom row and that the rotation block has unit determinant.
Json transform_to_json(const RigidTransform& t);
RigidTransform transform_from_json(const Json& j, const std::string& context);

}  // namespace silcal::geom
