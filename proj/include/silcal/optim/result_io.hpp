#pragma once

#include <string>

#include "silcal/common/json_util.hpp"
#include "silcal/optim/pipeline.hpp"

namespace silcal::optim {

/// CalibrationResult <-> JSON. Serialization is byte-stable: sorted keys,
/// shortest-round-trip doubles, trailing newline. The transform is the
/// 4x4 camera-from-robot matrix flattened row-major; joints are radians.
Json calibration_result_to_json(const CalibrationResult& result);
CalibrationResult calibration_result_from_json(const Json& j,
                                               const std::string& context);

void save_calibration_result(const std::string& path,
                             const CalibrationResult& result);
CalibrationResult load_calibration_result(const std::string& path);

Json optim_config_to_json(const OptimConfig& config);
/// Reads config fields from `j`, starting from defaults; unknown keys are
/// rejected. Used both for the result's config echo and for run-config
/// files.
OptimConfig optim_config_from_json(const Json& j, const std::string& context);

}  // namespace silcal::optim
