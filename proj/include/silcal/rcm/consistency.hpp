#pragma once

#include <vector>

#include "silcal/common/json_util.hpp"
#include "silcal/optim/pipeline.hpp"

namespace silcal::rcm {

/// Infinite 3D line: a point on the line and a unit direction.
struct Line3 {
  geom::Vec3 origin = geom::Vec3::Zero();
  geom::Vec3 dir = geom::Vec3::UnitZ();
};

/// A set of shaft center lines from repeated calibrations of one setup.
struct LineBundle {
  std::vector<Line3> lines;

  /// At least one line, unit directions. The closed-form converging point
  /// additionally needs >= 2 non-parallel lines; that is checked there.
  void validate() const;
};

/// Euclidean distance from a point to the line.
double point_to_line_distance(const geom::Vec3& p, const Line3& line);

/// Least-squares closest point to all lines:
/// x* = (N I - sum d_i d_i^T)^{-1} sum (I - d_i d_i^T) p_i.
/// Throws SingularBundleError (carrying the condition number) when the
/// normal matrix has condition number >= 1e8 — a near-parallel bundle has
/// no trustworthy converging point and silently regularizing one would
/// corrupt the consistency metric.
geom::Vec3 converging_point(const LineBundle& bundle);

/// Dispersion of the ORIGIN distances about the distance of the mean
/// origin: sigma = sqrt(1/N sum (|p_i - x| - |p_bar - x|)^2).
double consistency_sigma(const LineBundle& bundle, const geom::Vec3& x);

/// Plain standard deviation (1/N) of the point-to-LINE distances from x.
double consistency_sigma_line(const LineBundle& bundle, const geom::Vec3& x);

/// Converging point plus both dispersion statistics. `sigma` follows the
/// origin-distance formula; `sigma_line` is the line-distance variant;
/// both are carried because they answer slightly different questions and
/// neither is privileged. `line_distances` are the per-line distances
/// from the converging point.
struct ConsistencyReport {
  geom::Vec3 converging = geom::Vec3::Zero();
  double sigma = 0.0;
  double sigma_line = 0.0;
  std::vector<double> line_distances;
};

ConsistencyReport evaluate_bundle(const LineBundle& bundle);

/// Extract each result's shaft center line (camera frame) and evaluate
/// their convergence. Needs >= 2 results.
ConsistencyReport rcm_experiment(
    const std::vector<optim::CalibrationResult>& results,
    const geom::RobotModel& model);

Json consistency_report_to_json(const ConsistencyReport& report);

}  // namespace silcal::rcm
