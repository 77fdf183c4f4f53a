#include "silcal/rcm/consistency.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "silcal/common/errors.hpp"
#include "silcal/loss/cylinder_edges.hpp"

namespace silcal::rcm {

namespace {

constexpr double kMaxCondition = 1e8;

}  // namespace

void LineBundle::validate() const {
  if (lines.empty())
    throw InvalidParameterError("line bundle must contain at least one line");
  for (const Line3& l : lines) {
    if (std::abs(l.dir.norm() - 1.0) > 1e-9)
      throw InvalidParameterError("line direction must be unit length");
  }
}

double point_to_line_distance(const geom::Vec3& p, const Line3& line) {
  const geom::Vec3 rel = p - line.origin;
  return (rel - rel.dot(line.dir) * line.dir).norm();
}

geom::Vec3 converging_point(const LineBundle& bundle) {
  bundle.validate();
  if (bundle.lines.size() < 2)
    throw InvalidParameterError(
        "converging point needs at least two lines");

  geom::Mat3 A = static_cast<double>(bundle.lines.size()) *
                 geom::Mat3::Identity();
  geom::Vec3 b = geom::Vec3::Zero();
  for (const Line3& l : bundle.lines) {
    const geom::Mat3 proj =
        geom::Mat3::Identity() - l.dir * l.dir.transpose();
    A -= l.dir * l.dir.transpose();
    b += proj * l.origin;
  }

  // A is symmetric positive semi-definite; its eigenvalue ratio is the
  // condition number that decides whether the bundle pins down a point.
  Eigen::SelfAdjointEigenSolver<geom::Mat3> eig(A);
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(2);
  const double cond = lo > 0.0 ? hi / lo
                               : std::numeric_limits<double>::infinity();
  if (!(cond < kMaxCondition)) {
    std::ostringstream msg;
    msg << "line bundle is too close to parallel for a converging point "
           "(condition number "
        << cond << ")";
    throw SingularBundleError(msg.str(), cond);
  }
  return A.ldlt().solve(b);
}

double consistency_sigma(const LineBundle& bundle, const geom::Vec3& x) {
  bundle.validate();
  const double n = static_cast<double>(bundle.lines.size());
  geom::Vec3 mean_origin = geom::Vec3::Zero();
  for (const Line3& l : bundle.lines) mean_origin += l.origin;
  mean_origin /= n;
  const double r_bar = (mean_origin - x).norm();
  double acc = 0.0;
  for (const Line3& l : bundle.lines) {
    const double r = (l.origin - x).norm();
    acc += (r - r_bar) * (r - r_bar);
  }
  return std::sqrt(acc / n);
}

double consistency_sigma_line(const LineBundle& bundle, const geom::Vec3& x) {
  bundle.validate();
  const double n = static_cast<double>(bundle.lines.size());
  double mean = 0.0;
  for (const Line3& l : bundle.lines) mean += point_to_line_distance(x, l);
  mean /= n;
  double acc = 0.0;
  for (const Line3& l : bundle.lines) {
    const double d = point_to_line_distance(x, l);
    acc += (d - mean) * (d - mean);
  }
  return std::sqrt(acc / n);
}

ConsistencyReport evaluate_bundle(const LineBundle& bundle) {
  ConsistencyReport report;
  report.converging = converging_point(bundle);
  report.sigma = consistency_sigma(bundle, report.converging);
  report.sigma_line = consistency_sigma_line(bundle, report.converging);
  report.line_distances.reserve(bundle.lines.size());
  for (const Line3& l : bundle.lines)
    report.line_distances.push_back(
        point_to_line_distance(report.converging, l));
  return report;
}

ConsistencyReport rcm_experiment(
    const std::vector<optim::CalibrationResult>& results,
    const geom::RobotModel& model) {
  if (results.size() < 2)
    throw InvalidParameterError("RCM experiment needs at least two results");
  LineBundle bundle;
  bundle.lines.reserve(results.size());
  for (const optim::CalibrationResult& r : results) {
    const loss::Cylinder cyl =
        loss::shaft_cylinder(model, r.joints, r.camera_from_robot);
    bundle.lines.push_back({cyl.p0, cyl.dir});
  }
  return evaluate_bundle(bundle);
}

Json consistency_report_to_json(const ConsistencyReport& report) {
  return Json{{"schema_version", 1},
              {"artifact", "consistency_report"},
              {"converging_point",
               {report.converging[0], report.converging[1],
                report.converging[2]}},
              {"sigma", report.sigma},
              {"sigma_line", report.sigma_line},
              {"line_distances", report.line_distances}};
}

}  // namespace silcal::rcm
