#include "support/naive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "silcal/common/errors.hpp"
#include "silcal/render/rasterizer.hpp"

namespace silcal::test_support {

Image<double> brute_force_distance_field(const BinaryMask& mask,
                                         double gamma_decay) {
  std::vector<std::pair<int, int>> on;
  for (int v = 0; v < mask.height(); ++v)
    for (int u = 0; u < mask.width(); ++u)
      if (mask.at(v, u)) on.emplace_back(v, u);
  if (on.empty()) throw EmptyMaskError("mask has no foreground pixels");

  Image<double> out(mask.height(), mask.width());
  for (int v = 0; v < mask.height(); ++v) {
    for (int u = 0; u < mask.width(); ++u) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [mv, mu] : on) {
        const double dv = v - mv;
        const double du = u - mu;
        best = std::min(best, dv * dv + du * du);
      }
      out.at(v, u) = std::sqrt(best) / gamma_decay;
    }
  }
  return out;
}

namespace {

double bundle_objective(const rcm::LineBundle& bundle, const geom::Vec3& x) {
  double total = 0.0;
  for (const auto& line : bundle.lines) {
    const double d = rcm::point_to_line_distance(x, line);
    total += d * d;
  }
  return total;
}

}  // namespace

geom::Vec3 brute_force_converging_point(const rcm::LineBundle& bundle,
                                        int sweeps) {
  geom::Vec3 x = geom::Vec3::Zero();
  for (const auto& line : bundle.lines) x += line.origin;
  x /= static_cast<double>(bundle.lines.size());

  double span = 1.0;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int axis = 0; axis < 3; ++axis) {
      double lo = x[axis] - span;
      double hi = x[axis] + span;
      for (int it = 0; it < 90; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        geom::Vec3 a = x;
        geom::Vec3 b = x;
        a[axis] = m1;
        b[axis] = m2;
        if (bundle_objective(bundle, a) < bundle_objective(bundle, b))
          hi = m2;
        else
          lo = m1;
      }
      x[axis] = 0.5 * (lo + hi);
    }
    span = std::max(span * 0.5, 1e-7);
  }
  return x;
}

namespace {

imgproc::PolarLine fit_line_tls(const std::vector<Eigen::Vector2d>& pts) {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& p : pts) {
    const Eigen::Vector2d d = p - mean;
    cov += d * d.transpose();
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  const Eigen::Vector2d normal = eig.eigenvectors().col(0);  // min variance
  return imgproc::normalize_polar_line(normal.dot(mean),
                                       std::atan2(normal.y(), normal.x()));
}

}  // namespace

std::pair<imgproc::PolarLine, imgproc::PolarLine> sampled_cylinder_outline(
    const geom::Vec3& p0, const geom::Vec3& axis_dir, double radius,
    double length, const geom::CameraIntrinsics& cam, int axial_stations,
    int angular_samples) {
  const geom::Vec3 d = axis_dir.normalized();
  geom::Vec3 seed = std::abs(d.z()) < 0.9 ? geom::Vec3::UnitZ()
                                          : geom::Vec3::UnitX();
  const geom::Vec3 e1 = (seed - seed.dot(d) * d).normalized();
  const geom::Vec3 e2 = d.cross(e1);

  // Image of the 3D axis as a polar line, from two projected axis points.
  const geom::Vec2 a0 = geom::project_point(cam, p0);
  const geom::Vec2 a1 = geom::project_point(cam, p0 + length * d);
  const Eigen::Vector2d axis_img = (a1 - a0).normalized();
  const Eigen::Vector2d axis_n(-axis_img.y(), axis_img.x());

  std::vector<Eigen::Vector2d> pos_side, neg_side;
  for (int i = 0; i < axial_stations; ++i) {
    const double t =
        length * (i + 0.5) / static_cast<double>(axial_stations);
    const geom::Vec3 center = p0 + t * d;
    Eigen::Vector2d best_pos, best_neg;
    double off_pos = -std::numeric_limits<double>::infinity();
    double off_neg = std::numeric_limits<double>::infinity();
    for (int k = 0; k < angular_samples; ++k) {
      const double phi = 2.0 * M_PI * k / angular_samples;
      const geom::Vec3 surf =
          center + radius * (std::cos(phi) * e1 + std::sin(phi) * e2);
      const geom::Vec2 px = geom::project_point(cam, surf);
      const double off = axis_n.dot(px - a0);
      if (off > off_pos) {
        off_pos = off;
        best_pos = px;
      }
      if (off < off_neg) {
        off_neg = off;
        best_neg = px;
      }
    }
    pos_side.push_back(best_pos);
    neg_side.push_back(best_neg);
  }
  return {fit_line_tls(pos_side), fit_line_tls(neg_side)};
}

std::pair<double, double> polar_line_difference(const imgproc::PolarLine& a,
                                                const imgproc::PolarLine& b) {
  const auto diff = [](const imgproc::PolarLine& x,
                       const imgproc::PolarLine& y) {
    return std::make_pair(std::abs(x.rho - y.rho),
                          std::abs(x.theta - y.theta));
  };
  const imgproc::PolarLine b_alt{-b.rho, b.theta + (b.theta < M_PI_2
                                                        ? M_PI
                                                        : -M_PI)};
  const auto d1 = diff(a, b);
  const auto d2 = diff(a, b_alt);
  return (d1.first + d1.second <= d2.first + d2.second) ? d1 : d2;
}

double naive_soft_coverage(
    const Eigen::Vector2d& pixel,
    const std::vector<std::array<Eigen::Vector2d, 3>>& triangles,
    const std::vector<double>& weights, double sigma) {
  double total = 0.0;
  for (std::size_t f = 0; f < triangles.size(); ++f) {
    const auto& tri = triangles[f];
    const double sd =
        render::signed_distance_to_triangle(pixel, tri[0], tri[1], tri[2]);
    total += weights[f] * render::soft_coverage_profile(sd, sigma);
  }
  return std::min(1.0, total);
}

}  // namespace silcal::test_support
