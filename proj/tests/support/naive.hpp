#pragma once

// Slow, independent reference implementations the tests compare the library
// kernels against. Each re-derives its result from first principles with a
// different algorithm than the production code.

#include <array>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "silcal/common/image.hpp"
#include "silcal/geom/camera.hpp"
#include "silcal/geom/robot.hpp"
#include "silcal/geom/transform.hpp"
#include "silcal/imgproc/polar_line.hpp"
#include "silcal/rcm/consistency.hpp"

namespace silcal::test_support {

/// O(HW * |mask|) distance transform: per pixel, scan every mask pixel.
/// Values divided by gamma_decay to match the production field.
Image<double> brute_force_distance_field(const BinaryMask& mask,
                                         double gamma_decay);

/// Minimize sum of squared point-to-line distances by cyclic coordinate
/// ternary search (no linear algebra shared with the closed form).
geom::Vec3 brute_force_converging_point(const rcm::LineBundle& bundle,
                                        int sweeps = 120);

/// Silhouette outline of a cylinder by exhaustive surface sampling: project
/// a dense grid of surface points, per axial station keep the two points
/// with extreme perpendicular offset from the projected axis, and fit one
/// total-least-squares line per side. Returns the two lines; pairing with
/// the analytic pair is up to the caller.
std::pair<imgproc::PolarLine, imgproc::PolarLine> sampled_cylinder_outline(
    const geom::Vec3& p0, const geom::Vec3& axis_dir, double radius,
    double length, const geom::CameraIntrinsics& cam, int axial_stations,
    int angular_samples);

/// Difference between two polar lines as (|d_rho| px, |d_theta| rad),
/// minimized over the (rho, theta) ~ (-rho, theta + pi) ambiguity.
std::pair<double, double> polar_line_difference(const imgproc::PolarLine& a,
                                                const imgproc::PolarLine& b);

/// Soft coverage at one pixel straight from the definition: loop over every
/// projected front-facing triangle of the given vertex/face lists, no
/// blocking, no early outs. Used to probe single pixels of small scenes.
double naive_soft_coverage(
    const Eigen::Vector2d& pixel,
    const std::vector<std::array<Eigen::Vector2d, 3>>& triangles,
    const std::vector<double>& weights, double sigma);

}  // namespace silcal::test_support
