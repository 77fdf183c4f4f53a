#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "silcal/common/errors.hpp"
#include "silcal/geom/camera.hpp"
#include "silcal/geom/model_builder.hpp"
#include "silcal/geom/transform.hpp"
#include "silcal/render/rasterizer.hpp"
#include "support/naive.hpp"

namespace {

using silcal::geom::CameraIntrinsics;
using silcal::geom::JointState;
using silcal::geom::RigidTransform;
using silcal::geom::RobotModel;
using silcal::geom::Vec3;
using silcal::render::RenderSettings;
using silcal::render::Vec2;

/// One-link model holding a unit quad (two triangles) in the z = 0 plane,
/// wound so the +z-facing side is the front when viewed down +z.
RobotModel quad_model(double half) {
  RobotModel model;
  silcal::geom::Link link;
  link.name = "quad";
  link.joint_index = 0;
  link.axis = Vec3::UnitZ();
  link.mesh.vertices = {Vec3(-half, -half, 0), Vec3(half, -half, 0),
                        Vec3(half, half, 0), Vec3(-half, half, 0)};
  link.mesh.faces = {{0, 2, 1}, {0, 3, 2}};
  model.links.push_back(link);
  model.joint_count = 1;
  model.shaft_radius = 0.001;
  model.tips[0] = {0, Vec3::Zero()};
  model.tips[1] = {0, Vec3::Zero()};
  return model;
}

JointState joints1() {
  return JointState::with_default_mask(Eigen::VectorXd::Zero(1));
}

JointState psm_joints(double q0, double q1, double q2, double q3) {
  Eigen::VectorXd q(4);
  q << q0, q1, q2, q3;
  return JointState::with_default_mask(q);
}

CameraIntrinsics small_camera() {
  CameraIntrinsics cam;
  cam.fx = cam.fy = 100.0;
  cam.cu = 32.0;
  cam.cv = 32.0;
  cam.width = 64;
  cam.height = 64;
  return cam;
}

}  // namespace

TEST_SUITE("render") {

TEST_CASE("profile hits 0.5 at the outline and clamps at the band edges") {
  for (double sigma : {1.5, 3.0, 0.7}) {
    const double band = 3.6 * sigma;
    CHECK(silcal::render::soft_coverage_profile(0.0, sigma) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(silcal::render::soft_coverage_profile(band, sigma) == 0.0);
    CHECK(silcal::render::soft_coverage_profile(-band, sigma) == 1.0);
    CHECK(silcal::render::soft_coverage_profile(band + 10.0, sigma) == 0.0);
    CHECK(silcal::render::soft_coverage_profile(-band - 10.0, sigma) == 1.0);
    CHECK(silcal::render::soft_coverage_profile(band - 1e-9, sigma) > 0.0);
    CHECK(silcal::render::soft_coverage_profile(-band + 1e-9, sigma) < 1.0);
    // ~84% of the swing one sigma inside the outline (banded sigmoid with
    // the end values renormalized to exactly 0 and 1).
    CHECK(silcal::render::soft_coverage_profile(-sigma, sigma) ==
          doctest::Approx(0.8428262553946674).epsilon(1e-12));
  }
}

TEST_CASE("profile is a monotone partition of unity across the edge") {
  const double sigma = 2.0;
  double prev = 1.1;
  for (double d = -8.0; d <= 8.0; d += 0.05) {
    const double p = silcal::render::soft_coverage_profile(d, sigma);
    CHECK(p <= prev);  // non-increasing
    prev = p;
    const double q = silcal::render::soft_coverage_profile(-d, sigma);
    CHECK(p + q == doctest::Approx(1.0).epsilon(1e-13));
  }
  // Two faces sharing an edge: one sees +d, the other -d, summing to 1.
}

TEST_CASE("profile grows with sigma outside and shrinks inside") {
  for (double d : {0.5, 1.0, 2.0}) {
    CHECK(silcal::render::soft_coverage_profile(d, 2.0) >
          silcal::render::soft_coverage_profile(d, 1.0));
    CHECK(silcal::render::soft_coverage_profile(-d, 2.0) <
          silcal::render::soft_coverage_profile(-d, 1.0));
  }
}

TEST_CASE("signed distance to triangle: interior, edge, vertex, boundary") {
  // Clockwise in image coordinates (y down): inside is negative.
  const Vec2 a(0, 0), b(0, 4), c(4, 0);
  using silcal::render::signed_distance_to_triangle;
  CHECK(signed_distance_to_triangle(Vec2(1, 1), a, b, c) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(signed_distance_to_triangle(Vec2(-2, 1), a, b, c) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(signed_distance_to_triangle(Vec2(-3, -4), a, b, c) ==
        doctest::Approx(5.0).epsilon(1e-12));
  CHECK(signed_distance_to_triangle(Vec2(0, 2), a, b, c) == 0.0);
  CHECK(signed_distance_to_triangle(Vec2(3, 3), a, b, c) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // Degenerate (collinear) triangle falls back to segment distance.
  CHECK(signed_distance_to_triangle(Vec2(1, 3), Vec2(0, 0), Vec2(2, 0),
                                    Vec2(4, 0)) ==
        doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("soft render of a quad matches the per-pixel naive sum") {
  const RobotModel model = quad_model(0.1);
  const CameraIntrinsics cam = small_camera();
  RigidTransform pose;  // quad at z = 0.5, slightly rotated so edges are generic
  pose.rotation = silcal::geom::rotation_exp(Vec3(0.05, -0.04, 0.3));
  pose.translation = Vec3(0.01, -0.02, 0.5);
  RenderSettings settings;

  silcal::render::RenderGraph graph;
  const auto soft = silcal::render::render_scene(model, joints1(), pose, cam,
                                                 settings, false, &graph);

  // Rebuild the projected triangles independently of the graph bookkeeping.
  std::vector<std::array<Eigen::Vector2d, 3>> tris;
  std::vector<double> weights;
  for (const auto& face : model.links[0].mesh.faces) {
    std::array<Eigen::Vector2d, 3> px;
    for (int k = 0; k < 3; ++k)
      px[static_cast<std::size_t>(k)] = silcal::geom::project_point(
          cam, pose.apply(model.links[0].mesh.vertices[static_cast<std::size_t>(
                   face[static_cast<std::size_t>(k)])]));
    const double area2 =
        (px[1].x() - px[0].x()) * (px[2].y() - px[0].y()) -
        (px[1].y() - px[0].y()) * (px[2].x() - px[0].x());
    REQUIRE(area2 < 0.0);  // front-facing
    REQUIRE(-area2 > 8.0 * settings.sigma * settings.sigma);  // no fade
    tris.push_back(px);
    weights.push_back(1.0);
  }

  double worst = 0.0;
  for (int r = 0; r < cam.height; ++r)
    for (int c = 0; c < cam.width; ++c) {
      const double naive = silcal::test_support::naive_soft_coverage(
          Eigen::Vector2d(c, r), tris, weights, settings.sigma);
      worst = std::max(worst, std::abs(naive - soft.at(r, c)));
    }
  CHECK(worst < 1e-10);

  // The shared diagonal must not leave a seam: interior pixels away from the
  // outline saturate to exactly 1 (profile halves sum to 1, then clamp).
  const Eigen::Vector2d center = silcal::geom::project_point(cam, pose.translation);
  CHECK(soft.at(static_cast<int>(center.y()), static_cast<int>(center.x())) ==
        1.0);
}

TEST_CASE("hard render of the quad equals exact point-in-polygon coverage") {
  const RobotModel model = quad_model(0.08);
  const CameraIntrinsics cam = small_camera();
  RigidTransform pose;
  pose.rotation = silcal::geom::rotation_exp(Vec3(0.0, 0.0, 0.22));
  pose.translation = Vec3(0.013, 0.007, 0.41);
  const auto hard = silcal::render::render_hard(model, joints1(), pose, cam);

  std::array<Eigen::Vector2d, 4> corner;
  for (int k = 0; k < 4; ++k)
    corner[static_cast<std::size_t>(k)] = silcal::geom::project_point(
        cam, pose.apply(model.links[0].mesh.vertices[static_cast<std::size_t>(k)]));
  const auto inside_quad = [&](double x, double y) {
    // Convex polygon test, winding-insensitive: all cross products share sign.
    int pos = 0, neg = 0;
    for (int k = 0; k < 4; ++k) {
      const auto& p = corner[static_cast<std::size_t>(k)];
      const auto& q = corner[static_cast<std::size_t>((k + 1) % 4)];
      const double cr = (q.x() - p.x()) * (y - p.y()) - (q.y() - p.y()) * (x - p.x());
      if (cr > 0) ++pos;
      if (cr < 0) ++neg;
    }
    return pos == 0 || neg == 0;
  };
  for (int r = 0; r < cam.height; ++r)
    for (int c = 0; c < cam.width; ++c)
      CHECK((hard.at(r, c) != 0) == inside_quad(c, r));
}

TEST_CASE("full model render: range, saturation, determinism across threads") {
  const RobotModel model = silcal::geom::build_psm_model();
  const JointState q = psm_joints(0.3, 0.2, -0.15, 0.4);
  const RigidTransform pose = silcal::geom::look_at_transform(0.25, 1.0, -0.2, 0.12);
  CameraIntrinsics cam;
  RenderSettings settings;

  silcal::render::RenderGraph graph;
  const auto soft =
      silcal::render::render_scene(model, q, pose, cam, settings, false, &graph);
  int saturated = 0, empty = 0;
  for (int r = 0; r < cam.height; ++r)
    for (int c = 0; c < cam.width; ++c) {
      const double v = soft.at(r, c);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      CHECK(v == std::min(1.0, graph.raw.at(r, c)));
      saturated += v == 1.0;
      empty += v == 0.0;
    }
  CHECK(saturated > 1000);   // a real silhouette with interior
  CHECK(empty > 100000);     // most of the frame is background

  const auto parallel =
      silcal::render::render_soft(model, q, pose, cam, settings, true);
  for (int r = 0; r < cam.height; ++r)
    for (int c = 0; c < cam.width; ++c)
      CHECK(parallel.at(r, c) == soft.at(r, c));
}

TEST_CASE("render graph bookkeeping is self-consistent") {
  const RobotModel model = silcal::geom::build_psm_model();
  const JointState q = psm_joints(-0.4, 0.1, 0.25, 0.3);
  const RigidTransform pose = silcal::geom::look_at_transform(-0.2, 0.5, 0.3, 0.15);
  CameraIntrinsics cam;
  RenderSettings settings;
  silcal::render::RenderGraph graph;
  silcal::render::render_scene(model, q, pose, cam, settings, false, &graph);

  const auto fk = silcal::geom::forward_kinematics(model, q);
  REQUIRE(graph.link_poses.size() == fk.size());
  for (std::size_t li = 0; li < fk.size(); ++li) {
    CHECK((graph.link_poses[li].translation - fk[li].translation).norm() < 1e-14);
    for (std::size_t v = 0; v < graph.robot_verts[li].size(); ++v) {
      const Vec3 want = fk[li].apply(model.links[li].mesh.vertices[v]);
      CHECK((graph.robot_verts[li][v] - want).norm() < 1e-13);
      const Vec3 want_cam = pose.apply(want);
      CHECK((graph.cam_verts[li][v] - want_cam).norm() < 1e-13);
    }
  }
  for (const auto& f : graph.faces) {
    CHECK(f.weight > 0.0);
    CHECK(f.weight <= 1.0);
    CHECK(f.area2 < 0.0);   // culled to front faces
    CHECK(f.row0 >= 0);
    CHECK(f.row1 < cam.height);
    CHECK(f.col0 >= 0);
    CHECK(f.col1 < cam.width);
    CHECK(f.row0 <= f.row1);
    CHECK(f.col0 <= f.col1);
    for (int k = 0; k < 3; ++k)
      CHECK(f.cam[static_cast<std::size_t>(k)].z() >=
            settings.near_plane - 1e-12);
  }
}

TEST_CASE("soft silhouette moves continuously with the pose") {
  const RobotModel model = silcal::geom::build_psm_model();
  const JointState q = psm_joints(0.1, -0.2, 0.3, 0.35);
  CameraIntrinsics cam;
  RenderSettings settings;
  const auto base = silcal::render::render_soft(
      model, q, silcal::geom::look_at_transform(0.3, -0.8, 0.1, 0.14), cam,
      settings, false);
  const auto nudged = silcal::render::render_soft(
      model, q, silcal::geom::look_at_transform(0.3 + 1e-6, -0.8, 0.1, 0.14),
      cam, settings, false);
  double worst = 0.0;
  for (int r = 0; r < cam.height; ++r)
    for (int c = 0; c < cam.width; ++c)
      worst = std::max(worst, std::abs(base.at(r, c) - nudged.at(r, c)));
  CHECK(worst < 1e-3);
  CHECK(worst > 0.0);  // the nudge is visible, just small
}

TEST_CASE("near-plane clipping keeps close poses renderable") {
  const RobotModel model = silcal::geom::build_psm_model();
  const JointState q = psm_joints(0.0, 0.1, 0.1, 0.3);
  // Standoff shorter than the shaft: most of the shaft sits behind the camera.
  const RigidTransform pose = silcal::geom::look_at_transform(0.1, 0.0, 0.05, 0.02);
  CameraIntrinsics cam;
  RenderSettings settings;
  silcal::render::RenderGraph graph;
  const auto soft =
      silcal::render::render_scene(model, q, pose, cam, settings, false, &graph);
  double total = 0.0;
  for (int r = 0; r < cam.height; ++r)
    for (int c = 0; c < cam.width; ++c) {
      CHECK(std::isfinite(soft.at(r, c)));
      total += soft.at(r, c);
    }
  CHECK(total > 0.0);
  for (const auto& f : graph.faces)
    for (int k = 0; k < 3; ++k)
      CHECK(f.cam[static_cast<std::size_t>(k)].z() >=
            settings.near_plane - 1e-12);
}

TEST_CASE("edge-on faces fade instead of flickering") {
  const RobotModel model = quad_model(0.1);
  const CameraIntrinsics cam = small_camera();
  RenderSettings settings;
  // Rotate the quad nearly edge-on about x; the projection is a sliver.
  RigidTransform pose;
  pose.rotation = silcal::geom::rotation_exp(Vec3(M_PI / 2.0 - 0.004, 0.0, 0.0));
  pose.translation = Vec3(0.0, 0.0, 0.5);
  silcal::render::RenderGraph graph;
  const auto soft = silcal::render::render_scene(model, joints1(), pose, cam,
                                                 settings, false, &graph);
  double peak = 0.0;
  for (int r = 0; r < cam.height; ++r)
    for (int c = 0; c < cam.width; ++c) peak = std::max(peak, soft.at(r, c));
  if (!graph.faces.empty()) {
    double wmax = 0.0;
    for (const auto& f : graph.faces) {
      CHECK(f.weight < 1.0);
      wmax = std::max(wmax, f.weight);
    }
    CHECK(peak <= 2.0 * wmax + 1e-12);
  }
  CHECK(peak < 1.0);
}

TEST_CASE("faceless models are rejected") {
  RobotModel model = quad_model(0.1);
  model.links[0].mesh = silcal::geom::TriangleMesh{};
  CHECK_THROWS_AS(
      silcal::render::render_soft(model, joints1(), RigidTransform::identity(),
                                  small_camera(), RenderSettings{}, false),
      silcal::InvalidParameterError);
}

TEST_CASE("render settings validate") {
  RenderSettings s;
  s.sigma = 0.0;
  CHECK_THROWS_AS(s.validate(), silcal::InvalidParameterError);
  s = RenderSettings{};
  s.near_plane = -1.0;
  CHECK_THROWS_AS(s.validate(), silcal::InvalidParameterError);
}

}  // TEST_SUITE
