#include <doctest.h>

#include <cmath>
#include <random>

#include "silcal/common/errors.hpp"
#include "silcal/geom/model_builder.hpp"
#include "silcal/geom/transform.hpp"
#include "silcal/imgproc/canny.hpp"
#include "silcal/imgproc/distance_field.hpp"
#include "silcal/imgproc/hough.hpp"
#include "silcal/optim/objective.hpp"
#include "silcal/render/gradient.hpp"
#include "silcal/render/rasterizer.hpp"

namespace {

using silcal::geom::CameraIntrinsics;
using silcal::geom::JointState;
using silcal::geom::RigidTransform;
using silcal::geom::RobotModel;
using silcal::geom::Vec3;
using silcal::render::RenderSettings;

CameraIntrinsics small_camera() {
  CameraIntrinsics cam;
  cam.fx = cam.fy = 120.0;
  cam.cu = 48.0;
  cam.cv = 48.0;
  cam.width = 96;
  cam.height = 96;
  return cam;
}

JointState psm_joints(double q0, double q1, double q2, double q3) {
  Eigen::VectorXd q(4);
  q << q0, q1, q2, q3;
  return JointState::with_default_mask(q);
}

double weighted_sum(const silcal::SoftSilhouette& s,
                    const silcal::Image<double>& w) {
  double acc = 0.0;
  for (int r = 0; r < s.height(); ++r)
    for (int c = 0; c < s.width(); ++c) acc += s.at(r, c) * w.at(r, c);
  return acc;
}

}  // namespace

TEST_SUITE("gradient") {

TEST_CASE("backward_render matches finite differences of the weighted sum") {
  const RobotModel model = silcal::geom::build_psm_model();
  const CameraIntrinsics cam = small_camera();
  RenderSettings settings;
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  for (int trial = 0; trial < 3; ++trial) {
    const JointState joints = psm_joints(1.5 * u(rng), 0.4 * u(rng),
                                         0.4 * u(rng), 0.35 + 0.2 * u(rng));
    const RigidTransform pose = silcal::geom::look_at_transform(
        0.35 * u(rng), 2.5 * u(rng), 0.35 * u(rng), 0.16 + 0.04 * u(rng));

    silcal::Image<double> dl(cam.height, cam.width, 0.0);
    for (int r = 0; r < cam.height; ++r)
      for (int c = 0; c < cam.width; ++c) dl.at(r, c) = u(rng);

    silcal::render::RenderGraph graph;
    silcal::render::render_scene(model, joints, pose, cam, settings, false,
                                 &graph);
    const Eigen::VectorXd grad = silcal::render::backward_render(
        graph, model, joints, dl, Vec3::Zero(), false);
    REQUIRE(grad.size() == 6 + model.joint_count);

    // Chart: rotation = exp(omega) * R0 around the current pose.
    const auto eval = [&](const Vec3& omega, const Vec3& t,
                          const Eigen::VectorXd& q) {
      RigidTransform p;
      p.rotation = silcal::geom::rotation_exp(omega) * pose.rotation;
      p.translation = t;
      JointState js = joints;
      js.q = q;
      const auto soft =
          silcal::render::render_soft(model, js, p, cam, settings, false);
      return weighted_sum(soft, dl);
    };

    const double h = 1e-6;
    double worst_rel = 0.0;
    for (int i = 0; i < grad.size(); ++i) {
      Vec3 omega = Vec3::Zero();
      Vec3 t = pose.translation;
      Eigen::VectorXd q = joints.q;
      double* slot = i < 3   ? &omega[i]
                     : i < 6 ? &t[i - 3]
                             : &q[i - 6];
      const double step = i >= 3 && i < 6 ? 1e-7 : h;
      *slot += step;
      const double hi = eval(omega, t, q);
      *slot -= 2.0 * step;
      const double lo = eval(omega, t, q);
      const double fd = (hi - lo) / (2.0 * step);
      const double denom = std::max({std::abs(fd), std::abs(grad[i]), 1e-4});
      worst_rel = std::max(worst_rel, std::abs(fd - grad[i]) / denom);
    }
    CHECK(worst_rel < 5e-3);
  }
}

TEST_CASE("backward_render honours a non-trivial chart point") {
  // Same pose expressed as exp(omega)*R0 with omega != 0: the FD in that
  // chart must match the analytic gradient evaluated with the same omega.
  const RobotModel model = silcal::geom::build_psm_model();
  const CameraIntrinsics cam = small_camera();
  RenderSettings settings;
  const JointState joints = psm_joints(0.4, 0.15, -0.2, 0.5);
  const Vec3 omega0(0.2, -0.35, 0.12);
  const silcal::geom::Mat3 r0 =
      silcal::geom::rotation_about_axis(silcal::geom::Axis::Y, 0.8);
  RigidTransform pose;
  pose.rotation = silcal::geom::rotation_exp(omega0) * r0;
  pose.translation = Vec3(0.01, -0.005, 0.17);

  silcal::Image<double> dl(cam.height, cam.width, 0.0);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int r = 0; r < cam.height; ++r)
    for (int c = 0; c < cam.width; ++c) dl.at(r, c) = u(rng);

  silcal::render::RenderGraph graph;
  silcal::render::render_scene(model, joints, pose, cam, settings, false,
                               &graph);
  const Eigen::VectorXd grad =
      silcal::render::backward_render(graph, model, joints, dl, omega0, false);

  const double h = 1e-6;
  for (int i = 0; i < 3; ++i) {
    Vec3 w = omega0;
    w[i] += h;
    RigidTransform p_hi;
    p_hi.rotation = silcal::geom::rotation_exp(w) * r0;
    p_hi.translation = pose.translation;
    w[i] -= 2.0 * h;
    RigidTransform p_lo;
    p_lo.rotation = silcal::geom::rotation_exp(w) * r0;
    p_lo.translation = pose.translation;
    const double hi = weighted_sum(
        silcal::render::render_soft(model, joints, p_hi, cam, settings, false), dl);
    const double lo = weighted_sum(
        silcal::render::render_soft(model, joints, p_lo, cam, settings, false), dl);
    const double fd = (hi - lo) / (2.0 * h);
    const double denom = std::max({std::abs(fd), std::abs(grad[i]), 1e-4});
    CHECK(std::abs(fd - grad[i]) / denom < 5e-3);
  }
}

TEST_CASE("backward_render serial and parallel agree bitwise") {
  const RobotModel model = silcal::geom::build_psm_model();
  const CameraIntrinsics cam = small_camera();
  RenderSettings settings;
  const JointState joints = psm_joints(-0.6, 0.25, 0.1, 0.45);
  const RigidTransform pose = silcal::geom::look_at_transform(0.2, 1.3, -0.25, 0.15);
  silcal::Image<double> dl(cam.height, cam.width, 0.0);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int r = 0; r < cam.height; ++r)
    for (int c = 0; c < cam.width; ++c) dl.at(r, c) = u(rng);
  silcal::render::RenderGraph graph;
  silcal::render::render_scene(model, joints, pose, cam, settings, false, &graph);
  const Eigen::VectorXd a =
      silcal::render::backward_render(graph, model, joints, dl, Vec3::Zero(), false);
  const Eigen::VectorXd b =
      silcal::render::backward_render(graph, model, joints, dl, Vec3::Zero(), true);
  for (int i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("loss_gradient is exact on quadratics and validates input") {
  Eigen::Matrix3d A;
  A << 4.0, 1.0, 0.0, 1.0, 3.0, -0.5, 0.0, -0.5, 2.0;
  const Eigen::Vector3d b(0.3, -1.1, 0.7);
  const auto f = [&](const Eigen::VectorXd& x) {
    return (0.5 * x.transpose() * A * x + b.transpose() * x).value();
  };
  const Eigen::VectorXd x0 = Eigen::Vector3d(0.4, -0.2, 1.3);
  Eigen::VectorXd steps = Eigen::Vector3d(1e-4, 1e-5, 1e-3);
  const Eigen::VectorXd g = silcal::render::loss_gradient(x0, f, steps);
  const Eigen::VectorXd want = A * x0 + b;
  CHECK((g - want).cwiseAbs().maxCoeff() < 1e-7);

  Eigen::VectorXd bad_steps = Eigen::Vector2d(1e-4, 1e-4);
  CHECK_THROWS_AS(silcal::render::loss_gradient(x0, f, bad_steps),
                  silcal::InvalidParameterError);
  steps[1] = 0.0;
  CHECK_THROWS_AS(silcal::render::loss_gradient(x0, f, steps),
                  silcal::InvalidParameterError);

  const auto nan_at_base = [](const Eigen::VectorXd&) {
    return std::numeric_limits<double>::quiet_NaN();
  };
  try {
    silcal::render::loss_gradient(x0, nan_at_base, Eigen::Vector3d(1e-4, 1e-4, 1e-4));
    FAIL("expected NonFiniteLossError");
  } catch (const silcal::NonFiniteLossError& e) {
    CHECK(e.param_index == -1);
  }
  const auto nan_off_center = [&](const Eigen::VectorXd& x) {
    return x[1] == x0[1] ? 1.0 : std::numeric_limits<double>::quiet_NaN();
  };
  try {
    silcal::render::loss_gradient(x0, nan_off_center,
                                  Eigen::Vector3d(1e-4, 1e-4, 1e-4));
    FAIL("expected NonFiniteLossError");
  } catch (const silcal::NonFiniteLossError& e) {
    CHECK(e.param_index == 1);
  }
}

TEST_CASE("objective gradient matches the documented helper at moderate range") {
  // Full-frame objective at a comfortable standoff, verified with the
  // published step sizes (1e-4 rad, 1e-5 m).
  const RobotModel model = silcal::geom::build_psm_model();
  CameraIntrinsics cam;
  RenderSettings settings;
  settings.sigma = 3.0;  // wider falloff keeps the FD stencil inside the
                         // smooth part of the profile at these step sizes
  const RigidTransform truth = silcal::geom::look_at_transform(0.3, 0.9, -0.2, 0.2);
  const JointState jtruth = psm_joints(0.5, 0.1, -0.2, 0.4);
  const auto mask =
      silcal::render::render_hard(model, jtruth, truth, cam, settings.near_plane, false);

  silcal::optim::SceneRefs refs;
  refs.mask = mask;
  silcal::loss::LossWeights weights;
  refs.dist = silcal::imgproc::distance_field(mask, weights.gamma_decay, false);
  refs.lines = silcal::imgproc::hough_two_lines(silcal::imgproc::canny_edges(mask),
                                                false);

  // Evaluate slightly off the truth so every term is active.
  const RigidTransform pose = silcal::geom::look_at_transform(0.32, 0.88, -0.21, 0.198);
  const JointState joints = psm_joints(0.5, 0.12, -0.18, 0.42);
  silcal::optim::SceneObjective obj(model, cam, joints, refs, weights, settings);
  silcal::optim::PoseChart chart;
  chart.R0 = pose.rotation;
  const Eigen::VectorXd params = obj.pack(pose, joints.q);

  Eigen::VectorXd analytic(params.size());
  obj.evaluate_with_gradient(chart, params, &analytic, false);

  Eigen::VectorXd steps(params.size());
  for (int i = 0; i < params.size(); ++i)
    steps[i] = i >= 3 && i < 6 ? 1e-5 : 1e-4;
  const Eigen::VectorXd fd = silcal::render::loss_gradient(
      params,
      [&](const Eigen::VectorXd& p) { return obj.evaluate(chart, p, false); },
      steps);

  // A component allowed to retry at smaller steps: truncation error of the
  // difference stencil shrinks quadratically, a wrong analytic value stays.
  const auto rel_err = [&](int i, double fd_i) {
    return std::abs(fd_i - analytic[i]) /
           std::max({std::abs(fd_i), std::abs(analytic[i]), 1e-6});
  };
  for (int i = 0; i < params.size(); ++i) {
    double err = rel_err(i, fd[i]);
    for (double shrink : {0.25, 0.0625}) {
      if (err < 1e-3) break;
      Eigen::VectorXd p = params;
      const double h = steps[i] * shrink;
      p[i] = params[i] + h;
      const double hi = obj.evaluate(chart, p, false);
      p[i] = params[i] - h;
      const double lo = obj.evaluate(chart, p, false);
      err = rel_err(i, (hi - lo) / (2.0 * h));
    }
    CHECK(err < 1e-3);
  }
}

}  // TEST_SUITE
