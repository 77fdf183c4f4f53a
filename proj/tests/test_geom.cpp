#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include "silcal/common/errors.hpp"
#include "silcal/geom/camera.hpp"
#include "silcal/geom/rotation.hpp"
#include "silcal/geom/transform.hpp"

namespace {

using silcal::geom::Axis;
using silcal::geom::Mat3;
using silcal::geom::RigidTransform;
using silcal::geom::Vec2;
using silcal::geom::Vec3;

/// Fully expanded form of the candidate-pose rotation Ry(g) * Rx(a) * Rz(b),
/// written out in scalar trig products as an independent cross-check.
Mat3 expanded_look_at_rotation(double a, double b, double g) {
  const double ca = std::cos(a), sa = std::sin(a);
  const double cb = std::cos(b), sb = std::sin(b);
  const double cg = std::cos(g), sg = std::sin(g);
  Mat3 m;
  m << cg * cb + sg * sa * sb, -cg * sb + sg * sa * cb, sg * ca,
       ca * sb,                ca * cb,                 -sa,
       -sg * cb + cg * sa * sb, sg * sb + cg * sa * cb, cg * ca;
  return m;
}

}  // namespace

TEST_SUITE("geom") {

TEST_CASE("rotation_about_axis matches Eigen AngleAxis") {
  const Vec3 units[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  const Axis axes[3] = {Axis::X, Axis::Y, Axis::Z};
  for (int i = 0; i < 3; ++i) {
    for (double ang : {-2.5, -0.7, 0.0, 0.3, 1.0, 3.1}) {
      const Mat3 got = silcal::geom::rotation_about_axis(axes[i], ang);
      const Mat3 want = Eigen::AngleAxisd(ang, units[i]).toRotationMatrix();
      CHECK((got - want).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("rotation_exp matches Eigen AngleAxis over random axis-angle vectors") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Vec3 w(u(rng), u(rng), u(rng));
    w *= std::pow(10.0, -6.0 * std::abs(u(rng)));  // magnitudes 1e-6 .. ~1.7
    if (i % 4 == 0) w *= 3.0;                       // push some past pi / 2
    const double ang = w.norm();
    Mat3 want = Mat3::Identity();
    if (ang > 0.0) want = Eigen::AngleAxisd(ang, (w / ang).eval()).toRotationMatrix();
    const Mat3 got = silcal::geom::rotation_exp(w);
    worst = std::max(worst, (got - want).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("rotation_exp basic identities") {
  CHECK((silcal::geom::rotation_exp(Vec3::Zero()) - Mat3::Identity())
            .cwiseAbs()
            .maxCoeff() == 0.0);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 50; ++i) {
    const Vec3 w(u(rng), u(rng), u(rng));
    const Mat3 r = silcal::geom::rotation_exp(w);
    CHECK((r * r.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    const Mat3 rinv = silcal::geom::rotation_exp((-w).eval());
    CHECK((rinv - r.transpose()).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("right Jacobian is identity at zero and first-order consistent") {
  const Mat3 j0 = silcal::geom::rotation_right_jacobian(Vec3::Zero());
  CHECK((j0 - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  // exp(w + dw) ~ exp(w) * exp(Jr(w) dw): the residual angle must shrink
  // quadratically in |dw|.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const Vec3 w(u(rng), u(rng), u(rng));
    const Vec3 dir = Vec3(u(rng), u(rng), u(rng)).normalized();
    const Mat3 jr = silcal::geom::rotation_right_jacobian(w);
    // Step large enough that the quadratic remainder dominates the acos
    // resolution floor (~2e-8) of the angle metric.
    const double h = 1e-4;
    const Vec3 dw = h * dir;
    const Mat3 lhs = silcal::geom::rotation_exp(w + dw);
    const Mat3 rhs =
        silcal::geom::rotation_exp(w) * silcal::geom::rotation_exp((jr * dw).eval());
    CHECK(silcal::geom::rotation_angle_between(lhs, rhs) < 1e-6);
  }
}

TEST_CASE("rotation_angle_between recovers axis-rotation deltas") {
  const Mat3 a = silcal::geom::rotation_about_axis(Axis::Z, 0.4);
  const Mat3 b = silcal::geom::rotation_about_axis(Axis::Z, 1.9);
  CHECK(silcal::geom::rotation_angle_between(a, b) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(silcal::geom::rotation_angle_between(b, a) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(silcal::geom::rotation_angle_between(a, a) == doctest::Approx(0.0).epsilon(1e-12));
  const Mat3 half = silcal::geom::rotation_about_axis(Axis::X, M_PI);
  CHECK(silcal::geom::rotation_angle_between(Mat3::Identity(), half) ==
        doctest::Approx(M_PI).epsilon(1e-9));
}

TEST_CASE("RigidTransform compose, inverse, and homogeneous matrix agree") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    RigidTransform t;
    t.rotation = silcal::geom::rotation_exp(Vec3(u(rng), u(rng), u(rng)));
    t.translation = Vec3(u(rng), u(rng), u(rng));
    RigidTransform s;
    s.rotation = silcal::geom::rotation_exp(Vec3(u(rng), u(rng), u(rng)));
    s.translation = Vec3(u(rng), u(rng), u(rng));
    const Vec3 x(u(rng), u(rng), u(rng));

    const RigidTransform id = t.compose(t.inverse());
    CHECK((id.rotation - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(id.translation.cwiseAbs().maxCoeff() < 1e-13);

    CHECK(((t * s).apply(x) - t.apply(s.apply(x))).cwiseAbs().maxCoeff() < 1e-13);

    const auto m = t.matrix_row_major();
    const Vec3 y = t.apply(x);
    for (int r = 0; r < 3; ++r) {
      const double yr = m[static_cast<std::size_t>(4 * r)] * x.x() +
                        m[static_cast<std::size_t>(4 * r + 1)] * x.y() +
                        m[static_cast<std::size_t>(4 * r + 2)] * x.z() +
                        m[static_cast<std::size_t>(4 * r + 3)];
      CHECK(yr == doctest::Approx(y[r]).epsilon(1e-12));
    }
    CHECK(m[12] == 0.0);
    CHECK(m[13] == 0.0);
    CHECK(m[14] == 0.0);
    CHECK(m[15] == 1.0);
  }
}

TEST_CASE("look_at_transform equals factored axis product and expanded trig form") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ua(-1.2, 1.2);
  std::uniform_real_distribution<double> ub(-M_PI, M_PI);
  std::uniform_real_distribution<double> ud(0.05, 0.3);
  for (int i = 0; i < 200; ++i) {
    const double a = ua(rng), b = ub(rng), g = ua(rng), d = ud(rng);
    const RigidTransform t = silcal::geom::look_at_transform(a, b, g, d);
    const Mat3 factored = silcal::geom::rotation_about_axis(Axis::Y, g) *
                          silcal::geom::rotation_about_axis(Axis::X, a) *
                          silcal::geom::rotation_about_axis(Axis::Z, b);
    CHECK((t.rotation - factored).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((t.rotation - expanded_look_at_rotation(a, b, g)).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK(t.translation.x() == 0.0);
    CHECK(t.translation.y() == 0.0);
    CHECK(t.translation.z() == doctest::Approx(d).epsilon(1e-15));
  }
  CHECK_THROWS_AS(silcal::geom::look_at_transform(0, 0, 0, 0.0),
                  silcal::InvalidParameterError);
  CHECK_THROWS_AS(silcal::geom::look_at_transform(0, 0, 0, -0.1),
                  silcal::InvalidParameterError);
}

TEST_CASE("project_point pinhole arithmetic and behind-camera guard") {
  silcal::geom::CameraIntrinsics cam;  // fx = fy = 800, cu = 320, cv = 240
  const Vec2 px = silcal::geom::project_point(cam, Vec3(0.1, -0.05, 0.5));
  CHECK(px.x() == doctest::Approx(480.0).epsilon(1e-12));
  CHECK(px.y() == doctest::Approx(160.0).epsilon(1e-12));
  CHECK_THROWS_AS(silcal::geom::project_point(cam, Vec3(0, 0, 0)),
                  silcal::BehindCameraError);
  CHECK_THROWS_AS(silcal::geom::project_point(cam, Vec3(0.1, 0.1, -0.2)),
                  silcal::BehindCameraError);
}

TEST_CASE("back_project inverts projection up to depth") {
  silcal::geom::CameraIntrinsics cam;
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> uu(0.0, 640.0);
  std::uniform_real_distribution<double> uv(0.0, 480.0);
  std::uniform_real_distribution<double> uz(0.05, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double u = uu(rng), v = uv(rng), z = uz(rng);
    const Vec3 ray = silcal::geom::back_project(cam, u, v);
    CHECK(ray.z() == 1.0);
    const Vec2 px = silcal::geom::project_point(cam, (z * ray).eval());
    CHECK(px.x() == doctest::Approx(u).epsilon(1e-10));
    CHECK(px.y() == doctest::Approx(v).epsilon(1e-10));
  }
}

}  // TEST_SUITE
