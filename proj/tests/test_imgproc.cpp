#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "silcal/common/errors.hpp"
#include "silcal/imgproc/canny.hpp"
#include "silcal/imgproc/distance_field.hpp"
#include "silcal/imgproc/hough.hpp"
#include "silcal/imgproc/mask_io.hpp"
#include "support/naive.hpp"

namespace {

using silcal::BinaryMask;
using silcal::Image;

std::string tmp_path(const std::string& name) {
  return "/tmp/silcal_imgproc_" + name;
}

BinaryMask random_mask(int h, int w, double density, std::uint64_t seed) {
  BinaryMask m(h, w, 0);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution b(density);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) m.at(r, c) = b(rng) ? 1 : 0;
  return m;
}

BinaryMask rect_mask(int h, int w, int r0, int r1, int c0, int c1) {
  BinaryMask m(h, w, 0);
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) m.at(r, c) = 1;
  return m;
}

bool masks_equal(const BinaryMask& a, const BinaryMask& b) {
  if (a.height() != b.height() || a.width() != b.width()) return false;
  for (int r = 0; r < a.height(); ++r)
    for (int c = 0; c < a.width(); ++c)
      if ((a.at(r, c) != 0) != (b.at(r, c) != 0)) return false;
  return true;
}

}  // namespace

TEST_SUITE("imgproc") {

TEST_CASE("mask save/load roundtrip for png and pgm") {
  const BinaryMask m = random_mask(23, 31, 0.4, 77);
  for (const char* ext : {"rt.png", "rt.pgm"}) {
    const std::string path = tmp_path(ext);
    silcal::imgproc::save_mask(m, path);
    const BinaryMask back = silcal::imgproc::load_mask(path);
    CHECK(masks_equal(m, back));
    std::remove(path.c_str());
  }
}

TEST_CASE("load_mask thresholds at >127") {
  Image<std::uint8_t> gray(2, 2, 0);
  gray.at(0, 0) = 127;
  gray.at(0, 1) = 128;
  gray.at(1, 0) = 0;
  gray.at(1, 1) = 255;
  const std::string path = tmp_path("thresh.png");
  silcal::imgproc::save_gray8_png(gray, path);
  const BinaryMask m = silcal::imgproc::load_mask(path);
  CHECK(m.at(0, 0) == 0);
  CHECK(m.at(0, 1) == 1);
  CHECK(m.at(1, 0) == 0);
  CHECK(m.at(1, 1) == 1);
  std::remove(path.c_str());
}

TEST_CASE("load_mask failure modes") {
  CHECK_THROWS_WITH_AS(
      silcal::imgproc::load_mask("/tmp/silcal_does_not_exist_479.png"),
      doctest::Contains("/tmp/silcal_does_not_exist_479.png"),
      silcal::ImageIoError);

  silcal::imgproc::RgbImage rgb(4, 4, {std::uint8_t{9}, std::uint8_t{9}, std::uint8_t{9}});
  const std::string path = tmp_path("rgb.png");
  silcal::imgproc::save_rgb_png(rgb, path);
  CHECK_THROWS_WITH_AS(silcal::imgproc::load_mask(path),
                       doctest::Contains("3"), silcal::ImageIoError);
  std::remove(path.c_str());
}

TEST_CASE("distance field matches the brute-force scan") {
  std::mt19937_64 rng(2025);
  for (int trial = 0; trial < 6; ++trial) {
    const int h = 17 + static_cast<int>(rng() % 20);
    const int w = 13 + static_cast<int>(rng() % 24);
    BinaryMask m = random_mask(h, w, trial % 2 ? 0.02 : 0.2, rng());
    m.at(h / 2, w / 3) = 1;  // never empty
    const double gamma = trial % 2 ? 20.0 : 1.0;
    const auto field = silcal::imgproc::distance_field(m, gamma, false);
    const auto brute =
        silcal::test_support::brute_force_distance_field(m, gamma);
    double worst = 0.0;
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c)
        worst = std::max(worst,
                         std::abs(field.values.at(r, c) - brute.at(r, c)));
    CHECK(worst < 1e-9);
    CHECK(field.gamma_decay == gamma);
  }
}

TEST_CASE("distance field is zero exactly on mask pixels and positive off") {
  const BinaryMask m = rect_mask(20, 20, 5, 9, 6, 12);
  const auto field = silcal::imgproc::distance_field(m, 20.0);
  for (int r = 0; r < 20; ++r)
    for (int c = 0; c < 20; ++c) {
      if (m.at(r, c))
        CHECK(field.values.at(r, c) == 0.0);
      else
        CHECK(field.values.at(r, c) > 0.0);
    }
  // Nearest mask pixel of (5, 0) is (5, 6): 6 px, divided by the decay.
  CHECK(field.values.at(5, 0) == doctest::Approx(6.0 / 20.0).epsilon(1e-12));
  // Diagonal distance from (0, 0) to (5, 6).
  CHECK(field.values.at(0, 0) ==
        doctest::Approx(std::sqrt(61.0) / 20.0).epsilon(1e-12));
}

TEST_CASE("distance field serial and parallel paths agree bitwise") {
  const BinaryMask m = random_mask(64, 96, 0.05, 11);
  const auto serial = silcal::imgproc::distance_field(m, 20.0, false);
  const auto parallel = silcal::imgproc::distance_field(m, 20.0, true);
  for (int r = 0; r < 64; ++r)
    for (int c = 0; c < 96; ++c)
      CHECK(serial.values.at(r, c) == parallel.values.at(r, c));
}

TEST_CASE("distance field rejects empty masks") {
  CHECK_THROWS_AS(silcal::imgproc::distance_field(BinaryMask(8, 8, 0), 20.0),
                  silcal::EmptyMaskError);
}

TEST_CASE("distance_field_to_png16 scales the maximum to 65535") {
  BinaryMask m(9, 9, 0);
  m.at(4, 4) = 1;
  const auto field = silcal::imgproc::distance_field(m, 1.0);
  const auto img = silcal::imgproc::distance_field_to_png16(field);
  CHECK(img.at(4, 4) == 0);
  // Farthest pixel: a corner.
  CHECK(img.at(0, 0) == 65535);
}

TEST_CASE("inner_boundary keeps pixels with an off or out-of-frame neighbour") {
  const BinaryMask block = rect_mask(5, 5, 1, 3, 1, 3);
  const BinaryMask ib = silcal::imgproc::inner_boundary(block);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) {
      const bool expect = block.at(r, c) && !(r == 2 && c == 2);
      CHECK((ib.at(r, c) != 0) == expect);
    }
  // A mask flush with the frame border: border pixels stay boundary.
  const BinaryMask full = rect_mask(4, 4, 0, 3, 0, 3);
  const BinaryMask fib = silcal::imgproc::inner_boundary(full);
  CHECK(fib.at(0, 0) == 1);
  CHECK(fib.at(0, 2) == 1);
  CHECK(fib.at(1, 1) == 0);
}

TEST_CASE("canny_edges of a filled rectangle is its one-pixel ring") {
  const BinaryMask m = rect_mask(40, 50, 10, 25, 8, 30);
  const BinaryMask edges = silcal::imgproc::canny_edges(m);
  const BinaryMask ring = silcal::imgproc::inner_boundary(m);
  CHECK(masks_equal(edges, ring));
}

TEST_CASE("canny_edges keeps an isolated pixel and rejects empty input") {
  BinaryMask m(15, 15, 0);
  m.at(7, 9) = 1;
  const BinaryMask edges = silcal::imgproc::canny_edges(m);
  int count = 0;
  for (int r = 0; r < 15; ++r)
    for (int c = 0; c < 15; ++c) count += edges.at(r, c) ? 1 : 0;
  CHECK(count == 1);
  CHECK(edges.at(7, 9) == 1);
  CHECK_THROWS_AS(silcal::imgproc::canny_edges(BinaryMask(6, 6, 0)),
                  silcal::EmptyMaskError);
}

TEST_CASE("canny_on_gray thins a smooth stripe to one pixel per side") {
  // Smooth bright stripe well inside the frame (the detector zero-pads, so
  // brightness touching the border would itself read as an edge).
  Image<double> gray(40, 40, 0.0);
  for (int r = 0; r < 40; ++r)
    for (int c = 0; c < 40; ++c)
      gray.at(r, c) =
          0.5 * (std::tanh((c - 14.0) / 2.0) - std::tanh((c - 26.0) / 2.0));
  const BinaryMask edges = silcal::imgproc::canny_on_gray(gray);
  for (int r = 3; r < 37; ++r) {
    int left = 0, right = 0, elsewhere = 0;
    for (int c = 0; c < 40; ++c)
      if (edges.at(r, c)) {
        if (c >= 12 && c <= 16)
          ++left;
        else if (c >= 24 && c <= 28)
          ++right;
        else
          ++elsewhere;
      }
    CHECK(left == 1);
    CHECK(right == 1);
    CHECK(elsewhere == 0);
  }
}

TEST_CASE("hough_two_lines recovers a horizontal band's two edges") {
  const BinaryMask band = rect_mask(200, 320, 100, 110, 0, 319);
  const BinaryMask edges = silcal::imgproc::canny_edges(band);
  auto [l1, l2] = silcal::imgproc::hough_two_lines(edges);
  // Expect rho 100 and 110 at theta = pi/2 in either order.
  if (std::abs(l1.rho) > std::abs(l2.rho)) std::swap(l1, l2);
  const auto [d_rho1, d_theta1] = silcal::test_support::polar_line_difference(
      l1, silcal::imgproc::PolarLine{100.0, M_PI / 2.0});
  const auto [d_rho2, d_theta2] = silcal::test_support::polar_line_difference(
      l2, silcal::imgproc::PolarLine{110.0, M_PI / 2.0});
  CHECK(d_rho1 < 1.0);
  CHECK(d_theta1 < M_PI / 180.0);
  CHECK(d_rho2 < 1.0);
  CHECK(d_theta2 < M_PI / 180.0);

  const auto serial = silcal::imgproc::hough_two_lines(edges, false);
  CHECK(serial.first.rho == l1.rho);
  CHECK(serial.first.theta == l1.theta);
}

TEST_CASE("hough_two_lines needs two distinct peaks") {
  // A single 1-px line yields one peak family within the merge window.
  const BinaryMask line = rect_mask(64, 64, 31, 31, 4, 59);
  CHECK_THROWS_AS(silcal::imgproc::hough_two_lines(line), silcal::HoughError);
}

TEST_CASE("normalize_polar_line canonicalizes theta into [0, pi)") {
  const auto a = silcal::imgproc::normalize_polar_line(5.0, M_PI + 0.3);
  CHECK(a.rho == doctest::Approx(-5.0).epsilon(1e-12));
  CHECK(a.theta == doctest::Approx(0.3).epsilon(1e-12));
  const auto b = silcal::imgproc::normalize_polar_line(3.0, -0.2);
  CHECK(b.rho == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(b.theta == doctest::Approx(M_PI - 0.2).epsilon(1e-12));
  const auto c = silcal::imgproc::normalize_polar_line(-2.0, 0.9);
  CHECK(c.rho == -2.0);
  CHECK(c.theta == 0.9);
  const auto d = silcal::imgproc::normalize_polar_line(4.0, 2.0 * M_PI + 0.1);
  CHECK(d.rho == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(d.theta == doctest::Approx(0.1).epsilon(1e-9));
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const auto l = silcal::imgproc::normalize_polar_line(u(rng), u(rng));
    CHECK(l.theta >= 0.0);
    CHECK(l.theta < M_PI);
    const auto again = silcal::imgproc::normalize_polar_line(l.rho, l.theta);
    CHECK(again.rho == l.rho);
    CHECK(again.theta == l.theta);
  }
}

}  // TEST_SUITE
