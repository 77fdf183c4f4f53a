#include "silcal/imgproc/canny.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "silcal/common/errors.hpp"

namespace silcal::imgproc {
namespace {

constexpr double kLowRatio = 0.1;
constexpr double kHighRatio = 0.3;
constexpr double kInsideGate = 0.45;  // smoothed value separating the sides

/// Separable Gaussian (sigma 1, radius 2) with zero padding so the image
/// frame itself reads as a falling edge.
Image<double> gaussian_smooth(const Image<double>& in) {
  static const std::vector<double> kernel = [] {
    std::vector<double> k(5);
    double sum = 0.0;
    for (int i = -2; i <= 2; ++i) {
      k[i + 2] = std::exp(-0.5 * i * i);
      sum += k[i + 2];
    }
    for (double& v : k) v /= sum;
    return k;
  }();
  const int h = in.height(), w = in.width();
  Image<double> tmp(h, w), out(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int i = -2; i <= 2; ++i) {
        const int cc = c + i;
        if (cc >= 0 && cc < w) acc += kernel[i + 2] * in.at(r, cc);
      }
      tmp.at(r, c) = acc;
    }
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int i = -2; i <= 2; ++i) {
        const int rr = r + i;
        if (rr >= 0 && rr < h) acc += kernel[i + 2] * tmp.at(rr, c);
      }
      out.at(r, c) = acc;
    }
  return out;
}

}  // namespace

BinaryMask inner_boundary(const BinaryMask& mask) {
  const int h = mask.height(), w = mask.width();
  BinaryMask out(h, w, 0);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      if (!mask.at(r, c)) continue;
      const bool open = r == 0 || r == h - 1 || c == 0 || c == w - 1 ||
                        !mask.at(r - 1, c) || !mask.at(r + 1, c) ||
                        !mask.at(r, c - 1) || !mask.at(r, c + 1);
      if (open) out.at(r, c) = 1;
    }
  return out;
}

BinaryMask canny_on_gray(const Image<double>& gray) {
  const int h = gray.height(), w = gray.width();
  const Image<double> smooth = gaussian_smooth(gray);

  Image<double> gx(h, w, 0.0), gy(h, w, 0.0), mag(h, w, 0.0);
  auto sm = [&smooth, h, w](int r, int c) {
    return (r >= 0 && r < h && c >= 0 && c < w) ? smooth.at(r, c) : 0.0;
  };
  double max_mag = 0.0;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const double sx = (sm(r - 1, c + 1) + 2.0 * sm(r, c + 1) +
                         sm(r + 1, c + 1)) -
                        (sm(r - 1, c - 1) + 2.0 * sm(r, c - 1) +
                         sm(r + 1, c - 1));
      const double sy = (sm(r + 1, c - 1) + 2.0 * sm(r + 1, c) +
                         sm(r + 1, c + 1)) -
                        (sm(r - 1, c - 1) + 2.0 * sm(r - 1, c) +
                         sm(r - 1, c + 1));
      gx.at(r, c) = sx;
      gy.at(r, c) = sy;
      const double m = std::hypot(sx, sy);
      mag.at(r, c) = m;
      if (m > max_mag) max_mag = m;
    }
  BinaryMask edges(h, w, 0);
  if (max_mag <= 0.0) return edges;

  const double low = kLowRatio * max_mag;
  const double high = kHighRatio * max_mag;

  // Non-maximum suppression along the quantized gradient direction. An
  // ideal binary step peaks equally on both sides of the boundary; ties go
  // to the brighter pixel so the edge sits on the mask side.
  Image<std::uint8_t> thin(h, w, 0);  // 0 none, 1 weak, 2 strong
  auto mg = [&mag, h, w](int r, int c) {
    return (r >= 0 && r < h && c >= 0 && c < w) ? mag.at(r, c) : 0.0;
  };
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const double m = mag.at(r, c);
      if (m < low) continue;
      const double ax = std::abs(gx.at(r, c)), ay = std::abs(gy.at(r, c));
      int dr, dc;
      if (ay <= 0.41421356237309503 * ax) {  // within 22.5 deg of horizontal
        dr = 0;
        dc = 1;
      } else if (ax <= 0.41421356237309503 * ay) {
        dr = 1;
        dc = 0;
      } else if ((gx.at(r, c) > 0) == (gy.at(r, c) > 0)) {
        dr = 1;
        dc = 1;
      } else {
        dr = 1;
        dc = -1;
      }
      const double m1 = mg(r + dr, c + dc), m2 = mg(r - dr, c - dc);
      bool keep = m > m1 && m > m2;
      if (!keep && m >= m1 && m >= m2) {
        // Tied plateau: keep only the sample on the brighter side.
        const double s = smooth.at(r, c);
        auto sval = [&](int rr, int cc) {
          return (rr >= 0 && rr < h && cc >= 0 && cc < w) ? smooth.at(rr, cc)
                                                          : -1.0;
        };
        const double s1 = (m == m1) ? sval(r + dr, c + dc) : -1.0;
        const double s2 = (m == m2) ? sval(r - dr, c - dc) : -1.0;
        keep = s > s1 && s > s2;
      }
      if (keep) thin.at(r, c) = m >= high ? 2 : 1;
    }

  // Hysteresis: flood weak pixels 8-connected to a strong one.
  std::vector<std::pair<int, int>> stack;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (thin.at(r, c) == 2) {
        edges.at(r, c) = 1;
        stack.emplace_back(r, c);
      }
  while (!stack.empty()) {
    const auto [r, c] = stack.back();
    stack.pop_back();
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        const int rr = r + dr, cc = c + dc;
        if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
        if (thin.at(rr, cc) == 1 && !edges.at(rr, cc)) {
          edges.at(rr, cc) = 1;
          stack.emplace_back(rr, cc);
        }
      }
  }
  return edges;
}

BinaryMask canny_edges(const BinaryMask& mask) {
  if (mask.empty()) throw EmptyMaskError("edge detection on an empty image");
  const int h = mask.height(), w = mask.width();
  Image<double> gray(h, w);
  bool any = false;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      gray.at(r, c) = mask.at(r, c) ? 1.0 : 0.0;
      any = any || mask.at(r, c);
    }
  if (!any) throw EmptyMaskError("edge detection needs a nonempty mask");

  const Image<double> smooth = gaussian_smooth(gray);
  BinaryMask edges = canny_on_gray(gray);
  // Gate off outside-row survivors, then fold in the exact inner boundary
  // so corners and one-pixel features are never dropped.
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (edges.at(r, c) && smooth.at(r, c) < kInsideGate)
        edges.at(r, c) = 0;
  const BinaryMask inner = inner_boundary(mask);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (inner.at(r, c)) edges.at(r, c) = 1;
  return edges;
}

}  // namespace silcal::imgproc
