#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "silcal/render/rasterizer.hpp"

namespace silcal::render::detail {

/// Affine forms of the per-edge quantities used by the signed distance to a
/// projected triangle, hoisted out of the pixel loop.  For edge k from a to b:
///   s(p) = sx*px + sy*py + sc   signed line distance, > 0 on the outside
///   t(p) = tx*px + ty*py + tc   projection parameter along the edge
/// For a pixel p the exact signed distance is max_k s_k when every s_k <= 0
/// (inside), else the minimum clamped-segment distance.  Edges with s_k <= 0
/// cannot own the nearest feature of an outside pixel (the nearest boundary
/// point either lies in the perpendicular strip of an edge whose line strictly
/// separates p from the triangle, or at a vertex that is also reachable
/// through such an edge), so the outside scan may skip them.
struct EdgeLin {
  double sx, sy, sc;
  double tx, ty, tc;
  double ax, ay;
  double bx, by;
  double len;  // edge length, floored away from zero
};

struct FaceLin {
  std::array<EdgeLin, 3> edge;

  void init(const std::array<Vec2, 3>& v) {
    for (int k = 0; k < 3; ++k) {
      const Vec2& a = v[static_cast<std::size_t>(k)];
      const Vec2& b = v[static_cast<std::size_t>((k + 1) % 3)];
      EdgeLin& e = edge[static_cast<std::size_t>(k)];
      const double ex = b.x() - a.x();
      const double ey = b.y() - a.y();
      const double len2 = std::max(ex * ex + ey * ey, 1e-300);
      e.len = std::sqrt(len2);
      const double inv_len = 1.0 / e.len;
      const double inv_len2 = 1.0 / len2;
      e.sx = -ey * inv_len;
      e.sy = ex * inv_len;
      e.sc = (ey * a.x() - ex * a.y()) * inv_len;
      e.tx = ex * inv_len2;
      e.ty = ey * inv_len2;
      e.tc = -(a.x() * ex + a.y() * ey) * inv_len2;
      e.ax = a.x();
      e.ay = a.y();
      e.bx = b.x();
      e.by = b.y();
    }
  }
};

/// Row-sliced evaluation: constant parts of s and t for a fixed pixel row.
struct RowLin {
  double s0, s1, s2;
  double t0, t1, t2;

  RowLin(const FaceLin& f, double row)
      : s0(f.edge[0].sy * row + f.edge[0].sc),
        s1(f.edge[1].sy * row + f.edge[1].sc),
        s2(f.edge[2].sy * row + f.edge[2].sc),
        t0(f.edge[0].ty * row + f.edge[0].tc),
        t1(f.edge[1].ty * row + f.edge[1].tc),
        t2(f.edge[2].ty * row + f.edge[2].tc) {}
};

/// Clamped squared distance from pixel (cx, cy) to one edge segment, given the
/// precomputed line distance s and projection parameter t.
inline double edge_clamped_d2(const EdgeLin& e, double cx, double cy, double s,
                              double t) {
  if (t <= 0.0) {
    const double dx = cx - e.ax;
    const double dy = cy - e.ay;
    return dx * dx + dy * dy;
  }
  if (t >= 1.0) {
    const double dx = cx - e.bx;
    const double dy = cy - e.by;
    return dx * dx + dy * dy;
  }
  return s * s;
}

}  // namespace silcal::render::detail
