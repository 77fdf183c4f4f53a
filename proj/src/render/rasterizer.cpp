#include "silcal/render/rasterizer.hpp"

#include "edge_lin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "silcal/common/errors.hpp"
#include "silcal/geom/transform.hpp"

namespace silcal::render {
namespace {

// The logistic scale is 0.6*sigma and the contribution is truncated six
// scales out (3.6*sigma), shifted and renormalized so it hits exactly 0 /
// 1 at the band edges. Two faces sharing an edge then sum to exactly 1 at
// every pixel, which keeps interiors flat at 1.
constexpr double kScaleRatio = 0.6;
constexpr double kBandScales = 6.0;
const double kC0 = 1.0 / (1.0 + std::exp(kBandScales));
const double kInvNorm = 1.0 / (1.0 - 2.0 * kC0);

double cross2(const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); }

struct ClippedTri {
  std::array<Vec3, 3> cam;
  std::array<ClipVertRef, 3> ref;
};

/// Clip one triangle against z >= near. Emits 0, 1 or 2 triangles into
/// `out`; clip corners record their parent vertices and blend parameter.
void clip_triangle(const std::vector<Vec3>& verts, const std::array<int, 3>& face,
                   double near, std::vector<ClippedTri>& out) {
  bool in[3];
  int n_in = 0;
  for (int k = 0; k < 3; ++k) {
    in[k] = verts[static_cast<std::size_t>(face[k])].z() >= near;
    n_in += in[k];
  }
  if (n_in == 0) return;
  if (n_in == 3) {
    ClippedTri t;
    for (int k = 0; k < 3; ++k) {
      t.cam[k] = verts[static_cast<std::size_t>(face[k])];
      t.ref[k] = ClipVertRef{face[k], -1, 0.0};
    }
    out.push_back(t);
    return;
  }
  // Walk the polygon edge by edge, emitting kept corners and crossings.
  Vec3 poly[4];
  ClipVertRef refs[4];
  int n = 0;
  for (int k = 0; k < 3; ++k) {
    const int k1 = (k + 1) % 3;
    const Vec3& a = verts[static_cast<std::size_t>(face[k])];
    const Vec3& b = verts[static_cast<std::size_t>(face[k1])];
    if (in[k]) {
      poly[n] = a;
      refs[n] = ClipVertRef{face[k], -1, 0.0};
      ++n;
    }
    if (in[k] != in[k1]) {
      const double t = (near - a.z()) / (b.z() - a.z());
      Vec3 x = a + t * (b - a);
      x.z() = near;  // exact, keeps the projection finite and stable
      poly[n] = x;
      refs[n] = ClipVertRef{face[k], face[k1], t};
      ++n;
    }
  }
  for (int k = 2; k < n; ++k) {
    ClippedTri t;
    t.cam = {poly[0], poly[k - 1], poly[k]};
    t.ref = {refs[0], refs[k - 1], refs[k]};
    out.push_back(t);
  }
}

Vec2 project(const geom::CameraIntrinsics& cam, const Vec3& p) {
  return Vec2(cam.fx * p.x() / p.z() + cam.cu, cam.fy * p.y() / p.z() + cam.cv);
}

/// Shared geometry stage: kinematics, camera transform, clipping,
/// projection, banded bounding boxes. `cull` drops back-facing and
/// edge-on-faded triangles (soft pass); the hard pass keeps everything.
void prepare_scene(const geom::RobotModel& model, const geom::JointState& joints,
                   const geom::RigidTransform& camera_from_robot,
                   const geom::CameraIntrinsics& camera, double near_plane,
                   double band_px, double fade_area2, bool cull,
                   RenderGraph& graph) {
  model.validate();
  camera.validate();
  if (model.total_face_count() == 0)
    throw InvalidParameterError("render: model has no faces");

  graph.camera = camera;
  graph.camera_from_robot = camera_from_robot;
  graph.link_poses = geom::forward_kinematics(model, joints);
  graph.cam_verts.assign(model.links.size(), {});
  graph.robot_verts.assign(model.links.size(), {});
  graph.faces.clear();

  std::vector<ClippedTri> clipped;
  for (std::size_t li = 0; li < model.links.size(); ++li) {
    const geom::TriangleMesh& mesh = model.links[li].mesh;
    if (mesh.empty()) continue;
    const geom::RigidTransform to_cam =
        camera_from_robot * graph.link_poses[li];
    auto& rverts = graph.robot_verts[li];
    auto& cverts = graph.cam_verts[li];
    rverts.resize(mesh.vertices.size());
    cverts.resize(mesh.vertices.size());
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
      rverts[v] = graph.link_poses[li].apply(mesh.vertices[v]);
      cverts[v] = to_cam.apply(mesh.vertices[v]);
    }
    for (const auto& face : mesh.faces) {
      clipped.clear();
      clip_triangle(cverts, face, near_plane, clipped);
      for (const ClippedTri& tri : clipped) {
        PreparedFace f;
        f.link = static_cast<int>(li);
        f.cam = tri.cam;
        f.ref = tri.ref;
        for (int k = 0; k < 3; ++k) f.px[k] = project(camera, tri.cam[k]);
        f.area2 = cross2(f.px[1] - f.px[0], f.px[2] - f.px[0]);
        if (cull) {
          if (f.area2 >= 0.0) continue;  // back-facing in image coords
          f.weight = std::min(1.0, -f.area2 / fade_area2);
          if (f.weight <= 0.0) continue;
        }
        double umin = f.px[0].x(), umax = f.px[0].x();
        double vmin = f.px[0].y(), vmax = f.px[0].y();
        for (int k = 1; k < 3; ++k) {
          umin = std::min(umin, f.px[k].x());
          umax = std::max(umax, f.px[k].x());
          vmin = std::min(vmin, f.px[k].y());
          vmax = std::max(vmax, f.px[k].y());
        }
        f.col0 = std::max(0, static_cast<int>(std::ceil(umin - band_px)));
        f.col1 = std::min(camera.width - 1,
                          static_cast<int>(std::floor(umax + band_px)));
        f.row0 = std::max(0, static_cast<int>(std::ceil(vmin - band_px)));
        f.row1 = std::min(camera.height - 1,
                          static_cast<int>(std::floor(vmax + band_px)));
        if (f.col0 > f.col1 || f.row0 > f.row1) continue;
        graph.faces.push_back(f);
      }
    }
  }
}

constexpr int kRowBlock = 16;

/// Face indices overlapping each horizontal block of kRowBlock rows.
std::vector<std::vector<int>> bucket_faces(const std::vector<PreparedFace>& faces,
                                           int height) {
  const int blocks = (height + kRowBlock - 1) / kRowBlock;
  std::vector<std::vector<int>> buckets(static_cast<std::size_t>(blocks));
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const int b0 = faces[i].row0 / kRowBlock;
    const int b1 = faces[i].row1 / kRowBlock;
    for (int b = b0; b <= b1; ++b)
      buckets[static_cast<std::size_t>(b)].push_back(static_cast<int>(i));
  }
  return buckets;
}

}  // namespace

void RenderSettings::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidParameterError("render sigma must be positive");
  if (!(near_plane > 0.0) || !std::isfinite(near_plane))
    throw InvalidParameterError("near plane must be positive");
}

double soft_coverage_profile(double signed_distance, double sigma) {
  const double s = kScaleRatio * sigma;
  const double band = kBandScales * s;
  if (signed_distance >= band) return 0.0;
  if (signed_distance <= -band) return 1.0;
  const double sig = 1.0 / (1.0 + std::exp(signed_distance / s));
  return (sig - kC0) * kInvNorm;
}

double signed_distance_to_triangle(const Vec2& p, const Vec2& a, const Vec2& b,
                                   const Vec2& c) {
  const Vec2* v[3] = {&a, &b, &c};
  double inside_d = -std::numeric_limits<double>::infinity();
  bool inside = true;
  double outside_d2 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const Vec2& e0 = *v[k];
    const Vec2& e1 = *v[(k + 1) % 3];
    const Vec2 e = e1 - e0;
    const Vec2 q = p - e0;
    const double len2 = e.squaredNorm();
    const double len = std::sqrt(std::max(len2, 1e-300));
    const double s = cross2(e, q) / len;  // > 0 outside for clockwise winding
    if (s > 0.0) inside = false;
    inside_d = std::max(inside_d, s);
    const double t = std::clamp(q.dot(e) / std::max(len2, 1e-300), 0.0, 1.0);
    outside_d2 = std::min(outside_d2, (q - t * e).squaredNorm());
  }
  return inside ? inside_d : std::sqrt(outside_d2);
}

SoftSilhouette render_scene(const geom::RobotModel& model,
                            const geom::JointState& joints,
                            const geom::RigidTransform& camera_from_robot,
                            const geom::CameraIntrinsics& camera,
                            const RenderSettings& settings, bool parallel,
                            RenderGraph* graph) {
  settings.validate();
  RenderGraph local;
  RenderGraph& g = graph ? *graph : local;
  g.settings = settings;
  const double s = kScaleRatio * settings.sigma;
  const double band = kBandScales * s;
  const double fade_area2 = 8.0 * settings.sigma * settings.sigma;
  prepare_scene(model, joints, camera_from_robot, camera, settings.near_plane,
                band, fade_area2, /*cull=*/true, g);

  g.raw = Image<double>(camera.height, camera.width, 0.0);
  const auto buckets = bucket_faces(g.faces, camera.height);
  const int blocks = static_cast<int>(buckets.size());
  std::vector<detail::FaceLin> lins(g.faces.size());
  for (std::size_t i = 0; i < g.faces.size(); ++i) lins[i].init(g.faces[i].px);
  (void)parallel;
#if SILCAL_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int b = 0; b < blocks; ++b) {
    const int r_lo = b * kRowBlock;
    const int r_hi = std::min(camera.height - 1, r_lo + kRowBlock - 1);
    for (const int fi : buckets[static_cast<std::size_t>(b)]) {
      const PreparedFace& f = g.faces[static_cast<std::size_t>(fi)];
      const detail::FaceLin& lin = lins[static_cast<std::size_t>(fi)];
      const detail::EdgeLin& e0 = lin.edge[0];
      const detail::EdgeLin& e1 = lin.edge[1];
      const detail::EdgeLin& e2 = lin.edge[2];
      const int row_lo = std::max(f.row0, r_lo);
      const int row_hi = std::min(f.row1, r_hi);
      for (int r = row_lo; r <= row_hi; ++r) {
        double* raw_row = g.raw.row(r);
        const double cy = r;
        const detail::RowLin rl(lin, cy);
        for (int c = f.col0; c <= f.col1; ++c) {
          const double cx = c;
          const double s0 = e0.sx * cx + rl.s0;
          const double s1 = e1.sx * cx + rl.s1;
          const double s2 = e2.sx * cx + rl.s2;
          double smax = s0 > s1 ? s0 : s1;
          if (s2 > smax) smax = s2;
          if (smax >= band) continue;  // outside pixels are at least smax away
          double prof;
          if (smax <= -band) {
            prof = 1.0;  // deep interior: profile saturates
          } else {
            double d;
            if (smax <= 0.0) {
              d = smax;
            } else {
              double d2 = std::numeric_limits<double>::infinity();
              if (s0 > 0.0)
                d2 = detail::edge_clamped_d2(e0, cx, cy, s0,
                                             e0.tx * cx + rl.t0);
              if (s1 > 0.0)
                d2 = std::min(d2, detail::edge_clamped_d2(e1, cx, cy, s1,
                                                          e1.tx * cx + rl.t1));
              if (s2 > 0.0)
                d2 = std::min(d2, detail::edge_clamped_d2(e2, cx, cy, s2,
                                                          e2.tx * cx + rl.t2));
              d = std::sqrt(d2);
              if (d >= band) continue;
            }
            const double sig = 1.0 / (1.0 + std::exp(d / s));
            prof = (sig - kC0) * kInvNorm;
          }
          raw_row[c] += f.weight * prof;
        }
      }
    }
  }

  g.soft = SoftSilhouette(camera.height, camera.width, 0.0);
  for (int r = 0; r < camera.height; ++r) {
    const double* raw_row = g.raw.row(r);
    double* soft_row = g.soft.row(r);
    for (int c = 0; c < camera.width; ++c)
      soft_row[c] = std::min(1.0, raw_row[c]);
  }
  return g.soft;
}

SoftSilhouette render_soft(const geom::RobotModel& model,
                           const geom::JointState& joints,
                           const geom::RigidTransform& camera_from_robot,
                           const geom::CameraIntrinsics& camera,
                           const RenderSettings& settings, bool parallel) {
  return render_scene(model, joints, camera_from_robot, camera, settings,
                      parallel, nullptr);
}

BinaryMask render_hard(const geom::RobotModel& model,
                       const geom::JointState& joints,
                       const geom::RigidTransform& camera_from_robot,
                       const geom::CameraIntrinsics& camera, double near_plane,
                       bool parallel) {
  RenderGraph g;
  prepare_scene(model, joints, camera_from_robot, camera, near_plane,
                /*band_px=*/0.0, /*fade_area2=*/1.0, /*cull=*/false, g);
  BinaryMask mask(camera.height, camera.width, 0);
  const auto buckets = bucket_faces(g.faces, camera.height);
  const int blocks = static_cast<int>(buckets.size());
  (void)parallel;
#if SILCAL_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int b = 0; b < blocks; ++b) {
    const int r_lo = b * kRowBlock;
    const int r_hi = std::min(camera.height - 1, r_lo + kRowBlock - 1);
    for (const int fi : buckets[static_cast<std::size_t>(b)]) {
      const PreparedFace& f = g.faces[static_cast<std::size_t>(fi)];
      // Boundary-inclusive point-in-triangle, either winding.
      const Vec2 e01 = f.px[1] - f.px[0];
      const Vec2 e12 = f.px[2] - f.px[1];
      const Vec2 e20 = f.px[0] - f.px[2];
      for (int r = std::max(f.row0, r_lo); r <= std::min(f.row1, r_hi); ++r) {
        std::uint8_t* mrow = mask.row(r);
        for (int c = f.col0; c <= f.col1; ++c) {
          if (mrow[c]) continue;
          const Vec2 p(c, r);
          const double s0 = cross2(e01, p - f.px[0]);
          const double s1 = cross2(e12, p - f.px[1]);
          const double s2 = cross2(e20, p - f.px[2]);
          const bool all_neg = s0 <= 0.0 && s1 <= 0.0 && s2 <= 0.0;
          const bool all_pos = s0 >= 0.0 && s1 >= 0.0 && s2 >= 0.0;
          if (all_neg || all_pos) mrow[c] = 1;
        }
      }
    }
  }
  return mask;
}

}  // namespace silcal::render
