#include "silcal/render/gradient.hpp"

#include <Eigen/Geometry>

#include "edge_lin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "silcal/common/errors.hpp"
#include "silcal/geom/rotation.hpp"
#include "silcal/geom/transform.hpp"

namespace silcal::render {
namespace {

constexpr double kScaleRatio = 0.6;   // must match the rasterizer
constexpr double kBandScales = 6.0;
const double kC0 = 1.0 / (1.0 + std::exp(kBandScales));
const double kInvNorm = 1.0 / (1.0 - 2.0 * kC0);

/// Gradient of the edge-line distance d = N / L with respect to the edge
/// endpoints a = corner k and b = corner k + 1.
inline void accumulate_line_grad(const detail::EdgeLin& e, double cx, double cy,
                                 double d, double scale, Vec2& ga, Vec2& gb) {
  const double L = e.len;
  const double inv_L = 1.0 / L;
  const double dLx = (e.ax - e.bx) * inv_L;  // dL/da
  const double dLy = (e.ay - e.by) * inv_L;
  ga.x() += scale * ((e.by - cy) - d * dLx) * inv_L;
  ga.y() += scale * ((cx - e.bx) - d * dLy) * inv_L;
  gb.x() += scale * ((cy - e.ay) + d * dLx) * inv_L;
  gb.y() += scale * ((e.ax - cx) + d * dLy) * inv_L;
}

}  // namespace

Eigen::VectorXd loss_gradient(
    const Eigen::VectorXd& params,
    const std::function<double(const Eigen::VectorXd&)>& loss_eval,
    const Eigen::VectorXd& steps) {
  if (steps.size() != params.size())
    throw InvalidParameterError("loss_gradient: step count must match params");
  const double base = loss_eval(params);
  if (!std::isfinite(base)) throw NonFiniteLossError("non-finite loss", -1);
  Eigen::VectorXd grad(params.size());
  Eigen::VectorXd probe = params;
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const double h = steps[i];
    if (!(h > 0.0))
      throw InvalidParameterError("loss_gradient: steps must be positive");
    probe[i] = params[i] + h;
    const double hi = loss_eval(probe);
    probe[i] = params[i] - h;
    const double lo = loss_eval(probe);
    probe[i] = params[i];
    if (!std::isfinite(hi) || !std::isfinite(lo))
      throw NonFiniteLossError("non-finite loss during finite differences",
                               static_cast<int>(i));
    grad[i] = (hi - lo) / (2.0 * h);
  }
  return grad;
}

Eigen::VectorXd backward_render(const RenderGraph& graph,
                                const geom::RobotModel& model,
                                const geom::JointState& joints,
                                const Image<double>& dl_ds,
                                const geom::Vec3& omega, bool parallel) {
  using geom::Mat3;
  using geom::RigidTransform;
  const RenderSettings& settings = graph.settings;
  const double s = kScaleRatio * settings.sigma;
  const double band = kBandScales * s;
  const double fade_area2 = 8.0 * settings.sigma * settings.sigma;
  require_same_shape(dl_ds, graph.soft.height(), graph.soft.width(),
                     "backward_render");

  // Stage 1: per-face corner gradients from the pixel band. Faces own
  // disjoint output slots, so the loop parallelizes without races and the
  // result is independent of the schedule.
  const int n_faces = static_cast<int>(graph.faces.size());
  std::vector<std::array<Vec2, 3>> corner_grads(
      static_cast<std::size_t>(n_faces), {Vec2::Zero(), Vec2::Zero(), Vec2::Zero()});
  std::vector<detail::FaceLin> lins(static_cast<std::size_t>(n_faces));
  for (int fi = 0; fi < n_faces; ++fi)
    lins[static_cast<std::size_t>(fi)].init(graph.faces[static_cast<std::size_t>(fi)].px);
  (void)parallel;
#if SILCAL_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int fi = 0; fi < n_faces; ++fi) {
    const PreparedFace& f = graph.faces[static_cast<std::size_t>(fi)];
    const detail::FaceLin& lin = lins[static_cast<std::size_t>(fi)];
    const detail::EdgeLin& e0 = lin.edge[0];
    const detail::EdgeLin& e1 = lin.edge[1];
    const detail::EdgeLin& e2 = lin.edge[2];
    std::array<Vec2, 3>& cg = corner_grads[static_cast<std::size_t>(fi)];
    double weight_path = 0.0;  // sum of gpx * profile, for the fade factor
    const bool faded = f.weight < 1.0;
    for (int r = f.row0; r <= f.row1; ++r) {
      const double* dl_row = dl_ds.row(r);
      const double* raw_row = graph.raw.row(r);
      const double cy = r;
      const detail::RowLin rl(lin, cy);
      for (int c = f.col0; c <= f.col1; ++c) {
        const double gpx = raw_row[c] < 1.0 ? dl_row[c] : 0.0;
        if (gpx == 0.0) continue;
        const double cx = c;
        const double s0 = e0.sx * cx + rl.s0;
        const double s1 = e1.sx * cx + rl.s1;
        const double s2 = e2.sx * cx + rl.s2;
        double smax = s0 > s1 ? s0 : s1;
        if (s2 > smax) smax = s2;
        if (smax >= band) continue;
        if (smax <= -band) {  // saturated interior: profile is exactly 1
          if (faded) weight_path += gpx;
          continue;
        }
        // Active feature: an edge line (gradient on both endpoints) or a
        // vertex.  Selection mirrors signed_distance_to_triangle.
        double d;
        int line_k = -1;
        int vert_k = -1;
        if (smax <= 0.0) {
          int k = 0;
          double best = s0;
          if (s1 > best) { best = s1; k = 1; }
          if (s2 > best) { best = s2; k = 2; }
          d = best;
          line_k = k;
        } else {
          double d2 = std::numeric_limits<double>::infinity();
          int k_out = -1;
          double t_out = 0.0;
          if (s0 > 0.0) {
            const double t = std::clamp(e0.tx * cx + rl.t0, 0.0, 1.0);
            const double dd = detail::edge_clamped_d2(e0, cx, cy, s0, t);
            if (dd < d2) { d2 = dd; k_out = 0; t_out = t; }
          }
          if (s1 > 0.0) {
            const double t = std::clamp(e1.tx * cx + rl.t1, 0.0, 1.0);
            const double dd = detail::edge_clamped_d2(e1, cx, cy, s1, t);
            if (dd < d2) { d2 = dd; k_out = 1; t_out = t; }
          }
          if (s2 > 0.0) {
            const double t = std::clamp(e2.tx * cx + rl.t2, 0.0, 1.0);
            const double dd = detail::edge_clamped_d2(e2, cx, cy, s2, t);
            if (dd < d2) { d2 = dd; k_out = 2; t_out = t; }
          }
          d = std::sqrt(d2);
          if (d >= band) continue;
          if (t_out > 0.0 && t_out < 1.0) {
            line_k = k_out;
          } else {
            vert_k = t_out <= 0.0 ? k_out : (k_out + 1) % 3;
          }
        }
        const double sig = 1.0 / (1.0 + std::exp(d / s));
        if (faded) weight_path += gpx * ((sig - kC0) * kInvNorm);
        const double dprof_dd = -sig * (1.0 - sig) * kInvNorm / s;
        const double scale = gpx * f.weight * dprof_dd;
        if (line_k >= 0) {
          accumulate_line_grad(lin.edge[static_cast<std::size_t>(line_k)], cx,
                               cy, d, scale,
                               cg[static_cast<std::size_t>(line_k)],
                               cg[static_cast<std::size_t>((line_k + 1) % 3)]);
        } else if (d > 0.0) {
          Vec2& gv = cg[static_cast<std::size_t>(vert_k)];
          const Vec2& pv = f.px[static_cast<std::size_t>(vert_k)];
          const double inv_d = scale / d;
          gv.x() -= (cx - pv.x()) * inv_d;
          gv.y() -= (cy - pv.y()) * inv_d;
        }
      }
    }
    if (faded && weight_path != 0.0) {
      // w = -area2 / fade_area2 on the fade ramp; shoelace derivative.
      const double dw = weight_path * (-1.0 / fade_area2);
      const Vec2& p0 = f.px[0];
      const Vec2& p1 = f.px[1];
      const Vec2& p2 = f.px[2];
      cg[0] += dw * Vec2(p1.y() - p2.y(), p2.x() - p1.x());
      cg[1] += dw * Vec2(p2.y() - p0.y(), p0.x() - p2.x());
      cg[2] += dw * Vec2(p0.y() - p1.y(), p1.x() - p0.x());
    }
  }

  // Stage 2: projected corners -> camera-frame gradients on the original
  // mesh vertices, walking clip provenance. Serial in face order.
  const geom::CameraIntrinsics& cam = graph.camera;
  std::vector<std::vector<Vec3>> vert_grads(graph.cam_verts.size());
  for (std::size_t li = 0; li < graph.cam_verts.size(); ++li)
    vert_grads[li].assign(graph.cam_verts[li].size(), Vec3::Zero());
  for (int fi = 0; fi < n_faces; ++fi) {
    const PreparedFace& f = graph.faces[static_cast<std::size_t>(fi)];
    auto& vg = vert_grads[static_cast<std::size_t>(f.link)];
    const auto& cv = graph.cam_verts[static_cast<std::size_t>(f.link)];
    for (int k = 0; k < 3; ++k) {
      const Vec2& g2 = corner_grads[static_cast<std::size_t>(fi)][static_cast<std::size_t>(k)];
      if (g2.x() == 0.0 && g2.y() == 0.0) continue;
      const Vec3& pc = f.cam[static_cast<std::size_t>(k)];
      const double inv_z = 1.0 / pc.z();
      const Vec3 g3(cam.fx * inv_z * g2.x(), cam.fy * inv_z * g2.y(),
                    -(cam.fx * pc.x() * g2.x() + cam.fy * pc.y() * g2.y()) *
                        inv_z * inv_z);
      const ClipVertRef& ref = f.ref[static_cast<std::size_t>(k)];
      if (ref.b < 0) {
        vg[static_cast<std::size_t>(ref.a)] += g3;
      } else {
        const Vec3& A = cv[static_cast<std::size_t>(ref.a)];
        const Vec3& B = cv[static_cast<std::size_t>(ref.b)];
        const double dz = B.z() - A.z();
        const double dt_dzA = (settings.near_plane - B.z()) / (dz * dz);
        const double dt_dzB = -(settings.near_plane - A.z()) / (dz * dz);
        const double along = (B - A).dot(g3);
        Vec3 gA = (1.0 - ref.t) * g3;
        gA.z() += along * dt_dzA;
        Vec3 gB = ref.t * g3;
        gB.z() += along * dt_dzB;
        vg[static_cast<std::size_t>(ref.a)] += gA;
        vg[static_cast<std::size_t>(ref.b)] += gB;
      }
    }
  }

  // Stage 3: per-link force/moment sums, then the kinematic chain.
  const std::size_t n_links = model.links.size();
  std::vector<Vec3> moment(n_links, Vec3::Zero());  // sum of v x g
  std::vector<Vec3> force(n_links, Vec3::Zero());   // sum of g
  for (std::size_t li = 0; li < n_links; ++li) {
    const auto& cv = graph.cam_verts[li];
    const auto& vg = vert_grads[li];
    for (std::size_t v = 0; v < cv.size(); ++v) {
      moment[li] += cv[v].cross(vg[v]);
      force[li] += vg[v];
    }
  }

  Eigen::VectorXd out = Eigen::VectorXd::Zero(6 + model.joint_count);

  Vec3 total_force = Vec3::Zero();
  Vec3 total_moment = Vec3::Zero();
  for (std::size_t li = 0; li < n_links; ++li) {
    total_force += force[li];
    total_moment += moment[li];
  }
  out.segment<3>(3) = total_force;  // d/dt: translation acts on every vertex

  const Mat3 R_w = geom::rotation_exp(omega);
  const Mat3 Jr = geom::rotation_right_jacobian(omega);
  const Vec3 M = total_moment - graph.camera_from_robot.translation.cross(total_force);
  out.segment<3>(0) = Jr.transpose() * (R_w.transpose() * M);

  // Subtree sums: child contributions roll up to each joint's link.
  std::vector<Vec3> sub_moment = moment, sub_force = force;
  for (std::size_t li = n_links; li-- > 1;) {
    const int parent = model.links[li].parent;
    if (parent >= 0) {
      sub_moment[static_cast<std::size_t>(parent)] += sub_moment[li];
      sub_force[static_cast<std::size_t>(parent)] += sub_force[li];
    }
  }
  for (std::size_t li = 0; li < n_links; ++li) {
    const geom::Link& link = model.links[li];
    if (link.joint_index < 0) continue;
    const Vec3 axis_cam =
        graph.camera_from_robot.rotation *
        (graph.link_poses[li].rotation * link.axis);
    const Vec3 origin_cam =
        graph.camera_from_robot.apply(graph.link_poses[li].translation);
    const double dq = link.joint_scale *
                      axis_cam.dot(sub_moment[li] - origin_cam.cross(sub_force[li]));
    out[6 + link.joint_index] += dq;
  }
  (void)joints;
  return out;
}

}  // namespace silcal::render
