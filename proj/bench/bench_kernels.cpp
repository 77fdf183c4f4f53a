// Serial vs. OpenMP comparison for the three hot kernels: the soft
// rasterizer, the distance transform, and the backward pass. Run with
// --benchmark_filter=render to pick one family.

#include <benchmark/benchmark.h>

#include "silcal/geom/model_builder.hpp"
#include "silcal/imgproc/distance_field.hpp"
#include "silcal/loss/pixel_losses.hpp"
#include "silcal/render/gradient.hpp"
#include "silcal/render/rasterizer.hpp"

namespace {

using namespace silcal;

struct Fixture {
  geom::RobotModel model = geom::build_psm_model({});
  geom::CameraIntrinsics cam;
  geom::JointState joints =
      geom::JointState::with_default_mask(Eigen::Vector4d(0.3, 0.2, -0.15, 0.4));
  geom::RigidTransform pose = geom::look_at_transform(0.25, 1.0, -0.2, 0.12);
  render::RenderSettings settings;
};

const Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_render_soft(benchmark::State& state) {
  const Fixture& f = fixture();
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(render::render_soft(f.model, f.joints, f.pose,
                                                 f.cam, f.settings, parallel));
  }
}
BENCHMARK(BM_render_soft)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_render_hard(benchmark::State& state) {
  const Fixture& f = fixture();
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(render::render_hard(
        f.model, f.joints, f.pose, f.cam, f.settings.near_plane, parallel));
  }
}
BENCHMARK(BM_render_hard)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_distance_field(benchmark::State& state) {
  const Fixture& f = fixture();
  const bool parallel = state.range(0) != 0;
  const BinaryMask mask = render::render_hard(f.model, f.joints, f.pose,
                                              f.cam, f.settings.near_plane);
  for (auto _ : state) {
    benchmark::DoNotOptimize(imgproc::distance_field(mask, 20.0, parallel));
  }
}
BENCHMARK(BM_distance_field)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_backward_render(benchmark::State& state) {
  const Fixture& f = fixture();
  const bool parallel = state.range(0) != 0;
  render::RenderGraph graph;
  render::render_scene(f.model, f.joints, f.pose, f.cam, f.settings, true,
                       &graph);
  const BinaryMask mask = render::render_hard(f.model, f.joints, f.pose,
                                              f.cam, f.settings.near_plane);
  const imgproc::DistanceField dist = imgproc::distance_field(mask, 20.0);
  const loss::LossWeights w;
  const Image<double> dl_ds =
      loss::render_loss_gradient_image(graph.soft, mask, dist, w);
  const Eigen::Vector3d omega = Eigen::Vector3d::Zero();
  for (auto _ : state) {
    benchmark::DoNotOptimize(render::backward_render(graph, f.model, f.joints,
                                                     dl_ds, omega, parallel));
  }
}
BENCHMARK(BM_backward_render)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
