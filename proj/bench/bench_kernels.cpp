// Serial reference vs OpenMP kernel on the same inputs.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "support/fixtures.hpp"
#include "depthbench/boundary.hpp"
#include "depthbench/depth_metrics.hpp"
#include "depthbench/pointcloud.hpp"
#include "depthbench/pyramid.hpp"

namespace db = depthbench;
namespace dt = depthbench::testing;

namespace {

db::DepthMap depth(int side, std::uint64_t seed) {
  dt::Rng rng(seed);
  return dt::step_edge_map(rng, side, 12);
}

db::PointCloud cloud(int n, std::uint64_t seed) {
  dt::Rng rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  db::PointCloud pc;
  for (int i = 0; i < n; ++i) pc.points.push_back({u(rng), u(rng), 3.0 + u(rng)});
  return pc;
}

template <auto Fn>
void field_kernel(benchmark::State& state) {
  const auto x = depth(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}

template <auto Fn>
void boundary_kernel(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto gt = depth(side, 2);
  auto pred = gt;
  dt::Rng rng(3);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (auto& v : pred.values()) v *= 1.0 + noise(rng);
  const db::ThresholdSchedule schedule;
  for (auto _ : state) benchmark::DoNotOptimize(Fn(pred, gt, schedule, true));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(gt.size()));
}

template <auto Fn>
void depth_kernel(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto gt = depth(side, 4);
  const auto pred = depth(side, 5);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(pred, gt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(gt.size()));
}

template <auto Fn>
void pc_kernel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = cloud(n, 6);
  const auto b = cloud(n, 7);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(a, b, 0.1));
  state.SetItemsProcessed(state.iterations() * n);
}

db::Field ds_fast(const db::Field& x) { return db::downsample2(x); }
db::Field ds_ref(const db::Field& x) { return db::reference::downsample2(x); }
db::GradientField scharr_fast(const db::Field& x) { return db::scharr(x); }
db::GradientField scharr_ref(const db::Field& x) { return db::reference::scharr(x); }
db::Field laplace_fast(const db::Field& x) { return db::laplace(x); }
db::Field laplace_ref(const db::Field& x) { return db::reference::laplace(x); }

std::vector<db::PairCounts> counts_fast(const db::DepthMap& p, const db::DepthMap& g,
                                        const db::ThresholdSchedule& s, bool nms) {
  return db::boundary_counts(p, g, s, nms);
}
std::vector<db::PairCounts> counts_ref(const db::DepthMap& p, const db::DepthMap& g,
                                       const db::ThresholdSchedule& s, bool nms) {
  return db::reference::boundary_counts(p, g, s, nms);
}

db::DepthMetricReport metrics_fast(const db::DepthMap& p, const db::DepthMap& g) {
  return db::depth_metrics(p, g);
}
db::DepthMetricReport metrics_ref(const db::DepthMap& p, const db::DepthMap& g) {
  return db::reference::depth_metrics(p, g);
}

db::PointCloudMetrics pc_grid(const db::PointCloud& a, const db::PointCloud& b, double tau) {
  return db::pc_metrics(a, b, tau);
}
db::PointCloudMetrics pc_brute(const db::PointCloud& a, const db::PointCloud& b, double tau) {
  return db::reference::pc_metrics(a, b, tau);
}

}  // namespace

BENCHMARK(field_kernel<ds_fast>)->Name("downsample2/parallel")->Arg(512)->Arg(1536);
BENCHMARK(field_kernel<ds_ref>)->Name("downsample2/reference")->Arg(512)->Arg(1536);
BENCHMARK(field_kernel<scharr_fast>)->Name("scharr/parallel")->Arg(512)->Arg(1536);
BENCHMARK(field_kernel<scharr_ref>)->Name("scharr/reference")->Arg(512)->Arg(1536);
BENCHMARK(field_kernel<laplace_fast>)->Name("laplace/parallel")->Arg(512)->Arg(1536);
BENCHMARK(field_kernel<laplace_ref>)->Name("laplace/reference")->Arg(512)->Arg(1536);
BENCHMARK(boundary_kernel<counts_fast>)->Name("boundary_counts/parallel")->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(boundary_kernel<counts_ref>)->Name("boundary_counts/reference")->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(depth_kernel<metrics_fast>)->Name("depth_metrics/parallel")->Arg(512)->Arg(1536);
BENCHMARK(depth_kernel<metrics_ref>)->Name("depth_metrics/reference")->Arg(512)->Arg(1536);
BENCHMARK(pc_kernel<pc_grid>)->Name("pc_metrics/grid")->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(pc_kernel<pc_brute>)->Name("pc_metrics/brute_force")->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
