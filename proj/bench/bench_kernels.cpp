// OpenMP kernels against their serial reference implementations.
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "seamkit/chamfer.hpp"
#include "seamkit/raster.hpp"

using namespace seamkit;

namespace {

std::vector<Point3> cloud(std::size_t n, std::uint64_t seed, double offset = 0.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point3> out(n);
  for (auto& p : out) p = {u(rng) + offset, u(rng), u(rng)};
  return out;
}

std::vector<Point2> blob(int n, double cx, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> r(0.8, 1.2);
  std::vector<Point2> ring;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * 3.141592653589793 * k / n, s = r(rng);
    ring.push_back({cx + s * std::cos(t), s * std::sin(t)});
  }
  return ring;
}

// Patch-like (400 points) and curve-like (50 points) sets, as matched per sample.
std::vector<std::vector<Point3>> sets(std::size_t count, std::size_t n, std::uint64_t seed) {
  std::vector<std::vector<Point3>> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(cloud(n, seed + i, 0.1 * static_cast<double>(i)));
  return out;
}

void BM_ChamferSymmetric(benchmark::State& st) {
  const auto a = cloud(static_cast<std::size_t>(st.range(0)), 1), b = cloud(static_cast<std::size_t>(st.range(0)), 2);
  for (auto _ : st) benchmark::DoNotOptimize(chamfer_symmetric<Point3>(a, b));
}
void BM_ChamferSymmetricOmp(benchmark::State& st) {
  const auto a = cloud(static_cast<std::size_t>(st.range(0)), 1), b = cloud(static_cast<std::size_t>(st.range(0)), 2);
  for (auto _ : st) benchmark::DoNotOptimize(chamfer_symmetric_omp<Point3>(a, b));
}
void BM_ChamferSymmetricReference(benchmark::State& st) {
  const auto a = cloud(static_cast<std::size_t>(st.range(0)), 1), b = cloud(static_cast<std::size_t>(st.range(0)), 2);
  for (auto _ : st) benchmark::DoNotOptimize(reference::chamfer_symmetric<Point3>(a, b));
}

void BM_PairwiseChamfer(benchmark::State& st) {
  const auto rows = sets(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)), 10);
  const auto cols = sets(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)), 90);
  for (auto _ : st) benchmark::DoNotOptimize(pairwise_chamfer(rows, cols));
}
void BM_PairwiseChamferReference(benchmark::State& st) {
  const auto rows = sets(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)), 10);
  const auto cols = sets(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)), 90);
  for (auto _ : st) benchmark::DoNotOptimize(reference::pairwise_chamfer(rows, cols));
}

void BM_Rasterize(benchmark::State& st) {
  const auto a = blob(200, 0.0, 3), b = blob(200, 0.4, 4);
  const RasterFrame f = shared_frame(a, b, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(rasterize(a, f));
}
void BM_RasterizeReference(benchmark::State& st) {
  const auto a = blob(200, 0.0, 3), b = blob(200, 0.4, 4);
  const RasterFrame f = shared_frame(a, b, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::rasterize(a, f));
}

void BM_PolygonIou(benchmark::State& st) {
  const auto a = blob(200, 0.0, 3), b = blob(200, 0.4, 4);
  for (auto _ : st) benchmark::DoNotOptimize(polygon_iou(a, b, static_cast<int>(st.range(0))));
}
void BM_PolygonIouReference(benchmark::State& st) {
  const auto a = blob(200, 0.0, 3), b = blob(200, 0.4, 4);
  for (auto _ : st) benchmark::DoNotOptimize(reference::polygon_iou(a, b, static_cast<int>(st.range(0))));
}

}  // namespace

BENCHMARK(BM_ChamferSymmetric)->Arg(50)->Arg(400)->Arg(2000);
BENCHMARK(BM_ChamferSymmetricOmp)->Arg(50)->Arg(400)->Arg(2000);
BENCHMARK(BM_ChamferSymmetricReference)->Arg(50)->Arg(400)->Arg(2000);
BENCHMARK(BM_PairwiseChamfer)->Args({70, 400})->Args({200, 50})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairwiseChamferReference)->Args({70, 400})->Args({200, 50})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Rasterize)->Arg(256)->Arg(1024);
BENCHMARK(BM_RasterizeReference)->Arg(256)->Arg(1024);
BENCHMARK(BM_PolygonIou)->Arg(256)->Arg(1024);
BENCHMARK(BM_PolygonIouReference)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
