#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "inscribed/continuation.hpp"
#include "inscribed/distance_geometry.hpp"
#include "inscribed/loops.hpp"
#include "inscribed/similarity.hpp"
#include "inscribed/solver.hpp"

using namespace inscribed;

namespace {

Eigen::MatrixXd random_points(int k, int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd p(k, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < k; ++i) p(i, j) = g(rng);
  return p;
}

simspace::SimilarityClass tetrahedron() {
  Eigen::MatrixXd p(3, 4);
  p << 1, -1, -1, 1,
       1, -1, 1, -1,
       1, 1, -1, -1;
  return simspace::normalize_reference(simspace::SimplexConfig(p));
}

simspace::SimilarityClass equilateral() {
  Eigen::MatrixXd p(2, 3);
  p << 0, 1, 0.5,
       0, 0, std::sqrt(3.0) / 2;
  return simspace::normalize_reference(simspace::SimplexConfig(p));
}

}  // namespace

static void BM_CayleyMenger(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto d = distgeo::distances_of(random_points(n - 1, n, 7));
  for (auto _ : state) benchmark::DoNotOptimize(distgeo::cm_det(d));
}
BENCHMARK(BM_CayleyMenger)->DenseRange(3, 6);

static void BM_Constructibility(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto d = distgeo::distances_of(random_points(n - 1, n, 11));
  for (auto _ : state) benchmark::DoNotOptimize(distgeo::is_constructible(d));
}
BENCHMARK(BM_Constructibility)->DenseRange(3, 6);

static void BM_PolarDecompose(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Eigen::MatrixXd a = random_points(k, k, 3);
  for (auto _ : state) benchmark::DoNotOptimize(simspace::polar_decompose(a));
}
BENCHMARK(BM_PolarDecompose)->Arg(2)->Arg(3);

static void BM_NewtonRoundSphere(benchmark::State& state) {
  const auto cls = tetrahedron();
  const auto gamma = spheres::RadialEmbedding::round(3);
  const auto pose = simspace::Pose::identity(3);
  auto x = inscribe::initial_guess_round(pose, cls);
  x.lambda *= 1.01;
  for (auto _ : state) benchmark::DoNotOptimize(inscribe::newton_solve(x, pose, cls, gamma));
}
BENCHMARK(BM_NewtonRoundSphere);

static void BM_TraceLoop(benchmark::State& state) {
  const auto cls = equilateral();
  const auto gamma = spheres::RadialEmbedding::expression("1 + 0.3*sin(3*theta)", 2);
  const auto path = inscribe::PosePath::planar(inscribe::loop_base_pose(false));
  inscribe::TraceOptions options;
  options.n_steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(inscribe::trace_pose_loop(cls, gamma, path, options));
}
BENCHMARK(BM_TraceLoop)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_LoopCensus(benchmark::State& state) {
  const auto cls = equilateral();
  const auto gamma = spheres::RadialEmbedding::expression("1 + 0.3*sin(3*theta)", 2);
  inscribe::LoopSearchOptions options;
  options.threads = 1;
  options.random_restarts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(inscribe::find_all_loops(cls, gamma, options));
}
BENCHMARK(BM_LoopCensus)->Arg(0)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
