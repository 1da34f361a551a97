#include <random>

#include <benchmark/benchmark.h>

#include "slicescale/slicescale.hpp"

using namespace slicescale;

namespace {

Vector random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Vector v(n);
  for (double& e : v) e = u(rng);
  return v;
}

SliceTargets uniform(const std::vector<std::size_t>& dims) {
  std::vector<Vector> s;
  for (std::size_t m : dims) s.emplace_back(m, 1.0);
  return SliceTargets(std::move(s));
}

ScalingProblem random_problem(std::vector<std::size_t> dims, std::uint64_t seed) {
  std::size_t n = 1;
  for (auto m : dims) n *= m;
  SliceTargets s = uniform(dims);
  return ScalingProblem::make(DenseTensor(std::move(dims), random_values(n, seed)), std::move(s));
}

}  // namespace

static void BM_SolveMatrix(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const ScalingProblem p = random_problem({m, m}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_positive_case(p, p.zero_point()));
}
BENCHMARK(BM_SolveMatrix)->Arg(5)->Arg(10)->Arg(20);

static void BM_SolveTensor(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const ScalingProblem p = random_problem({m, m, m}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_positive_case(p, p.zero_point()));
}
BENCHMARK(BM_SolveTensor)->Arg(3)->Arg(5);

static void BM_SolvePatterned(benchmark::State& state) {
  const ScalingProblem p =
      ScalingProblem::make(DenseTensor({3, 3}, {2, 0, 1, 0, 3, 1, 1, 1, 5}), uniform({3, 3}));
  for (auto _ : state) benchmark::DoNotOptimize(solve(p));
}
BENCHMARK(BM_SolvePatterned);

static void BM_BuildFrame(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const std::vector<std::size_t> dims{m, m, m};
  const DenseTensor t(dims, random_values(m * m * m, 3));
  const SliceTargets s = uniform(dims);
  for (auto _ : state) benchmark::DoNotOptimize(build_frame(t, s));
}
BENCHMARK(BM_BuildFrame)->Arg(3)->Arg(5)->Arg(8);

static void BM_Feasibility(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  Vector v = random_values(m * m, 4);
  for (std::size_t i = 0; i < m; ++i) v[i * m + (i + 1) % m] = 0.0;
  const DenseTensor t({m, m}, v);
  const SliceTargets s = uniform({m, m});
  for (auto _ : state) benchmark::DoNotOptimize(check_scalable(t, s));
}
BENCHMARK(BM_Feasibility)->Arg(4)->Arg(8)->Arg(12);

static void BM_SymmetricEigs(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Vector v = random_values(n * n, 5);
  DenseMatrix g(n, n, v);
  const DenseMatrix a = g.transpose() * g;
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_eigs(a));
}
BENCHMARK(BM_SymmetricEigs)->Arg(8)->Arg(32);

BENCHMARK_MAIN();
