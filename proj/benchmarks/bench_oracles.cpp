#include <random>

#include <benchmark/benchmark.h>

#include "lacg/hungarian.hpp"
#include "lacg/layered_dag.hpp"
#include "lacg/polytope.hpp"
#include "lacg/projection.hpp"

namespace {

lacg::Vector random_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  lacg::Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

void BM_ProjectSimplex(benchmark::State& state) {
  const lacg::Vector y = random_vector(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(lacg::project_simplex(y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProjectSimplex)->RangeMultiplier(4)->Range(16, 16384)->Complexity();

void BM_Hungarian(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const lacg::Vector c = random_vector(n * n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(lacg::lmo_birkhoff(c));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oNCubed);

void BM_DagShortestPath(benchmark::State& state) {
  const auto w = static_cast<int>(state.range(0));
  lacg::FlowPolytope flow(lacg::make_layered_dag(w, w));
  const lacg::Vector c = random_vector(flow.dim(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(flow.lmo(c));
}
BENCHMARK(BM_DagShortestPath)->DenseRange(5, 20, 5);

void BM_HullSubproblem(benchmark::State& state) {
  const auto m = static_cast<Eigen::Index>(state.range(0));
  const Eigen::Index n = 4 * m;
  std::vector<lacg::Vertex> hull;
  for (Eigen::Index j = 0; j < m; ++j) {
    hull.push_back({random_vector(n, 100 + static_cast<std::uint64_t>(j)), {{j}}});
  }
  const auto sub = lacg::HullSubproblem::build(hull, random_vector(n, 4), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(lacg::solve_hull_subproblem(sub, 1e-10));
}
BENCHMARK(BM_HullSubproblem)->RangeMultiplier(2)->Range(4, 64);

}  // namespace
