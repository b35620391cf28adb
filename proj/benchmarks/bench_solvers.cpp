#include <benchmark/benchmark.h>

#include "lacg/instance.hpp"
#include "lacg/runner.hpp"

namespace {

lacg::Instance simplex_instance(int n) {
  lacg::GeneratorParams p;
  p.n = n;
  p.L = 1000.0;
  p.seed = 1;
  return lacg::generate_instance("simplex-quadratic", p);
}

// Fixed iteration budget so the per-iteration cost is comparable.
void run_fixed(benchmark::State& state, lacg::Algorithm alg) {
  const lacg::Instance inst = simplex_instance(static_cast<int>(state.range(0)));
  lacg::SolveOptions opt;
  opt.eps = 1e-300;
  opt.max_iters = 500;
  for (auto _ : state) benchmark::DoNotOptimize(lacg::run_algorithm(inst, alg, opt));
  state.SetItemsProcessed(state.iterations() * opt.max_iters);
}

void BM_Afw(benchmark::State& state) { run_fixed(state, lacg::Algorithm::afw); }
void BM_LacgAfw(benchmark::State& state) { run_fixed(state, lacg::Algorithm::lacg_afw); }
BENCHMARK(BM_Afw)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LacgAfw)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace
