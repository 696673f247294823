// Serial versus OpenMP timings of the grid kernels on an n-by-n Poisson stencil.
#include <benchmark/benchmark.h>

#include <vector>

#include "bangbang/kernels.hpp"

namespace {

using namespace bangbang::kernels;

Stencil poisson(std::size_t n) {
  Stencil a{n, n, std::vector<double>(n * n, 4.0), std::vector<double>(n * n, 1.0), std::vector<double>(n * n, 1.0)};
  for (std::size_t c = 0; c < n * n; ++c) {
    if (c % n + 1 == n) a.east[c] = 0.0;
    if (c / n + 1 == n) a.north[c] = 0.0;
  }
  return a;
}

Exec mode(const benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_Apply(benchmark::State& state) {
  const auto a = poisson(static_cast<std::size_t>(state.range(0)));
  std::vector<double> x(a.size(), 1.0), y(a.size());
  for (auto _ : state) {
    apply(a, x, y, mode(state));
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(a.size()));
}

void BM_Dot(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> x(n * n, 0.5), y(n * n, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(dot(x, y, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n));
}

void BM_Cg(benchmark::State& state) {
  const auto a = poisson(static_cast<std::size_t>(state.range(0)));
  const std::vector<double> b(a.size(), 1.0);
  for (auto _ : state) {
    std::vector<double> x(a.size(), 0.0);
    const auto r = conjugate_gradient(a, b, x, {1e-8, 0, mode(state)});
    benchmark::DoNotOptimize(r.iterations);
  }
}

}  // namespace

BENCHMARK(BM_Apply)->ArgsProduct({{256, 1024}, {0, 1}});
BENCHMARK(BM_Dot)->ArgsProduct({{256, 1024}, {0, 1}});
BENCHMARK(BM_Cg)->ArgsProduct({{128, 256}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
