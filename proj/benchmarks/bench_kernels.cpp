#include <benchmark/benchmark.h>

#include "dpplimits/kernel_builders.hpp"

namespace dpplimits {
namespace {

void BM_OpeKernel(benchmark::State& state) {
  SeededRng rng(1, 1);
  const auto cloud = sample_uniform_cube(static_cast<std::size_t>(state.range(0)), 2, rng);
  const auto m = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(ope_kernel(cloud, m));
}
BENCHMARK(BM_OpeKernel)->Args({1000, 16})->Args({1000, 256})->Args({2000, 256})->Unit(benchmark::kMillisecond);

void BM_HarmonicBasis(benchmark::State& state) {
  SeededRng rng(2, 2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto cloud = sample_uniform_sphere(n, rng);
  const auto opts = default_harmonic_options(n);
  for (auto _ : state) benchmark::DoNotOptimize(harmonic_basis(cloud, 128, opts));
}
BENCHMARK(BM_HarmonicBasis)->Arg(500)->Arg(1500)->Unit(benchmark::kMillisecond);

void BM_Usvt(benchmark::State& state) {
  SeededRng rng(3, 3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto cloud = sample_uniform_cube(n, 2, rng);
  const auto graph = latent_graph(cloud, gaussian_kernel(1.0, 0.5), 1.0, rng);
  for (auto _ : state) benchmark::DoNotOptimize(usvt_estimate(graph, 1.0, 1.0, 0.2));
}
BENCHMARK(BM_Usvt)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dpplimits
