#include <benchmark/benchmark.h>

#include "dpplimits/checks.hpp"
#include "dpplimits/dpp.hpp"
#include "dpplimits/kernel_builders.hpp"

namespace dpplimits {
namespace {

// Projection DPP of rank m on n points: the dominant cost of every experiment.
void BM_SampleProjection(benchmark::State& state) {
  SeededRng rng(4, 4);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto cloud = sample_uniform_cube(n, 2, rng);
  const auto basis = ope_basis(cloud, static_cast<std::size_t>(state.range(1)));
  const auto dpp = validate_factored(factored_kernel(basis), basis);
  for (auto _ : state) benchmark::DoNotOptimize(sample_dpp(dpp, rng));
}
BENCHMARK(BM_SampleProjection)->Args({1000, 16})->Args({1000, 256})->Args({2000, 256});

void BM_SampleSmallKernel(benchmark::State& state) {
  SeededRng rng(5, 5);
  const auto dpp = validate_kernel(random_valid_kernel(8, rng));
  for (auto _ : state) benchmark::DoNotOptimize(sample_dpp(dpp, rng));
}
BENCHMARK(BM_SampleSmallKernel);

void BM_EnumeratePmf(benchmark::State& state) {
  SeededRng rng(6, 6);
  const auto dpp = validate_kernel(random_valid_kernel(static_cast<std::size_t>(state.range(0)), rng));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_pmf(dpp));
}
BENCHMARK(BM_EnumeratePmf)->Arg(8)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_ValidateDense(benchmark::State& state) {
  SeededRng rng(7, 7);
  const auto k = random_valid_kernel(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(validate_kernel(k));
}
BENCHMARK(BM_ValidateDense)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dpplimits
