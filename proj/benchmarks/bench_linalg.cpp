#include <benchmark/benchmark.h>

#include <array>
#include <cmath>

#include "mfcert/linalg.hpp"
#include "mfcert/metrics.hpp"
#include "mfcert/random.hpp"

using namespace mfcert;

static void BM_HermEig(benchmark::State& state) {
  Rng rng(1);
  const ComplexMatrix a = random_hermitian(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(herm_eig(a));
}
BENCHMARK(BM_HermEig)->Arg(16)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Svd(benchmark::State& state) {
  Rng rng(2);
  const auto d = static_cast<std::size_t>(state.range(0));
  const ComplexMatrix a = gaussian_matrix(d, d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(svd(a));
}
BENCHMARK(BM_Svd)->Arg(16)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Fidelity(benchmark::State& state) {
  Rng rng(3);
  const auto d = static_cast<std::size_t>(state.range(0));
  const DensityMatrix rho = random_density(d, d, rng), sigma = random_density(d, d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(fidelity(rho, sigma));
}
BENCHMARK(BM_Fidelity)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_PartialTrace(benchmark::State& state) {
  Rng rng(4);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const PureState psi(random_unit_vector(static_cast<std::size_t>(std::pow(4.0, n)), rng), TensorShape::uniform(4, n));
  const std::array<std::size_t, 1> keep{0};
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(psi, keep));
}
BENCHMARK(BM_PartialTrace)->DenseRange(2, 6)->Unit(benchmark::kMicrosecond);
