#include <benchmark/benchmark.h>

#include "mfcert/config.hpp"
#include "mfcert/dynamics.hpp"
#include "mfcert/model.hpp"
#include "mfcert/random.hpp"
#include "mfcert/runner.hpp"

using namespace mfcert;

PotentialSpec coulomb_spec() {
  PotentialSpec spec;
  spec.kind = PotentialKind::CoulombLike;
  return spec;
}

static void BM_HartreeStep(benchmark::State& state) {
  Rng rng(5);
  const auto sites = static_cast<std::size_t>(state.range(0));
  const TorusModel model = make_model(sites, OneBodyPreset::Laplacian, coulomb_spec());
  DensityMatrix gamma = random_density(sites, sites, rng);
  for (auto _ : state) gamma = hartree_step(model, gamma, 1e-3);
}
BENCHMARK(BM_HartreeStep)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

static void BM_SmokeRun(benchmark::State& state) {
  const ExperimentConfig config = preset_config("smoke");
  for (auto _ : state) benchmark::DoNotOptimize(run(config));
}
BENCHMARK(BM_SmokeRun)->Unit(benchmark::kMillisecond);

static void BM_GridRun(benchmark::State& state) {
  ExperimentConfig config = preset_config("paper-check");
  config.particles = static_cast<std::size_t>(state.range(0));
  config.grid = {0.1, 1e-3, 10};
  for (auto _ : state) benchmark::DoNotOptimize(run(config));
}
BENCHMARK(BM_GridRun)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
