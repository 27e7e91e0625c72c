#include <benchmark/benchmark.h>

#include "swstab/classifier.hpp"
#include "swstab/trajectory.hpp"

using namespace swstab;

namespace {

void BM_ExpmNormal(benchmark::State& state) {
  const Mat2 m(-1.0, 2.0, -0.5, -1.0);
  const SpectralKind kind = spectral_kind(m);
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-3;
    benchmark::DoNotOptimize(expm_normal(m, kind, t));
  }
}
BENCHMARK(BM_ExpmNormal);

void BM_ExpmReference(benchmark::State& state) {
  const Mat2 m(-1.0, 2.0, -0.5, -1.0);
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-3;
    benchmark::DoNotOptimize(expm_reference(m, t));
  }
}
BENCHMARK(BM_ExpmReference);

void BM_WorstTrajectory(benchmark::State& state) {
  const Analysis a = analyze(canonical_pair(CaseTag::Rminus1, -1.0, -1.0, -1.0));
  WorstOptions opt;
  opt.max_half_turns = static_cast<int>(state.range(0));
  opt.samples = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(worst_trajectory(*a.nf, *a.collinearity, Vec2(1.0, 0.0), opt));
  }
}
BENCHMARK(BM_WorstTrajectory)->Arg(1)->Arg(10)->Arg(100);

void BM_RandomDwell(benchmark::State& state) {
  const SystemPair p = canonical_pair(CaseTag::R1, -1.0, -2.0, -1.0);
  SimulateOptions opt;
  opt.horizon = 50.0;
  opt.sample_dt = 0.1;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(p, Vec2(1.0, 0.0), RandomDwell{++seed, 0.05, 0.5}, opt));
  }
}
BENCHMARK(BM_RandomDwell);

}  // namespace

BENCHMARK_MAIN();
