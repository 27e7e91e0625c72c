#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "swstab/classifier.hpp"

using namespace swstab;

namespace {

std::vector<SystemPair> conjugated_pairs(std::size_t n) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<SystemPair> out;
  while (out.size() < n) {
    const double eta = -0.2 - 1.8 * (0.5 + 0.5 * u(gen));
    const double rho = -0.2 - 1.8 * (0.5 + 0.5 * u(gen));
    const double k = 5.0 * u(gen);
    if (std::abs(k) < 1e-3) continue;
    const SystemPair nf = canonical_pair(CaseTag::Rminus1, eta, rho, k);
    const Mat2 t(1.0 + u(gen), u(gen), u(gen), 1.0 + u(gen));
    if (std::abs(det(t)) < 0.1) continue;
    const Mat2 ti = t.inverse();
    out.push_back({t * nf.A * ti, t * nf.B * ti});
  }
  return out;
}

void BM_Classify(benchmark::State& state) {
  const auto pairs = conjugated_pairs(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify(pairs[i++ % pairs.size()]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Classify);

void BM_NormalForm(benchmark::State& state) {
  const auto pairs = conjugated_pairs(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normal_form(pairs[i++ % pairs.size()]));
  }
}
BENCHMARK(BM_NormalForm);

void BM_RatioR(benchmark::State& state) {
  const NormalForm nf = canonical_normal_form(CaseTag::R1, -1.0, -2.0, -1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ratio_R(nf.inv, nf));
  }
}
BENCHMARK(BM_RatioR);

}  // namespace
