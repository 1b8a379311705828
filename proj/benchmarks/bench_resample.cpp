// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "lerf/fixture_banks.hpp"
#include "lerf/lut.hpp"
#include "lerf/resampler.hpp"

namespace {

lerf::ImageBuffer noise(int h, int w, int c) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  lerf::ImageBuffer img(h, w, c, lerf::ColorSpace::kRgb);
  for (double& v : img.data()) v = u(rng);
  return img;
}

std::shared_ptr<const lerf::LutBank> bank() {
  static const auto b = std::make_shared<const lerf::LutBank>(
      lerf::make_structure_bank(lerf::KernelKind::kAnisoGaussian, false));
  return b;
}

void BM_BicubicX2(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto job = lerf::make_scale_job(noise(n, n, 3), 2.0, 2.0, lerf::KernelFamily::keys_cubic());
  for (auto _ : state) benchmark::DoNotOptimize(lerf::resample(job));
  state.SetItemsProcessed(state.iterations() * 4 * n * n);
}
BENCHMARK(BM_BicubicX2)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_LerfGaussianX2(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto job = lerf::make_scale_job(noise(n, n, 3), 2.0, 2.0, lerf::KernelFamily::aniso_gaussian());
  job.bank = bank();
  for (auto _ : state) benchmark::DoNotOptimize(lerf::resample(job));
  state.SetItemsProcessed(state.iterations() * 4 * n * n);
}
BENCHMARK(BM_LerfGaussianX2)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_PredictHyperparams(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto img = noise(n, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(lerf::predict_hyperparams(img, *bank()));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_PredictHyperparams)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SimplexInterp(benchmark::State& state) {
  const lerf::LutTable& table = bank()->f_tables[0];
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<lerf::LutIndex> probes;
  for (int i = 0; i < 4096; ++i) {
    const std::array<double, 4> px{u(rng), u(rng), u(rng), u(rng)};
    probes.push_back(lerf::quantize_index(px));
  }
  double out[3];
  std::size_t i = 0;
  for (auto _ : state) {
    lerf::simplex_interp(table, probes[i++ & 4095], out);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimplexInterp);

}  // namespace

BENCHMARK_MAIN();
