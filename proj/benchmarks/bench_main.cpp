#include <benchmark/benchmark.h>

#include <nlohmann/json.hpp>

#include "orbimorse/catalog.hpp"
#include "orbimorse/cohomology.hpp"
#include "orbimorse/curvature.hpp"
#include "orbimorse/morse_verify.hpp"
#include "orbimorse/spectral.hpp"
#include "orbimorse/torus_kernel.hpp"

namespace {

using namespace orbimorse;

CatalogModel model(const nlohmann::json& j) {
  return build_catalog_orbifold(catalog_spec_from_json(j));
}

void BM_WeightedProjH0(benchmark::State& state) {
  const std::vector<int> w{1, 2, 3, 5};
  const long long d = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(weighted_proj_h0(w, d));
}
BENCHMARK(BM_WeightedProjH0)->Arg(30)->Arg(300)->Arg(3000);

void BM_MorseIntegralTable(benchmark::State& state) {
  const auto m = model({{"id", "wps"}, {"weights", {1, 1}}, {"degree", 1}, {"perturbation", 3.0}});
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(morse_integral_table(m.orbifold, m.bundle, res).by_q);
}
BENCHMARK(BM_MorseIntegralTable)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SpectralTables(benchmark::State& state) {
  const auto m = model({{"id", "torus"}, {"n", 2}, {"k", 2}, {"degrees", {1, 2}}});
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_tables(m, p, 64).size());
}
BENCHMARK(BM_SpectralTables)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_TorusImageSum(benchmark::State& state) {
  const auto m = model({{"id", "torus"}, {"n", 1}, {"k", 2}, {"degrees", {1}}});
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(torus_kernel_images(m, p, 1.0, {0.1, 0.2}, {0.3, 0.1}).total);
}
BENCHMARK(BM_TorusImageSum)->Arg(8)->Arg(64);

void BM_LocalModelImageSum(benchmark::State& state) {
  const auto m = model({{"id", "local-model"}, {"n", 2}, {"k", 3}, {"a", {1.0, 2.0}},
                        {"action_weights", {1, 2}}, {"radius", 1000.0}});
  CVector z(2);
  z << Complex{0.1, 0.0}, Complex{0.0, 0.2};
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(local_model_image_sum(m, p, 1.0, z, 1));
}
BENCHMARK(BM_LocalModelImageSum)->Arg(8)->Arg(64);

}  // namespace
BENCHMARK_MAIN();
