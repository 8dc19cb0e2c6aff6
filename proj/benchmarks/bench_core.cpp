#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "twotier/outage_analysis.hpp"
#include "twotier/simulation.hpp"

using namespace twotier;

namespace {

Network reference_network() {
  Network net;
  net.layout = build_layout(500.0, 2, 20.0);
  net.grid = build_subregion_grid(net.layout, 400, 20.0 / net.layout.area_m2);
  return net;
}

}  // namespace

static void BM_FentonWilkinson(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  std::vector<WeightedTerm> terms;
  for (int k = 0; k < n; ++k) {
    const bool macro = k < 18;
    terms.push_back({0.001 * (k + 1), macro ? RatioKind::RayleighOverRayleigh : RatioKind::LogNormalOverRayleigh,
                     macro ? LogNormalParams{0.0, 0.7979} : LogNormalParams{-0.143, 1.1673}});
  }
  const auto corr = CorrelationTable::reported();
  for (auto _ : state) benchmark::DoNotOptimize(fenton_wilkinson_combine(terms, corr));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_FentonWilkinson)->Arg(2)->Arg(38)->Arg(418);

static void BM_RatioDensity(benchmark::State& state) {
  double z = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lognormal_rayleigh_ratio_log_pdf(z));
    z = z > 3.0 ? -3.0 : z + 0.01;
  }
}
BENCHMARK(BM_RatioDensity);

static void BM_FitRayleighRatio(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fit_lognormal_surrogate(RatioKind::RayleighOverRayleigh));
}
BENCHMARK(BM_FitRayleighRatio)->Unit(benchmark::kSecond)->Iterations(1);

static void BM_BuildSubregionGrid(benchmark::State& state) {
  const auto layout = build_layout(500.0, 2, 20.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_subregion_grid(layout, static_cast<int>(state.range(0)), 0.0));
  }
}
BENCHMARK(BM_BuildSubregionGrid)->Arg(50)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_AnalyticOutage(benchmark::State& state) {
  AnalysisContext ctx;
  ctx.network = reference_network();
  const OutageQuery q{Tier::Macro, {300.0, 0.0}, 1.0, ctx.network.grid.intensity};
  const auto configs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(outage_probability(q, configs, 1, ctx));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AnalyticOutage)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_SimulateOutage(benchmark::State& state) {
  const auto net = reference_network();
  const auto tier = state.range(0) == 0 ? Tier::Macro : Tier::Femto;
  const OutageQuery q{tier, {300.0, 0.0}, tier == Tier::Macro ? 1.0 : 10.0, net.grid.intensity};
  const RandomStream s(1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_outage(q, 100000, s, net));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_SimulateOutage)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
