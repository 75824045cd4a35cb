#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "netsample/design.hpp"
#include "netsample/estimators.hpp"
#include "netsample/resample.hpp"
#include "netsample/synthetic.hpp"

using namespace netsample;

namespace {

const SyntheticPopulation& population() {
  static const SyntheticPopulation pop = generate_population(desk_scale_population());
  return pop;
}

const SampleNetwork& sample() {
  static const SampleNetwork s = [] {
    Rng rng = make_rng(1, {});
    return run_design(population().graph, population().attributes, DesignConfig::rds(), rng);
  }();
  return s;
}

void BM_ProcessStep(benchmark::State& state) {
  const ResampleGraph g(sample());
  ResampleConfig cfg;
  Rng rng = make_rng(2, {});
  auto s = ProcessState::empty(g.size());
  for (int i = 0; i < 2000; ++i) advance_process(s, g, cfg, rng);
  for (auto _ : state) {
    advance_process(s, g, cfg, rng);
    benchmark::DoNotOptimize(s.members.data());
  }
}
BENCHMARK(BM_ProcessStep);

void BM_ProcessResamples(benchmark::State& state) {
  ResampleConfig cfg;
  cfg.iterations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    Rng rng = make_rng(3, {});
    benchmark::DoNotOptimize(process_resamples(sample(), cfg, rng));
  }
}
BENCHMARK(BM_ProcessResamples)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_RepeatedResamples(benchmark::State& state) {
  ResampleConfig cfg;
  cfg.mode = ResampleMode::Repeated;
  cfg.iterations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    Rng rng = make_rng(4, {});
    benchmark::DoNotOptimize(repeated_resamples(sample(), cfg, rng));
  }
}
BENCHMARK(BM_RepeatedResamples)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_RunDesign(benchmark::State& state) {
  const auto cfg = state.range(0) == 0 ? DesignConfig::rds() : DesignConfig::snowball();
  std::uint64_t r = 0;
  for (auto _ : state) {
    Rng rng = make_rng(5, {r++});
    benchmark::DoNotOptimize(run_design(population().graph, population().attributes, cfg, rng));
  }
}
BENCHMARK(BM_RunDesign)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EstimateMeanF(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> y(n);
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = u(gen) < 0.3 ? 1.0 : 0.0;
    f[i] = u(gen);
  }
  for (auto _ : state) {
    const double mu = estimate_mean_f(y, f);
    benchmark::DoNotOptimize(variance_v2(y, f, mu));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_EstimateMeanF)->Arg(1200)->Arg(100000);

}  // namespace
BENCHMARK_MAIN();
