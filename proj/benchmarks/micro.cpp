#include <benchmark/benchmark.h>

#include "idsbed/analysis.hpp"
#include "idsbed/distributions.hpp"
#include "idsbed/experiment.hpp"
#include "idsbed/record.hpp"
#include "idsbed/sim2d.hpp"

using namespace idsbed;

namespace {

void BM_Draw(benchmark::State& state) {
  const auto kind = kAllDistributions[static_cast<std::size_t>(state.range(0))];
  Sampler s(DistributionSpec::defaults(kind), 1);
  for (auto _ : state) benchmark::DoNotOptimize(s());
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Draw)->DenseRange(0, 9);

void BM_Quantile(benchmark::State& state) {
  const auto kind = kAllDistributions[static_cast<std::size_t>(state.range(0))];
  const auto spec = DistributionSpec::defaults(kind);
  double p = 0.0005;
  for (auto _ : state) {
    benchmark::DoNotOptimize(quantile(spec, p));
    p = p + 0.0013 < 1.0 ? p + 0.0013 : 0.0005;
  }
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Quantile)->DenseRange(0, 9);

LogRecord sample_poi() {
  return {123456, "car-1", DataCategory::Poi, PoiPayload{{250.5, 17.25}, "fuel", "open"},
          Label::Normal};
}

void BM_SerializeRecord(benchmark::State& state) {
  const auto r = sample_poi();
  for (auto _ : state) benchmark::DoNotOptimize(serialize_record(r));
}
BENCHMARK(BM_SerializeRecord);

void BM_ParseRecord(benchmark::State& state) {
  const auto line = serialize_record(sample_poi());
  for (auto _ : state) benchmark::DoNotOptimize(parse_record(line));
}
BENCHMARK(BM_ParseRecord);

void BM_StepUnit(benchmark::State& state) {
  Rng rng(3);
  const auto env = build_environment(DifficultyLevel::Easy, 500, 500, rng);
  Unit unit{{250.0, 250.0}};
  const MovementParams params;
  for (auto _ : state) {
    step_unit(env, unit, params, rng);
    benchmark::DoNotOptimize(unit.pos);
  }
}
BENCHMARK(BM_StepUnit);

void BM_GenerateRecords(benchmark::State& state) {
  GapOptions options;
  options.pool_size = static_cast<std::uint64_t>(state.range(0));
  const auto config = gap_scenario(DifficultyLevel::Medium, options);
  for (auto _ : state) benchmark::DoNotOptimize(generate_records(config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateRecords)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace

// Own main: the packaged benchmark_main archive carries LTO bytecode from a
// different compiler release.
BENCHMARK_MAIN();
