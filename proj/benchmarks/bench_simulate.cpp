#include <benchmark/benchmark.h>

#include "cansim/scenario.hpp"

using namespace cansim;

namespace {

void BM_SimulateNominal(benchmark::State& state) {
  Scenario scn = demo_scenario("ex1b");
  for (auto _ : state) benchmark::DoNotOptimize(simulate(scn));
}
BENCHMARK(BM_SimulateNominal);

void BM_SimulateSliding(benchmark::State& state) {
  Scenario scn = demo_scenario("ex4b");
  for (auto _ : state) benchmark::DoNotOptimize(simulate(scn));
}
BENCHMARK(BM_SimulateSliding);

void BM_RunScenarioWithVerdicts(benchmark::State& state) {
  Scenario scn = demo_scenario("ex3a");
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(scn));
}
BENCHMARK(BM_RunScenarioWithVerdicts);

}  // namespace
