#include <benchmark/benchmark.h>

#include "cansim/analysis.hpp"
#include "support/random_graphs.hpp"

using namespace cansim;
using namespace cansim::testing;

namespace {

SignedDigraph graph_of(int n) {
  Rng rng(static_cast<unsigned>(n));
  return random_balanced_strong(rng, n, 0.5);
}

void BM_StructuralBalance(benchmark::State& state) {
  SignedDigraph g = graph_of(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(structural_balance(g));
}
BENCHMARK(BM_StructuralBalance)->Arg(8)->Arg(16)->Arg(32);

void BM_StrongComponents(benchmark::State& state) {
  Rng rng(static_cast<unsigned>(state.range(0)));
  SignedDigraph g = random_weak(rng, {3, 3}, {true, false}, static_cast<int>(state.range(0)) - 6);
  for (auto _ : state) benchmark::DoNotOptimize(strong_components(g));
}
BENCHMARK(BM_StrongComponents)->Arg(12)->Arg(24);

void BM_Analyze(benchmark::State& state) {
  SignedDigraph g = graph_of(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(analyze(g));
}
BENCHMARK(BM_Analyze)->Arg(8)->Arg(16)->Arg(32);

void BM_DiagonalStabilizer(benchmark::State& state) {
  Rng rng(9);
  SignedDigraph g = random_unbalanced_strong(rng, static_cast<int>(state.range(0)), 0.5);
  Eigen::MatrixXd l = g.laplacian();
  for (auto _ : state) benchmark::DoNotOptimize(diagonal_stabilizer(l));
}
BENCHMARK(BM_DiagonalStabilizer)->Arg(4)->Arg(8);

}  // namespace
