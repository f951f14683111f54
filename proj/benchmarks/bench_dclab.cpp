#include <benchmark/benchmark.h>

#include "dclab/catalog.hpp"
#include "dclab/criterion.hpp"
#include "dclab/orbits.hpp"

using namespace dclab;

namespace {

const IndexLattice Z = IndexLattice::integers();

OperatorSpec flagship() { return OperatorSpec::forward_shift(Z, WeightRule::split(3, 4)); }

void BM_FlagshipPower(benchmark::State& state) {
  const OperatorSpec f = flagship();
  const SupportVector v(Z, {{-7, 1}, {1, ExactComplex(2, 1)}, {9, Rational(1, 3)}});
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(apply_power(f, v, n));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FlagshipPower)->RangeMultiplier(4)->Range(4, 4096)->Complexity();

void BM_ScalarCoverage(benchmark::State& state) {
  const Instance inst = builtin_instance("scalar_diskcyclic");
  const auto targets = sample_targets(inst.sub, 10, static_cast<std::size_t>(state.range(0)), {-9, 9}, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(coverage_report(inst.op, inst.seed_vector, inst.sub, targets, {}, 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScalarCoverage)->Arg(50)->Arg(200);

void BM_FlagshipCoverage(benchmark::State& state) {
  const Instance inst = builtin_instance("flagship_shift");
  const RunParameters p = inst.parameters;
  const auto targets = sample_targets(inst.sub, p.radius, p.targets, p.window, p.seed);
  const SupportVector x = seed_from_targets(inst.op, inst.seed_construction->back_map, targets, 200);
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(coverage_report(inst.op, x, inst.sub, targets, {p.max_n, p.tol_squared()}, threads));
  }
}
BENCHMARK(BM_FlagshipCoverage)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_CriterionEvaluation(benchmark::State& state) {
  const Instance inst = builtin_instance("flagship_shift");
  const auto probes = default_probes(*inst.criterion);
  const auto k_max = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_criterion(*inst.criterion, probes, k_max));
}
BENCHMARK(BM_CriterionEvaluation)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_CompareMagnitude(benchmark::State& state) {
  const ExactComplex a(rational_pow(Rational(3, 7), 40), rational_pow(Rational(5, 11), 30));
  const ExactComplex b(rational_pow(Rational(2, 5), 35), rational_pow(Rational(4, 9), 33));
  for (auto _ : state) benchmark::DoNotOptimize(compare_magnitude(a, b));
}
BENCHMARK(BM_CompareMagnitude);

}  // namespace

BENCHMARK_MAIN();
