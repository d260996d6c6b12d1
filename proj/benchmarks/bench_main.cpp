#include <benchmark/benchmark.h>

#include "dynsense/analysis.hpp"
#include "dynsense/families.hpp"
#include "dynsense/systems.hpp"

namespace {

using namespace dynsense;

void BM_SkewStep(benchmark::State& state) {
  const auto alpha = systems::CircleCoord::sqrt2_minus_one(64);
  auto p = systems::TorusPoint::zero(static_cast<int>(state.range(0)), 64);
  for (auto _ : state) {
    p = systems::skew_step(p, alpha);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_SkewStep)->Arg(2)->Arg(5);

void BM_SkewClosedForm(benchmark::State& state) {
  const auto alpha = systems::CircleCoord::sqrt2_minus_one(64);
  const auto p = systems::TorusPoint::zero(3, 64);
  const std::int64_t n = state.range(0);
  for (auto _ : state) {
    auto q = systems::skew_iterate_closed(p, alpha, n);
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_SkewClosedForm)->Arg(1024)->Arg(65536);

void BM_MorseSymbol(benchmark::State& state) {
  std::int64_t n = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(systems::morse_symbol(n));
    ++n;
  }
}
BENCHMARK(BM_MorseSymbol);

void BM_SymbolicMetric(benchmark::State& state) {
  const auto p = systems::SymbolicPoint::morse_omega().flipped().shifted(-64);
  const auto q = systems::SymbolicPoint::eta().shifted(-64);
  for (auto _ : state) {
    auto mv = systems::symbolic_metric(p, q, state.range(0));
    benchmark::DoNotOptimize(mv);
  }
}
BENCHMARK(BM_SymbolicMetric)->Arg(64)->Arg(1024);

void BM_FindFiniteIp(benchmark::State& state) {
  const auto s = families::WindowSet::full(64);
  for (auto _ : state) {
    auto r = families::find_finite_ip(s, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_FindFiniteIp)->Arg(4)->Arg(12);

void BM_SensitivityRotation(benchmark::State& state) {
  const systems::RotationSystem rot(systems::CircleCoord::sqrt2_minus_one(64));
  const systems::CircleBall u{systems::CircleCoord::zero(64), Dyadic::pow2_neg(6)};
  for (auto _ : state) {
    auto s = analysis::sensitivity_set(rot, u, Dyadic::pow2_neg(5), state.range(0), 8);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_SensitivityRotation)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
