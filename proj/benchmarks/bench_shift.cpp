#include <benchmark/benchmark.h>

#include "greenlab/shift.hpp"

using namespace greenlab;

namespace {

CylinderFunction ramp(int d, int depth) {
  std::size_t size = 1;
  for (int i = 0; i < depth; ++i) size *= static_cast<std::size_t>(d);
  std::vector<Rational> t;
  t.reserve(size);
  for (std::size_t i = 0; i < size; ++i) t.emplace_back(static_cast<long>(i % 7) - 3, 4);
  for (auto& v : t) v.canonicalize();
  return CylinderFunction(d, depth, std::move(t));
}

void BM_ShiftCorrelation(benchmark::State& state) {
  const CylinderFunction phi = ramp(2, static_cast<int>(state.range(0)));
  const CylinderFunction psi = CylinderFunction::indicator(2, {0, 1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(shift_correlation(phi, psi, 6));
  }
}
BENCHMARK(BM_ShiftCorrelation)->Arg(3)->Arg(6)->Arg(10);

void BM_ShiftCorrelationAdjoint(benchmark::State& state) {
  const CylinderFunction phi = ramp(2, static_cast<int>(state.range(0)));
  const CylinderFunction psi = CylinderFunction::indicator(2, {0, 1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(shift_correlation_adjoint(phi, psi, 6));
  }
}
BENCHMARK(BM_ShiftCorrelationAdjoint)->Arg(3)->Arg(6)->Arg(10);

}  // namespace
