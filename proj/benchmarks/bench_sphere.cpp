#include <benchmark/benchmark.h>

#include "greenlab/measure.hpp"
#include "greenlab/observable.hpp"
#include "greenlab/rational_map.hpp"
#include "greenlab/transfer.hpp"

using namespace greenlab;

namespace {

RationalMap map_of_degree(int d) {
  std::vector<Complex> numer(static_cast<std::size_t>(d + 1), 0.0);
  numer[0] = {-0.12, 0.74};
  numer.back() = 1.0;
  return make_rational_map(std::move(numer), {1.0});
}

void BM_Preimages(benchmark::State& state) {
  const RationalMap f = map_of_degree(static_cast<int>(state.range(0)));
  SpherePoint p = SpherePoint::from_z({0.3, -0.2});
  for (auto _ : state) {
    auto pre = f.preimages(p);
    benchmark::DoNotOptimize(pre.data());
  }
}
BENCHMARK(BM_Preimages)->Arg(2)->Arg(3)->Arg(5)->Arg(8);

void BM_Sampler(benchmark::State& state) {
  const RationalMap f = map_of_degree(2);
  SamplerParams p;
  p.n_samples = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const EmpiricalMeasure mu = sample_equilibrium(f, p);
    benchmark::DoNotOptimize(mu.points.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sampler)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_TransferTree(benchmark::State& state) {
  const RationalMap f = map_of_degree(2);
  const Observable obs = Observable::trig_poly({0.0, 1.0, 0.5});
  const SpherePoint p = SpherePoint::from_z({0.6, 0.8});
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(transfer(f, obs, p, n).value);
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_TransferTree)->DenseRange(6, 12, 3)->Unit(benchmark::kMicrosecond);

void BM_TransferPaths(benchmark::State& state) {
  const RationalMap f = map_of_degree(2);
  const Observable obs = Observable::trig_poly({0.0, 1.0});
  const SpherePoint p = SpherePoint::from_z({0.6, 0.8});
  TransferBudget b;
  b.exact_depth_max = 0;
  b.mc_paths = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(transfer(f, obs, p, 16, b).value);
  }
}
BENCHMARK(BM_TransferPaths)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
