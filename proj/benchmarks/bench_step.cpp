#include <benchmark/benchmark.h>

#include "srrls/algorithms.hpp"
#include "srrls/signalgen.hpp"

namespace {

void BM_Step(benchmark::State& state, srrls::Variant variant) {
  const auto order = static_cast<std::size_t>(state.range(0));
  srrls::AlgorithmSpec spec;
  spec.variant = variant;
  spec.rho = 0.03;
  srrls::AdaptiveFilter filter(spec, order);
  srrls::Ar2Source input(7);
  srrls::Rng rng(8);
  const srrls::Vector w_o = srrls::make_sparse_system(order, order / 16, rng).w_o;
  srrls::Regressor x(order);
  for (auto _ : state) {
    const double sample = input.next();
    x.push(sample);
    benchmark::DoNotOptimize(filter.step(sample, x.values().dot(w_o)));
  }
  state.SetItemsProcessed(state.iterations());
}

}  // namespace

BENCHMARK_CAPTURE(BM_Step, RLS, srrls::Variant::kRls)->Arg(64)->Arg(256);
BENCHMARK_CAPTURE(BM_Step, S_RRLS, srrls::Variant::kSRRls)->Arg(64)->Arg(256);
BENCHMARK_CAPTURE(BM_Step, JO_S_RRLS, srrls::Variant::kJoSRRls)->Arg(64)->Arg(256);
BENCHMARK_MAIN();
