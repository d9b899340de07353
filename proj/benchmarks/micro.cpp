#include <benchmark/benchmark.h>

#include "toric/chordal.hpp"
#include "toric/families.hpp"
#include "toric/mcmc.hpp"
#include "toric/pfaffian.hpp"
#include "toric/sampler.hpp"
#include "toric/zeval.hpp"

using namespace toric;

namespace {

void BM_ZCacheFill(benchmark::State& state) {
  const Count n = state.range(0);
  const ToricModel m = poisson_model(5, 2 * n + 5, n);
  for (auto _ : state) {
    ZCache cache(m.a, m.y, m.b);
    benchmark::DoNotOptimize(cache.z(m.b));
  }
}
BENCHMARK(BM_ZCacheFill)->Arg(10)->Arg(20)->Arg(40);

void BM_BellTable(benchmark::State& state) {
  for (auto _ : state) {
    BellTable t(5, 288, 120);
    benchmark::DoNotOptimize(t.z(288, 120));
  }
}
BENCHMARK(BM_BellTable)->Unit(benchmark::kMillisecond);

void BM_DirectDraw(benchmark::State& state, ToricModel model, ProviderKind kind) {
  const ProviderFactory factory = make_provider_factory(model, kind);
  auto provider = factory();
  Rng rng(1);
  direct_sample(model, *provider, rng);  // fill shared tables
  for (auto _ : state) benchmark::DoNotOptimize(direct_sample(model, *provider, rng));
}
BENCHMARK_CAPTURE(BM_DirectDraw, urn_3x4, twoway_model({10, 14, 26}, {6, 9, 15, 20}), ProviderKind::urn);
BENCHMARK_CAPTURE(BM_DirectDraw, bell_m5, poisson_model(5, 288, 120), ProviderKind::bell)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_DirectDraw, chordal_123_124,
                  ToricModel::from_table(HierarchicalSpec::binary("[123][124]"),
                                         {3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9, 3}),
                  ProviderKind::chordal)
    ->Unit(benchmark::kMillisecond);

void BM_PfaffianAdvance(benchmark::State& state) {
  const auto spec = nonlway_spec(3);
  const IntMatrix a = build_configuration(spec).entries;
  const CountVec b = multiply(a, CountVec{5, 4, 6, 5, 4, 6, 5, 4});
  const RatVec y{Rat(1, 2), Rat(3), Rat(2), Rat(1), Rat(5, 3), Rat(1), Rat(1, 4), Rat(2)};
  Rng rng(3);
  for (auto _ : state) {
    NonlwayPfaffian gm(3, b, y);
    while (gm.degree() > 0) gm.advance(select_exact(gm.weights(), rng));
    benchmark::DoNotOptimize(gm.q());
  }
}
BENCHMARK(BM_PfaffianAdvance)->Unit(benchmark::kMillisecond);

void BM_MetropolisStep(benchmark::State& state) {
  const ToricModel m = twoway_model({10, 14, 26}, {6, 9, 15, 20});
  const std::vector<Move> basis = builtin_basis(m);
  CountVec u = *first_fiber_point(m.a, m.b);
  Rng rng(4);
  for (auto _ : state) {
    u = metropolis_step(u, basis, m.y, rng);
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK(BM_MetropolisStep);

void BM_Ess(benchmark::State& state) {
  std::vector<double> xs(static_cast<std::size_t>(state.range(0)));
  Rng rng(5);
  double x = 0;
  for (auto& v : xs) v = x = 0.9 * x + static_cast<double>(uniform_53(rng)) / 9007199254740992.0;
  for (auto _ : state) benchmark::DoNotOptimize(ess(xs));
}
BENCHMARK(BM_Ess)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
