#include <benchmark/benchmark.h>

#include <numbers>

#include "twistorlab/families.hpp"
#include "twistorlab/suites.hpp"
#include "twistorlab/twistor.hpp"

using namespace twistorlab;

namespace {

FamilyInstance perturbed_join(int n) {
  return make_riemannian_join(n, ProfileFunction::perturbed_sine(0.1), std::numbers::pi / 2, 1.0 / 1.1);
}

}  // namespace

// Truncated product at the highest order the library uses.
static void BM_JetMultiply(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Jet a = Jet::variable(dim, kMaxJetOrder, 0.3, 0);
  Jet b = Jet::variable(dim, kMaxJetOrder, 0.7, dim - 1);
  a = sin(a) + b;
  b = cos(b) * a;
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_JetMultiply)->Arg(2)->Arg(4)->Arg(6);

static void BM_PointGeometry(benchmark::State& state) {
  const FamilyInstance join = perturbed_join(static_cast<int>(state.range(0)));
  const auto p = halton_points(join.metric.domain, 1, 3).front();
  for (auto _ : state) {
    PointGeometry geo(join.metric, p);
    benchmark::DoNotOptimize(geo.riemann());
  }
}
BENCHMARK(BM_PointGeometry)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMicrosecond);

static void BM_KillingPoint(benchmark::State& state) {
  const FamilyInstance join = perturbed_join(static_cast<int>(state.range(0)));
  const auto p = halton_points(join.metric.domain, 1, 3).front();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_killing_point(join.metric, join.xi, p));
}
BENCHMARK(BM_KillingPoint)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMicrosecond);

// All point suites on already evaluated points.
static void BM_SuitesPerPoint(benchmark::State& state) {
  const FamilyInstance join = perturbed_join(4);
  const auto pts = halton_points(join.metric.domain, 32, 3);
  std::vector<KillingPoint> kps;
  for (const auto& p : pts) kps.push_back(evaluate_killing_point(join.metric, join.xi, p));
  const Tolerances tol;
  for (auto _ : state) {
    const SuiteResult s4 = killing_twistor_suite(kps, tol);
    benchmark::DoNotOptimize(s4);
    benchmark::DoNotOptimize(curvature_identity_suite(kps, tol, 42, 10));
    benchmark::DoNotOptimize(killing_suite(kps, tol));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(kps.size()));
}
BENCHMARK(BM_SuitesPerPoint)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
