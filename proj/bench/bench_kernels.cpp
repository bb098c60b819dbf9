// Serial vs OpenMP timings of the parallel sweeps. Argument 0 is serial, 1 is OpenMP.

#include <benchmark/benchmark.h>

#include "holoflow/contact.hpp"
#include "holoflow/geometry.hpp"
#include "holoflow/singularity.hpp"

using namespace holoflow;

namespace {

ExecPolicy policy_of(const benchmark::State& st) { return st.range(0) ? ExecPolicy::openmp : ExecPolicy::serial; }

void BM_ArcScan(benchmark::State& st) {
  set_default_policy(policy_of(st));
  auto ca = gallery("contact_alpha", {{"alpha", 0.5}});
  ArcScanOptions opts;
  opts.life_times = false;
  opts.classify_endpoints = false;
  for (auto _ : st) benchmark::DoNotOptimize(detect_arcs(ca, opts));
}

void BM_RadialProbe(benchmark::State& st) {
  auto gen = gallery("blaschke_osc");
  RadialSchedule sched(4, 48);
  auto f = [&](cplx z) { return gen.G(z); };
  for (auto _ : st)
    benchmark::DoNotOptimize(radial_probe(f, BoundaryPoint::from_angle(0.0), sched, 1e-4, policy_of(st)));
}

void BM_Classify(benchmark::State& st) {
  set_default_policy(policy_of(st));
  auto gen = gallery("sector", {{"alpha", 0.5}});
  for (auto _ : st)
    benchmark::DoNotOptimize(classify(gen, BoundaryPoint::from_angle(kPi), RadialSchedule(4, 24)));
}

void BM_SectorTest(benchmark::State& st) {
  set_default_policy(policy_of(st));
  auto comb = PlanarDomain::comb({0.5, 0.25, 0.125, 0.0625});
  for (auto _ : st) benchmark::DoNotOptimize(sector_test(comb, cplx(-2.0, 0.5), 1.0, 1.0, 0.5, kDefaultSeed, 1 << 16));
}

void BM_Bertilsson(benchmark::State& st) {
  set_default_policy(policy_of(st));
  auto dom = PlanarDomain::sector(-1.0, 0.0, 0.5 * kPi);
  for (auto _ : st) benchmark::DoNotOptimize(bertilsson_alphas(dom, -1.0, 2.0, 40));
}

void BM_StripCrossSections(benchmark::State& st) {
  set_default_policy(policy_of(st));
  auto strip = PlanarDomain::strip(0.0, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(rw_subdivision(strip, {1.0, 100.0, 1000}));
}

}  // namespace

BENCHMARK(BM_ArcScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RadialProbe)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Classify)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SectorTest)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Bertilsson)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StripCrossSections)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
