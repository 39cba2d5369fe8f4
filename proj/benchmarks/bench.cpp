// Microbenchmarks for the paths that dominate real use: single evaluations,
// exhaustive criterion sweeps, orbit closure, and profile enumeration.
#include <benchmark/benchmark.h>

#include "fbcheck/methods.hpp"
#include "fbcheck/oracle.hpp"

using namespace fbc;

namespace {

MethodPtr method(const std::string& spec_text) { return build(parse_method_spec(spec_text)); }

Profile fixture_profile(const BallotSpacePtr& space) {
  // A contested five-voter profile; parse once, evaluate many times.
  return parse_profile_text("1: A>C>B\n2: B>A>C\n2: C>B>A", space);
}

void bm_evaluate(benchmark::State& state, const char* spec_text) {
  MethodPtr m = method(spec_text);
  Profile p = fixture_profile(m->space());
  for (auto _ : state) benchmark::DoNotOptimize(m->evaluate(p));
}
BENCHMARK_CAPTURE(bm_evaluate, antiplurality, "antiplurality");
BENCHMARK_CAPTURE(bm_evaluate, irv, "irv");
BENCHMARK_CAPTURE(bm_evaluate, mdda, "mdda");

void bm_sweep(benchmark::State& state, const char* spec_text, Criterion c) {
  MethodPtr m = method(spec_text);
  SearchScope scope;
  scope.criterion = c;
  scope.max_voters = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Verdict v = run_check(*m, scope, 1);
    benchmark::DoNotOptimize(v.instances_examined);
  }
}
BENCHMARK_CAPTURE(bm_sweep, irv_fbc, "irv", Criterion::fbc)->Arg(5)->Arg(7)->Arg(9);
BENCHMARK_CAPTURE(bm_sweep, mdda_sfbc, "mdda", Criterion::sfbc)->Arg(4)->Arg(5);
BENCHMARK_CAPTURE(bm_sweep, plurality_monotonic, "plurality", Criterion::monotonicity)
    ->Arg(5)
    ->Arg(6);

void bm_sweep_workers(benchmark::State& state) {
  MethodPtr m = method("irv");
  SearchScope scope;
  scope.criterion = Criterion::fbc;
  scope.max_voters = 9;
  for (auto _ : state) {
    Verdict v = run_check(*m, scope, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(v.instances_examined);
  }
}
// Wall time is the honest axis here: the work happens on pool threads, so
// main-thread CPU time would undercount everything past one worker.
BENCHMARK(bm_sweep_workers)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

void bm_orbit(benchmark::State& state) {
  BallotSpacePtr space = make_space(3);
  NormalVector v = make_vector(space, {Rat(1), Rat(1), Rat(1), Rat(-2), Rat(-2), Rat(1)});
  for (auto _ : state) benchmark::DoNotOptimize(orbit(v).size());
}
BENCHMARK(bm_orbit);

void bm_enumerate(benchmark::State& state) {
  BallotSpacePtr space = make_space(3);
  int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    long long count = 0;
    enumerate_profiles(space, n, [&](const Profile&) { ++count; });
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(bm_enumerate)->Arg(6)->Arg(9)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
