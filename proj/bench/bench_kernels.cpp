// Serial reference vs OpenMP kernels. Results of each pair are identical by
// construction; only wall time differs.

#include <benchmark/benchmark.h>

#include "mcs/experiments.hpp"
#include "mcs/probability.hpp"

using namespace mcs;

namespace {

RunOptions run(Exec e, std::size_t trials) {
  RunOptions o;
  o.seed = 1;
  o.trials = trials;
  o.exec = e;
  return o;
}

void BM_Table3Cell(benchmark::State& st) {
  const auto opt = run(static_cast<Exec>(st.range(0)), 1000);
  for (auto _ : st) benchmark::DoNotOptimize(table3_samples(opt, 4, 3, false));
  st.SetLabel(st.range(0) == 0 ? "serial" : "parallel");
}

void BM_NoSwitchEnumerate(benchmark::State& st) {
  const auto dist = ExecDistribution::table4();
  ProbOptions o;
  o.route = static_cast<ProbRoute>(st.range(0));
  const int n = static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(p_noswitch_dynamic(dist, n, Rational(3, 4), o));
  static const char* names[] = {"auto", "serial", "parallel", "convolve"};
  st.SetLabel(names[st.range(0)]);
}

void BM_Lemma1Suite(benchmark::State& st) {
  SuiteOptions o;
  o.run = run(static_cast<Exec>(st.range(0)), 200);
  o.horizon = 500;
  for (auto _ : st) benchmark::DoNotOptimize(run_lemma1_suite(o));
  st.SetLabel(st.range(0) == 0 ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_Table3Cell)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NoSwitchEnumerate)
    ->ArgsProduct({{1, 2, 3}, {6, 8}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Lemma1Suite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
