#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mcs/analysis.hpp"
#include "mcs/experiments.hpp"

using namespace mcs;

namespace {

RunOptions opts(Exec e, std::size_t trials) {
  RunOptions o;
  o.seed = 99;
  o.trials = trials;
  o.exec = e;
  return o;
}

}  // namespace

TEST(Experiments, Table3SerialAndParallelAgree) {
  for (std::size_t b : {0u, 4u}) {
    const auto s = table3_samples(opts(Exec::Serial, 64), 4, b, false);
    const auto p = table3_samples(opts(Exec::Parallel, 64), 4, b, false);
    EXPECT_EQ(s, p);
    for (double v : s) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Experiments, Table3SamplesAreIndependentOfTrialCount) {
  const auto small = table3_samples(opts(Exec::Parallel, 10), 3, 2, true);
  const auto large = table3_samples(opts(Exec::Parallel, 40), 3, 2, true);
  EXPECT_TRUE(std::equal(small.begin(), small.end(), large.begin()));
}

TEST(Experiments, Table3CsvShape) {
  const auto cells = run_table3(opts(Exec::Parallel, 8), false, {3});
  ASSERT_EQ(cells.size(), 5u);
  EXPECT_DOUBLE_EQ(cells[0].reference, 0.985);
  std::ostringstream out;
  write_table3_csv(out, opts(Exec::Parallel, 8), cells);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("# mcsched", 0), 0u);
  std::getline(in, line);
  EXPECT_EQ(line, "rc,band_lo,band_hi,lc_variant,sets,mean,stddev,reference,abs_diff");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 5);
}

TEST(Experiments, SuitesSerialAndParallelAgree) {
  SuiteOptions s;
  s.run = opts(Exec::Serial, 12);
  s.vectors = 5;
  s.horizon = 200;
  SuiteOptions p = s;
  p.run.exec = Exec::Parallel;
  const auto a = run_lemma1_suite(s);
  const auto b = run_lemma1_suite(p);
  EXPECT_EQ(a.checks, b.checks);
  EXPECT_EQ(a.switches, b.switches);
  const auto c = run_e2e_suite(s);
  const auto d = run_e2e_suite(p);
  EXPECT_EQ(c.checks, d.checks);
}

TEST(Experiments, ScenariosPassTheTest) {
  Rng rng = make_rng(5);
  for (std::size_t v = 0; v < 16; ++v) {
    const auto sc = random_scenario(rng, v, 300);
    const auto verdict = theorem1_test(sc.ts, sc.alpha_star, sc.beta_star);
    ASSERT_TRUE(verdict.schedulable);
    EXPECT_GE(sc.x, verdict.x_lo);
    EXPECT_LE(sc.x, verdict.x_hi);
    EXPECT_GT(sc.x, 0);
    EXPECT_EQ(alpha_star_from_per_task(sc.ts.with_alphas(sc.alphas)), sc.alpha_star);
    EXPECT_NO_THROW(validate_jobs(sc.ts, sc.jobs));
  }
}

TEST(Experiments, Figure2EndpointsAndBounds) {
  const auto cells = run_figure2();
  EXPECT_EQ(cells.size(), 6u * 50u);
  for (const auto& c : cells) {
    EXPECT_GE(c.beta_opt, 0.0);
    EXPECT_LE(c.beta_opt, c.one_minus_m + 1e-12);
  }
}

TEST(Experiments, Figure4RatioAtLeastOne) {
  for (const auto& c : run_figure4()) {
    EXPECT_GE(c.ratio, 1.0 - 1e-12) << c.u_lc << ' ' << c.w;
    if (c.w >= c.overlap_w) {
      EXPECT_NEAR(c.ratio, 1.0, 1e-9) << c.u_lc << ' ' << c.w;
    }
  }
}

TEST(Experiments, Figure3ProducesBothModels) {
  const auto cells = run_figure3(ExecDistribution::table4(), 3, {Rational(1, 2)});
  ASSERT_EQ(cells.size(), 3u);
  std::ostringstream out;
  write_figure3_csv(out, cells);
  EXPECT_NE(out.str().find("n,beta,model,p\n1,1/2,s,"), std::string::npos);
}
