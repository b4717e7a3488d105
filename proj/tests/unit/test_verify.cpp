#include <gtest/gtest.h>

#include "mcs/errors.hpp"
#include "mcs/experiments.hpp"
#include "mcs/verify.hpp"
#include "scenarios.hpp"

using namespace mcs;
using namespace mcs::testing;

namespace {

McTask lc(TaskId id, Rational t, Rational c, Rational alpha = 0) { return {id, t, c, Criticality::LC, alpha, {}}; }
McTask hc(TaskId id, Rational t, Rational c) { return {id, t, c, Criticality::HC, 0, {}}; }

TaskSet shared_budget_set() { return TaskSet({lc(1, 10, 5), hc(2, 10, 4), hc(3, 10, 4)}); }

}  // namespace

TEST(Verify, OverloadedHcSetMissesDeadlines) {
  TaskSet ts({hc(1, 4, 3), hc(2, 4, 3)});
  SimConfig cfg;
  cfg.beta_star = 1;
  cfg.horizon = 8;
  const auto tr = simulate(ts, cfg, {{1, 0, 3, 0}, {2, 0, 3, 0}, {1, 4, 3, 1}, {2, 4, 3, 1}});
  const auto v = verify_mc_schedulable(tr);
  EXPECT_FALSE(v.schedulable);
  EXPECT_EQ(v.checked_jobs, 4u);
  ASSERT_FALSE(v.violations.empty());
  EXPECT_EQ(v.violations[0].required, 3);
}

TEST(Verify, HcPeriodsCloseAtIdle) {
  const auto tr = simulate(figure1_taskset(), figure1_config(Policy::EdfUvdMeba), figure1_jobs());
  EXPECT_EQ(*mode_switch_instant(tr), 5);
  const auto p = hc_periods(tr);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].first, 5);
  EXPECT_EQ(p[0].second, 11);
}

TEST(Verify, NoSwitchMeansNoHcPeriods) {
  const auto tr = simulate(figure1_taskset(), figure1_config(Policy::EdfUvdMeba), {{1, 0, 4, 0}});
  EXPECT_FALSE(mode_switch_instant(tr));
  EXPECT_TRUE(hc_periods(tr).empty());
  EXPECT_TRUE(verify_mc_schedulable(tr).schedulable);
}

TEST(Lemma2, FixedVectorsSwitchNoLaterThanMeba) {
  const auto ts = shared_budget_set();
  JobSequence jobs{{1, 0, 5, 0}, {2, 0, Rational(105, 100), 0}, {3, 0, Rational(96, 100), 0}};
  const auto r = check_lemma2_optimality(ts, Rational(1, 4), Rational(2, 5), 10, jobs,
                                         {{{2, 1}, {3, 1}}, {{2, 2}, {3, 0}}, {{2, Rational(1, 2)}}});
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(*r.meba_switch, 2);
  ASSERT_EQ(r.fixed_switch.size(), 3u);
  EXPECT_EQ(*r.fixed_switch[0], 1);
  EXPECT_LE(*r.fixed_switch[1], 2);
}

TEST(Lemma2, RejectsInfeasibleVectors) {
  const auto ts = shared_budget_set();
  EXPECT_THROW(check_lemma2_optimality(ts, Rational(1, 4), Rational(2, 5), 10, {}, {{{2, 2}, {3, 1}}}),
               BudgetSumViolation);
  EXPECT_THROW(check_lemma2_optimality(ts, Rational(1, 4), Rational(2, 5), 10, {}, {{{2, -1}}}),
               BudgetSumViolation);
  EXPECT_THROW(check_lemma2_optimality(ts, Rational(1, 4), Rational(2, 5), 10, {}, {{{1, 1}}}), InvalidTask);
}

TEST(Mapping, Figure1ScenarioMatchesStaticSchedule) {
  const auto ts = figure1_taskset();
  const auto r = check_mapping_equivalence(ts, ts.alphas(), Rational(1, 7), Rational(1, 2), 20, figure1_jobs());
  EXPECT_TRUE(r.switched);
  EXPECT_TRUE(r.equivalent) << r.diff;
  EXPECT_EQ(*r.dynamic_switch, 5);
  EXPECT_EQ(*r.static_switch, 5);
}

TEST(Suites, SmallRunsHaveNoViolations) {
  SuiteOptions o;
  o.run.trials = 30;
  o.run.seed = 17;
  o.vectors = 20;
  o.horizon = 300;
  for (const auto& r : {run_lemma1_suite(o), run_lemma2_suite(o), run_mapping_suite(o), run_e2e_suite(o)}) {
    EXPECT_TRUE(r.passed()) << r.name << ": " << r.first_failure;
    EXPECT_EQ(r.trials, 30u);
    EXPECT_GT(r.checks, 0u);
  }
}
