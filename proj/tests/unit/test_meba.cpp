#include <gtest/gtest.h>

#include <map>
#include <random>

#include "mcs/errors.hpp"
#include "mcs/meba.hpp"

using namespace mcs;

namespace {

// Two HC tasks (T = 10, 20; C = 5, 10) and one LC task: U_H = 1.
TaskSet two_hc() {
  return TaskSet({McTask{1, 10, 5, Criticality::HC, 0, {}}, McTask{2, 20, 10, Criticality::HC, 0, {}},
                  McTask{3, 10, 2, Criticality::LC, 0, {}}});
}

}  // namespace

TEST(Meba, FirstBudgetTakesWholeShare) {
  MebaState s(two_hc(), Rational(1, 2));
  EXPECT_EQ(s.beta_budget(), Rational(1, 2));
  EXPECT_EQ(s.on_dispatch(0), 5);   // 10 * 1/2
  EXPECT_EQ(s.on_dispatch(1), 10);  // 20 * 1/2
}

TEST(Meba, BudgetShrinksByOthersMaxima) {
  MebaState s(two_hc(), Rational(1, 2));
  s.on_dispatch(0);
  s.on_preempt_or_complete(0, 2);
  EXPECT_EQ(s.on_dispatch(1), 20 * (Rational(1, 2) - Rational(2, 10)));  // 6
  s.on_preempt_or_complete(1, 3);
  EXPECT_EQ(s.on_dispatch(0), 10 * (Rational(1, 2) - Rational(3, 20)));  // 7/2
  s.on_preempt_or_complete(0, 1);  // below the maximum: no change
  EXPECT_EQ(s.max_execution(0), 2);
  EXPECT_EQ(s.observed_load(), Rational(2, 10) + Rational(3, 20));
}

TEST(Meba, OwnMaximumDoesNotReduceOwnBudget) {
  MebaState s(two_hc(), Rational(1, 2));
  s.on_dispatch(0);
  s.on_preempt_or_complete(0, 4);
  EXPECT_EQ(s.on_dispatch(0), 5);
}

TEST(Meba, ExhaustionSwitchesAndSnapshotsLoad) {
  MebaState s(two_hc(), Rational(1, 2));
  s.on_dispatch(0);
  s.on_preempt_or_complete(0, 2);
  const Rational b = s.on_dispatch(1);
  const auto sw = s.on_budget_exhausted(1, Rational(17), b);
  EXPECT_EQ(s.mode(), Mode::HC);
  EXPECT_EQ(sw.trigger, 1u);
  EXPECT_EQ(sw.time, 17);
  ASSERT_EQ(sw.max_exec.size(), 3u);
  EXPECT_EQ(sw.max_exec[1], b);
  EXPECT_EQ(sw.max_exec[2], 0);
  EXPECT_EQ(s.observed_load(), s.beta_budget());
  EXPECT_THROW(s.on_dispatch(0), WrongMode);
  EXPECT_THROW(s.on_budget_exhausted(0, 18, 0), WrongMode);
  EXPECT_THROW(s.on_preempt_or_complete(0, 1), WrongMode);
  s.on_idle();
  EXPECT_EQ(s.mode(), Mode::LC);
  EXPECT_EQ(s.observed_load(), 0);
  EXPECT_EQ(s.on_dispatch(1), 10);
}

TEST(Meba, RejectsLcTasksAndOverruns) {
  MebaState s(two_hc(), Rational(1, 2));
  EXPECT_THROW(s.on_dispatch(2), InvalidTask);
  s.on_dispatch(0);
  EXPECT_THROW(s.on_preempt_or_complete(0, 6), BudgetOverrun);
  EXPECT_THROW(MebaState(two_hc(), Rational(2)), InvalidFraction);
}

TEST(Meba, ZeroBetaGivesZeroBudgets) {
  MebaState s(two_hc(), 0);
  EXPECT_EQ(s.on_dispatch(0), 0);
  EXPECT_EQ(s.on_dispatch(1), 0);
}

// Random dispatch/consume sequences against a direct recomputation of the
// budget rule; the load never exceeds beta*U_H while in LC mode.
TEST(Meba, RandomSequencesMatchOracle) {
  std::mt19937_64 g(11);
  const TaskSet ts = two_hc();
  for (int run = 0; run < 200; ++run) {
    const Rational beta(static_cast<long>(g() % 11), 10);
    MebaState s(ts, beta);
    std::map<std::size_t, Rational> em;
    for (int step = 0; step < 30 && s.mode() == Mode::LC; ++step) {
      const std::size_t i = g() % 2;
      const std::size_t j = 1 - i;
      const Rational other = em[j] / ts[j].period;
      Rational want = ts[i].period * (beta * 1 - other);
      if (want < 0) want = 0;
      const Rational b = s.on_dispatch(i);
      ASSERT_EQ(b, want);
      const Rational use = b * Rational(static_cast<long>(g() % 5), 4);  // 0, 1/4 ... full
      if (use == b && g() % 3 == 0) {
        s.on_budget_exhausted(i, step, use);
        if (use > em[i]) em[i] = use;
        EXPECT_EQ(s.observed_load(), em[0] / 10 + em[1] / 20);
        break;
      }
      s.on_preempt_or_complete(i, use);
      if (use > em[i]) em[i] = use;
      ASSERT_LE(s.observed_load(), s.beta_budget());
      ASSERT_EQ(s.observed_load(), em[0] / 10 + em[1] / 20);
    }
  }
}
