#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "mcs/analysis.hpp"
#include "mcs/errors.hpp"
#include "mcs/generator.hpp"

using namespace mcs;

TEST(Random, StreamsAreReproducibleAndDistinct) {
  Rng a = make_rng(42, {1, 2});
  Rng b = make_rng(42, {1, 2});
  Rng c = make_rng(42, {2, 1});
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  for (int i = 0; i < 1000; ++i) {
    const auto v = uniform_int(a, -3, 3);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 3);
    const double u = uniform_unit(a);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Random, UniformIntIsFlat) {
  Rng g = make_rng(1);
  std::map<std::int64_t, int> hist;
  const int n = 60000;
  for (int i = 0; i < n; ++i) ++hist[uniform_int(g, 1, 6)];
  ASSERT_EQ(hist.size(), 6u);
  for (const auto& [k, c] : hist) EXPECT_NEAR(c / double(n), 1.0 / 6, 0.01) << k;
}

TEST(Generator, TaskDrawsRespectRanges) {
  GenParams p;
  p.ratio = 4;
  Rng g = make_rng(2);
  double sum_cl = 0;
  const int n = 100000;
  int hc = 0;
  for (int i = 0; i < n; ++i) {
    const McTask t = gen_task(p, g, i);
    const Rational cl = t.is_hc() ? *t.lc_estimate : t.wcet;
    sum_cl += to_double(cl);
    ASSERT_GE(cl, 1);
    ASSERT_LE(cl, 10);
    ASSERT_LE(t.wcet, 4 * cl);
    ASSERT_LE(t.wcet, t.period);
    ASSERT_LE(t.period, 200);
    if (t.is_hc()) {
      ++hc;
    } else {
      ASSERT_EQ(t.wcet, cl);
      ASSERT_FALSE(t.lc_estimate);
    }
  }
  EXPECT_NEAR(sum_cl / n, 5.5, 0.05);
  EXPECT_NEAR(hc / double(n), 0.5, 0.01);
}

TEST(Generator, InflatedLcVariant) {
  GenParams p;
  p.inflate_lc = true;
  Rng g = make_rng(3);
  int inflated = 0;
  for (int i = 0; i < 2000; ++i) {
    const McTask t = gen_task(p, g, i);
    if (t.is_lc() && t.wcet > 10) ++inflated;
  }
  EXPECT_GT(inflated, 0);
}

TEST(Generator, SetsLandInBand) {
  for (std::size_t b = 0; b < 5; ++b) {
    GenParams p;
    p.band = standard_bands()[b];
    for (int i = 0; i < 50; ++i) {
      Rng g = make_rng(4, {b, static_cast<std::uint64_t>(i)});
      const TaskSet ts = gen_taskset(p, g);
      const Rational ua = average_utilization(ts);
      ASSERT_GE(ua, p.band.lo);
      ASSERT_LE(ua, p.band.hi);
    }
  }
}

TEST(Generator, TimeoutAndValidation) {
  GenParams p;
  p.band = {Rational(1, 1000000), Rational(1, 1000000)};  // below any single task
  p.max_restarts = 10;
  Rng g = make_rng(5);
  EXPECT_THROW(gen_taskset(p, g), GenerationTimeout);
  GenParams bad;
  bad.ratio = 0;
  EXPECT_THROW(bad.validate(), InvalidTask);
  bad = GenParams{};
  bad.hc_probability = 2;
  EXPECT_THROW(gen_taskset(bad, g), InvalidTask);
}

TEST(MaxServiceLevel, MatchesClosedForm) {
  // U_L = 0.5, U_H = 0.8, beta* = 1/4 from C^L: M = 3/4 so alpha* = 0.
  TaskSet ts({McTask{1, 10, 5, Criticality::LC, 0, {}}, McTask{2, 10, 8, Criticality::HC, 0, Rational(2)}});
  EXPECT_EQ(max_service_level(ts), 0);
  // C^L = 1: beta* = 1/8, alpha* = 1 - (3/4)/(7/8) = 1/7.
  TaskSet ts2({McTask{1, 10, 5, Criticality::LC, 0, {}}, McTask{2, 10, 8, Criticality::HC, 0, Rational(1)}});
  EXPECT_EQ(max_service_level(ts2), Rational(1, 7));
  // beta* = 1 with M > 0 has no admissible alpha*.
  TaskSet ts3({McTask{1, 10, 5, Criticality::LC, 0, {}}, McTask{2, 10, 8, Criticality::HC, 0, Rational(8)}});
  EXPECT_EQ(max_service_level(ts3), 0);
  TaskSet lc_only({McTask{1, 10, 5, Criticality::LC, 0, {}}});
  EXPECT_EQ(max_service_level(lc_only), 1);
}

TEST(Demand, JobCountsFollowPeriods) {
  GenParams p;
  Rng g = make_rng(6);
  const TaskSet ts = gen_taskset(p, g);
  const Rational horizon = 1000;
  const auto jobs = gen_job_sequence(ts, horizon, DemandModel::constant(1.0), g);
  std::size_t want = 0;
  for (const auto& t : ts.tasks()) {
    const Rational q = horizon / t.period;
    auto n = boost::multiprecision::numerator(q) / boost::multiprecision::denominator(q);
    if (Rational(n) * t.period < horizon) n += 1;
    want += n.convert_to<std::size_t>();
  }
  EXPECT_EQ(jobs.size(), want);
  EXPECT_NO_THROW(validate_jobs(ts, jobs));
  for (const auto& j : jobs) EXPECT_EQ(j.demand, ts.by_id(j.task).wcet);
}

TEST(Demand, FractionGridFollowsPmf) {
  const auto dist = ExecDistribution::table4();
  const auto m = DemandModel::fraction_grid(dist);
  Rng g = make_rng(7);
  std::map<Rational, int> hist;
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++hist[m.draw_scale(g)];
  for (std::size_t k = 0; k < dist.size(); ++k)
    EXPECT_NEAR(hist[dist.scales()[k]] / double(n), dist.pmf()[k], 0.004) << k;
}

TEST(Demand, UniformAndJitter) {
  auto m = DemandModel::uniform(0.3, 1.0);
  m.lc_full = false;
  m.jitter = Rational(1, 2);
  Rng g = make_rng(8);
  TaskSet ts({McTask{1, 10, 5, Criticality::LC, 0, {}}, McTask{2, 20, 8, Criticality::HC, 0, {}}});
  const auto jobs = gen_job_sequence(ts, 5000, m, g);
  EXPECT_NO_THROW(validate_jobs(ts, jobs));
  for (const auto& j : jobs) {
    const Rational s = j.demand / ts.by_id(j.task).wcet;
    ASSERT_GE(s, Rational(3, 10));
    ASSERT_LE(s, 1);
    ASSERT_EQ(floor_to_multiple(s, Rational(1, 1000)), s);
  }
  EXPECT_LT(jobs.size(), 500u + 250u);  // jitter stretches gaps
}
