// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when
// any selected criterion fails.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "mcs/analysis.hpp"
#include "mcs/experiments.hpp"
#include "mcs/probability.hpp"
#include "mcs/simulator.hpp"
#include "mcs/verify.hpp"
#include "scenarios.hpp"

using namespace mcs;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. U_L = 0.5, U_H = 0.8: (0, 0.25) sits exactly on the boundary; anything
// with a smaller product is rejected.
Outcome theorem1_example() {
  const Utilizations u{Rational(1, 2), Rational(4, 5)};
  const auto t0 = Clock::now();
  const auto v = theorem1_test(u, 0, Rational(1, 4));
  const double us = seconds_since(t0) * 1e6;
  bool ok = v.schedulable && *threshold_m(u) == Rational(3, 4) && (1 - Rational(0)) * (1 - Rational(1, 4)) == Rational(3, 4);
  std::size_t rejected = 0, probed = 0;
  for (int a = 0; a <= 100; ++a)
    for (int b = 0; b <= 100; ++b) {
      const Rational al(a, 100), be(b, 100);
      if ((1 - al) * (1 - be) >= Rational(3, 4)) continue;
      ++probed;
      if (!theorem1_test(u, al, be).schedulable) ++rejected;
    }
  ok = ok && rejected == probed && us < 1000.0;
  return {ok, "accepts (0,0.25) with equality; rejected " + std::to_string(rejected) + "/" + std::to_string(probed) +
                  " points below the bound; single test " + fmt("%.1f", us) + " us"};
}

// 2. Mean largest alpha* per (RC, band) over 1000 seeded sets, both LC variants.
Outcome table3() {
  RunOptions opt;
  opt.seed = kSeed;
  opt.trials = 1000;
  const auto t0 = Clock::now();
  const auto plain = run_table3(opt, false);
  const auto inflated = run_table3(opt, true);
  const double secs = seconds_since(t0);
  std::ostringstream rep;
  std::size_t plain_ok = 0, inflated_ok = 0;
  double worst_plain = 0, worst_inflated = 0;
  rep << "\n    rc band        ref    plain(sd)         inflated(sd)";
  for (std::size_t i = 0; i < plain.size(); ++i) {
    const auto& p = plain[i];
    const auto& q = inflated[i];
    const double dp = std::fabs(p.mean - p.reference), dq = std::fabs(q.mean - q.reference);
    plain_ok += dp <= 0.04;
    inflated_ok += dq <= 0.04;
    worst_plain = std::max(worst_plain, dp);
    worst_inflated = std::max(worst_inflated, dq);
    const auto band = standard_bands()[p.band];
    rep << "\n    " << p.ratio << "  [" << fmt("%.2f", to_double(band.lo)) << "," << fmt("%.2f", to_double(band.hi))
        << "]  " << fmt("%.3f", p.reference) << "  " << fmt("%.3f", p.mean) << "(" << fmt("%.3f", p.stddev) << ")"
        << (dp <= 0.04 ? " ok  " : " MISS") << "   " << fmt("%.3f", q.mean) << "(" << fmt("%.3f", q.stddev) << ")"
        << (dq <= 0.04 ? " ok" : " MISS");
  }
  const bool pass = (plain_ok == plain.size() || inflated_ok == inflated.size()) && secs < 120.0;
  std::ostringstream head;
  head << "within 0.04: plain " << plain_ok << "/15 (worst " << fmt("%.3f", worst_plain) << "), inflated "
       << inflated_ok << "/15 (worst " << fmt("%.3f", worst_inflated) << "); " << fmt("%.1f", secs) << " s";
  return {pass, head.str() + rep.str()};
}

Outcome suite(SuiteReport (*fn)(const SuiteOptions&), std::size_t trials, std::size_t vectors, std::size_t need_switches) {
  SuiteOptions o;
  o.run.seed = kSeed;
  o.run.trials = trials;
  o.vectors = vectors;
  const auto t0 = Clock::now();
  const auto r = fn(o);
  std::ostringstream d;
  d << r.name << ": " << r.trials << " runs, " << r.checks << " checks, " << r.switches << " with a switch, "
    << r.violations << " violations; " << fmt("%.1f", seconds_since(t0)) << " s";
  if (!r.first_failure.empty()) d << "; first: " << r.first_failure;
  return {r.passed() && r.trials >= trials && r.switches >= need_switches, d.str()};
}

double su_grid_argmax(const Utilizations& u, double w) {
  const double ul = to_double(u.lc), uh = to_double(u.hc);
  const double m = (ul + uh - 1) / (ul * uh);
  const double top = std::max(0.0, 1 - m);
  double best = -1, arg = 0;
  for (long k = 0;; ++k) {
    const double b = std::min(top, k * 1e-4);
    const double a = std::clamp(1 - m / (1 - b), 0.0, 1.0);
    const double s = w * (b * uh + ul) + (1 - w) * (a * ul + uh);
    if (s > best) best = s, arg = b;
    if (b >= top) break;
  }
  return arg;
}

// 7. Closed-form optimum vs a 1e-4 grid search, and the endpoint claim.
Outcome figure2() {
  double worst = 0;
  std::map<double, std::pair<int, int>> ends;
  for (const auto& c : run_figure2()) {
    Utilizations u;
    u.lc = Rational(static_cast<long>(std::lround(c.u_lc * 10)), 10);
    u.hc = Rational(3, 2) - u.lc;
    worst = std::max(worst, std::fabs(c.beta_opt - su_grid_argmax(u, c.w)));
    auto& e = ends[c.u_lc];
    e.first += c.endpoint;
    e.second += 1;
  }
  int hit = 0, all = 0;
  double min_row = 1;
  std::ostringstream rows;
  for (const auto& [ul, e] : ends) {
    hit += e.first;
    all += e.second;
    min_row = std::min(min_row, double(e.first) / e.second);
    rows << " " << fmt("%.1f", ul) << ":" << e.first << "/" << e.second;
  }
  const double share = double(hit) / all;
  const bool pass = worst <= 1e-3 && share >= 0.9 && min_row >= 0.9;
  return {pass, "max |closed form - grid| = " + fmt("%.2e", worst) + "; endpoint share " + fmt("%.3f", share) +
                    " (min per U_L " + fmt("%.2f", min_row) + ", need >= 0.90):" + rows.str()};
}

// 8. No-switch probabilities under Table IV.
Outcome figure3() {
  const auto dist = ExecDistribution::table4();
  const std::vector<Rational> betas{Rational(45, 100), Rational(55, 100), Rational(65, 100), Rational(75, 100)};
  ProbOptions enumerate;
  enumerate.route = ProbRoute::EnumerateParallel;
  ProbOptions conv;
  conv.route = ProbRoute::Convolve;
  const auto a = run_figure3(dist, 8, betas, enumerate);
  const auto b = run_figure3(dist, 8, betas, conv);
  bool dominate = true, decreasing = true, stable = true;
  double max_route_diff = 0, p75_first = 0, p75_min = 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& c = a[i];
    max_route_diff = std::max(max_route_diff, std::fabs(c.p_dynamic - b[i].p_dynamic));
    if (c.p_dynamic + 1e-15 < c.p_static) dominate = false;
    if (c.n > 1 && !(c.p_static < a[i - 1].p_static)) decreasing = false;
    if (c.beta == Rational(3, 4)) {
      if (c.n == 1) p75_first = c.p_dynamic;
      p75_min = std::min(p75_min, c.p_dynamic);
    }
  }
  stable = p75_min > 0.9 * p75_first;
  const bool pass = dominate && decreasing && stable && max_route_diff <= 1e-12;
  return {pass, std::string("P^d >= P^s: ") + (dominate ? "yes" : "NO") + "; P^s strictly decreasing: " +
                    (decreasing ? "yes" : "NO") + "; P^d(0.75) min/first = " + fmt("%.4f", p75_min) + "/" +
                    fmt("%.4f", p75_first) + "; enumerate vs convolve max diff " + fmt("%.1e", max_route_diff)};
}

// 9. Dynamic/static SU ratio at U_sum = 1.3.
Outcome figure4() {
  double min_ratio = 1e9, max_dev_beyond = 0;
  std::size_t beyond = 0;
  for (const auto& c : run_figure4(1.3)) {
    min_ratio = std::min(min_ratio, c.ratio);
    if (c.w >= c.overlap_w) {
      ++beyond;
      max_dev_beyond = std::max(max_dev_beyond, std::fabs(c.ratio - 1));
    }
  }
  const bool pass = min_ratio >= 1 - 1e-12 && max_dev_beyond <= 1e-9 && beyond > 0;
  return {pass, "min ratio " + fmt("%.12f", min_ratio) + "; " + std::to_string(beyond) +
                    " cells at or beyond the overlap weight, max |ratio-1| " + fmt("%.1e", max_dev_beyond)};
}

// 10. Scripted scenario: EDF-VD misses the second LC job's guarantee, EDF-UVD
// delivers both guaranteed halves before the switch.
Outcome figure1() {
  using namespace mcs::testing;
  const auto ts = figure1_taskset();
  const auto uvd = simulate(ts, figure1_config(Policy::EdfUvdMeba), figure1_jobs());
  const auto vd = simulate(ts, figure1_config(Policy::EdfVdStatic), figure1_jobs());
  std::ostringstream a, b;
  write_trace_csv(a, uvd);
  write_trace_csv(b, vd);
  const std::string want_uvd =
      "time,event,task,job,detail\n0,release,1,0,demand=4\n0,release,2,0,demand=4\n0,dispatch,1,0,deadline=5\n"
      "2,deadline_change,1,0,deadline=10\n2,preempt,1,0,executed=2\n2,dispatch,2,0,deadline=6\n"
      "4,deadline_change,2,0,deadline=12\n4,release,3,0,demand=7\n4,preempt,2,0,executed=2\n"
      "4,dispatch,3,0,deadline=15/2 budget=1\n5,mode_switch,3,0,executed=1 mode=HC e_m=1:0|2:0|3:1\n"
      "5,drop,1,0,executed=2\n5,drop,2,0,executed=2\n11,complete,3,0,executed=7\n11,idle,,,mode=LC\n";
  const std::string want_vd =
      "time,event,task,job,detail\n0,release,1,0,demand=4\n0,release,2,0,demand=4\n0,dispatch,1,0,deadline=10\n"
      "4,complete,1,0,executed=4\n4,release,3,0,demand=7\n4,dispatch,3,0,deadline=15/2 budget=1\n"
      "5,mode_switch,3,0,executed=1 mode=HC e_m=1:0|2:0|3:0\n11,complete,3,0,executed=7\n"
      "11,dispatch,2,0,deadline=12\n13,drop,2,0,executed=2\n13,idle,,,mode=LC\n";
  const auto vu = verify_mc_schedulable(uvd);
  const auto vv = verify_mc_schedulable(vd);
  const bool miss_at_d2 = vv.violations.size() == 1 && vd.jobs[vv.violations[0].job].job.task == 2 &&
                          vd.jobs[vv.violations[0].job].deadline == 12 && vv.violations[0].received == 1;
  const bool pass = a.str() == want_uvd && b.str() == want_vd && vu.schedulable && miss_at_d2;
  return {pass, std::string("UVD trace ") + (a.str() == want_uvd ? "matches" : "DIFFERS") + ", " +
                    std::to_string(vu.violations.size()) + " violations; VD trace " +
                    (b.str() == want_vd ? "matches" : "DIFFERS") + ", miss at D2=12 " + (miss_at_d2 ? "yes" : "NO")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int only = 0;
  app.add_option("--only", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Theorem 1 worked example", theorem1_example},
      {"Table III dynamic rows", table3},
      {"Lemma 1 invariants", [] { return suite(run_lemma1_suite, 10000, 100, 0); }},
      {"Lemma 2 optimality", [] { return suite(run_lemma2_suite, 1000, 100, 0); }},
      {"Mapping equivalence", [] { return suite(run_mapping_suite, 100, 100, 100); }},
      {"MC-schedulability end to end", [] { return suite(run_e2e_suite, 10000, 100, 0); }},
      {"Optimal beta vs grid search", figure2},
      {"No-switch probability shape", figure3},
      {"Dynamic vs static SU", figure4},
      {"Scripted EDF-VD vs EDF-UVD trace", figure1},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
