#include "mcs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "mcs/analysis.hpp"
#include "mcs/csv.hpp"
#include "mcs/errors.hpp"
#include "mcs/verify.hpp"

namespace mcs {

namespace {

// Runs body(i) for i in [0, n); results must be written by index.
// The first exception thrown by any trial is rethrown after the loop.
template <class F>
void for_each_trial(std::size_t n, const RunOptions& opt, F&& body) {
  if (opt.exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::int64_t i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  };
  const int threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) guarded(i);
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::pair<double, double> mean_and_sd(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double sq = 0.0;
  for (double x : v) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / static_cast<double>(v.size() - 1))};
}

constexpr std::uint64_t kTable3Stream = 3;
constexpr std::uint64_t kLemma1Stream = 101;
constexpr std::uint64_t kLemma2Stream = 102;
constexpr std::uint64_t kMappingStream = 103;
constexpr std::uint64_t kE2eStream = 104;

std::string rational_csv(const Rational& r) { return fmt_double(to_double(r), 6); }

}  // namespace

std::vector<double> table3_samples(const RunOptions& opt, int ratio, std::size_t band, bool inflate_lc) {
  const auto bands = standard_bands();
  if (band >= bands.size()) throw InvalidTask("band index out of range");
  GenParams p;
  p.ratio = ratio;
  p.band = bands[band];
  p.inflate_lc = inflate_lc;
  std::vector<double> out(opt.trials);
  for_each_trial(opt.trials, opt, [&](std::size_t t) {
    Rng rng = make_rng(opt.seed, {kTable3Stream, static_cast<std::uint64_t>(ratio), band, inflate_lc ? 1u : 0u, t});
    out[t] = to_double(max_service_level(gen_taskset(p, rng)));
  });
  return out;
}

std::vector<Table3Cell> run_table3(const RunOptions& opt, bool inflate_lc, const std::vector<int>& ratios) {
  const std::size_t nb = standard_bands().size();
  std::vector<Table3Cell> cells;
  for (int rc : ratios) {
    for (std::size_t b = 0; b < nb; ++b) {
      const auto samples = table3_samples(opt, rc, b, inflate_lc);
      const auto [mean, sd] = mean_and_sd(samples);
      Table3Cell c;
      c.ratio = rc;
      c.band = b;
      c.inflate_lc = inflate_lc;
      c.sets = samples.size();
      c.mean = mean;
      c.stddev = sd;
      c.reference = rc >= 3 && rc <= 5 ? kTable3Reference[static_cast<std::size_t>(rc - 3)][b] : std::nan("");
      cells.push_back(c);
    }
  }
  return cells;
}

void write_table3_csv(std::ostream& out, const RunOptions& opt, const std::vector<Table3Cell>& cells) {
  write_csv_preamble(out, "table3_dynamic", opt.seed, "trials=" + std::to_string(opt.trials));
  out << "rc,band_lo,band_hi,lc_variant,sets,mean,stddev,reference,abs_diff\n";
  const auto bands = standard_bands();
  for (const auto& c : cells) {
    out << c.ratio << ',' << rational_csv(bands[c.band].lo) << ',' << rational_csv(bands[c.band].hi) << ','
        << (c.inflate_lc ? "inflated" : "plain") << ',' << c.sets << ',' << fmt_double(c.mean) << ','
        << fmt_double(c.stddev) << ',' << fmt_double(c.reference, 3) << ','
        << fmt_double(std::fabs(c.mean - c.reference)) << '\n';
  }
}

std::vector<double> figure_w_grid() {
  std::vector<double> w;
  for (int k = 1; k <= 50; ++k) w.push_back(k / 50.0);
  return w;
}

namespace {

std::vector<Utilizations> lc_grid(double u_sum) {
  const auto total = Rational(static_cast<long long>(std::llround(u_sum * 10)), 10);
  std::vector<Utilizations> out;
  for (int k = static_cast<int>(std::llround((u_sum - 1.0) * 10)); k <= 10; ++k) {
    Utilizations u;
    u.lc = Rational(k, 10);
    u.hc = total - u.lc;
    if (u.lc > 0 && u.hc > 0) out.push_back(u);
  }
  return out;
}

}  // namespace

std::vector<Figure2Cell> run_figure2(double u_sum) {
  std::vector<Figure2Cell> cells;
  for (const auto& u : lc_grid(u_sum)) {
    const double m = to_double(*threshold_m(u));
    const double top = m <= 0 ? 1.0 : std::max(0.0, 1.0 - m);
    for (double w : figure_w_grid()) {
      Figure2Cell c;
      c.u_lc = to_double(u.lc);
      c.w = w;
      c.beta_opt = optimal_beta_for_su(u, w);
      c.one_minus_m = top;
      c.endpoint = std::fabs(c.beta_opt) <= 1e-9 || std::fabs(c.beta_opt - top) <= 1e-9;
      cells.push_back(c);
    }
  }
  return cells;
}

void write_figure2_csv(std::ostream& out, const std::vector<Figure2Cell>& cells) {
  write_csv_preamble(out, "figure2", 0, "u_sum=1.5");
  out << "u_lc,w,beta_opt,one_minus_m,endpoint\n";
  for (const auto& c : cells)
    out << fmt_double(c.u_lc, 2) << ',' << fmt_double(c.w, 2) << ',' << fmt_double(c.beta_opt, 9) << ','
        << fmt_double(c.one_minus_m, 9) << ',' << (c.endpoint ? 1 : 0) << '\n';
}

std::vector<Figure3Cell> run_figure3(const ExecDistribution& dist, int n_max, const std::vector<Rational>& betas,
                                     const ProbOptions& prob) {
  std::vector<Figure3Cell> cells;
  for (const auto& b : betas) {
    for (int n = 1; n <= n_max; ++n) {
      Figure3Cell c;
      c.n = n;
      c.beta = b;
      c.p_static = p_noswitch_static(dist, n, b);
      c.p_dynamic = p_noswitch_dynamic(dist, n, b, prob);
      cells.push_back(c);
    }
  }
  return cells;
}

void write_figure3_csv(std::ostream& out, const std::vector<Figure3Cell>& cells) {
  write_csv_preamble(out, "figure3", 0, "");
  out << "n,beta,model,p\n";
  for (const auto& c : cells) {
    out << c.n << ',' << to_string(c.beta) << ",s," << fmt_double(c.p_static, 12) << '\n';
    out << c.n << ',' << to_string(c.beta) << ",d," << fmt_double(c.p_dynamic, 12) << '\n';
  }
}

std::vector<Figure4Cell> run_figure4(double u_sum) {
  std::vector<Figure4Cell> cells;
  for (const auto& u : lc_grid(u_sum)) {
    const double overlap = su_overlap_threshold(u);
    for (double w : figure_w_grid()) {
      Figure4Cell c;
      c.u_lc = to_double(u.lc);
      c.w = w;
      c.su_dynamic = total_system_utilization(u, w, optimal_beta_for_su(u, w));
      c.su_static = static_model_su(u, w);
      c.ratio = c.su_dynamic / c.su_static;
      c.overlap_w = overlap;
      cells.push_back(c);
    }
  }
  return cells;
}

void write_figure4_csv(std::ostream& out, const std::vector<Figure4Cell>& cells) {
  write_csv_preamble(out, "figure4", 0, "u_sum=1.3");
  out << "u_lc,w,su_dynamic,su_static,ratio,overlap_w\n";
  for (const auto& c : cells)
    out << fmt_double(c.u_lc, 2) << ',' << fmt_double(c.w, 2) << ',' << fmt_double(c.su_dynamic, 9) << ','
        << fmt_double(c.su_static, 9) << ',' << fmt_double(c.ratio, 9) << ',' << fmt_double(c.overlap_w, 9) << '\n';
}

// ---- scenarios ----

namespace {

Rational thousandth_fraction(Rng& rng, const Rational& top) {
  return floor_to_multiple(top * Rational(uniform_int(rng, 0, 1000), 1000), Rational(1, 1000));
}

Rational pick_x(Rng& rng, const SchedVerdict& v) {
  const Rational lo = v.x_lo > 0 ? v.x_lo : v.x_hi;
  switch (uniform_int(rng, 0, 3)) {
    case 0: return lo;
    case 1: return v.x_hi;
    default: {
      const Rational step(1, 1000);
      Rational a = floor_to_multiple(lo, step);
      if (a < lo) a += step;
      const Rational b = floor_to_multiple(v.x_hi, step);
      if (a > b || a <= 0) return lo;
      const Rational span = (b - a) / step;
      const auto k = uniform_int(rng, 0, boost::multiprecision::numerator(span).convert_to<std::int64_t>());
      return a + step * k;
    }
  }
}

DemandModel demand_for(std::size_t variant, std::string& label) {
  switch (variant % 4) {
    case 0: label = "table4"; return DemandModel::fraction_grid(ExecDistribution::table4());
    case 1: label = "uniform(0.1,1)"; return DemandModel::uniform(0.1, 1.0);
    case 2: {
      label = "uniform(0.3,1)+jitter,lc-random";
      auto m = DemandModel::uniform(0.3, 1.0);
      m.lc_full = false;
      m.jitter = Rational(1, 2);
      return m;
    }
    default: label = "constant(1)"; return DemandModel::constant(1.0);
  }
}

}  // namespace

Scenario random_scenario(Rng& rng, std::size_t variant, const Rational& horizon) {
  const auto bands = standard_bands();
  for (int attempt = 0; attempt < 100000; ++attempt) {
    GenParams p;
    p.ratio = static_cast<int>(uniform_int(rng, 3, 5));
    p.band = bands[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(bands.size()) - 1))];
    TaskSet ts = gen_taskset(p, rng);
    const Utilizations u = utilizations(ts);
    const auto m = threshold_m(u);
    if (!m || *m >= 1) continue;

    Scenario s;
    const Rational beta_top = *m <= 0 ? Rational(1) : 1 - *m;
    s.beta_star = uniform_int(rng, 0, 7) == 0 ? beta_top : thousandth_fraction(rng, beta_top);
    const Rational alpha_top = max_alpha_given_beta(u, s.beta_star);
    s.alpha_star = uniform_int(rng, 0, 3) == 0 ? alpha_top : thousandth_fraction(rng, alpha_top);
    const SchedVerdict v = theorem1_test(u, s.alpha_star, s.beta_star);
    if (!v.schedulable || (v.x_lo <= 0 && v.x_hi <= 0)) continue;
    s.x = pick_x(rng, v);
    s.alphas = distribute_hc_budget_equal(ts, s.alpha_star);
    s.ts = ts.with_alphas(s.alphas);
    const DemandModel model = demand_for(variant, s.demand);
    s.jobs = gen_job_sequence(s.ts, horizon, model, rng);
    return s;
  }
  throw GenerationTimeout("no schedulable scenario found");
}

// ---- suites ----

namespace {

struct TrialOutcome {
  std::size_t checks = 0;
  bool switched = false;
  std::size_t violations = 0;
  std::string failure;

  void fail(std::string what) {
    if (violations++ == 0) failure = std::move(what);
  }
};

SuiteReport merge(std::string name, const std::vector<TrialOutcome>& outcomes) {
  SuiteReport r;
  r.name = std::move(name);
  r.trials = outcomes.size();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    r.checks += o.checks;
    r.switches += o.switched ? 1 : 0;
    r.violations += o.violations;
    if (o.violations > 0 && r.first_failure.empty()) r.first_failure = "trial " + std::to_string(i) + ": " + o.failure;
  }
  return r;
}

SimConfig meba_config(const Scenario& s, const Rational& horizon) {
  SimConfig cfg;
  cfg.policy = Policy::EdfUvdMeba;
  cfg.x = s.x;
  cfg.beta_star = s.beta_star;
  cfg.horizon = horizon;
  return cfg;
}

}  // namespace

SuiteReport run_lemma1_suite(const SuiteOptions& opt) {
  std::vector<TrialOutcome> out(opt.run.trials);
  for_each_trial(opt.run.trials, opt.run, [&](std::size_t t) {
    Rng rng = make_rng(opt.run.seed, {kLemma1Stream, t});
    const Scenario s = random_scenario(rng, t, opt.horizon);
    const ScheduleTrace tr = simulate(s.ts, meba_config(s, opt.horizon), s.jobs);
    const Rational limit = s.beta_star * utilizations(s.ts).hc;
    TrialOutcome& o = out[t];
    std::size_t sw = 0;
    for (const auto& ev : tr.events) {
      ++o.checks;
      if (!ev.load) {
        o.fail("event without a recorded load");
        continue;
      }
      if (*ev.load > limit) o.fail("load " + to_string(*ev.load) + " above " + to_string(limit) + " at " + to_string(ev.time));
      if (ev.kind == EventKind::ModeSwitch) {
        o.switched = true;
        ++o.checks;
        if (*ev.load != limit) o.fail("load " + to_string(*ev.load) + " != " + to_string(limit) + " at switch " + to_string(ev.time));
        const ModeSwitch& ms = tr.switches.at(sw++);
        const JobRecord& rec = tr.jobs[static_cast<std::size_t>(ev.job)];
        if (!(rec.job.demand > ms.max_exec[ms.trigger])) o.fail("triggering job demand does not exceed its e_m");
      }
    }
  });
  return merge("lemma1", out);
}

SuiteReport run_lemma2_suite(const SuiteOptions& opt) {
  std::vector<TrialOutcome> out(opt.run.trials);
  for_each_trial(opt.run.trials, opt.run, [&](std::size_t t) {
    Rng rng = make_rng(opt.run.seed, {kLemma2Stream, t});
    const Scenario s = random_scenario(rng, t, opt.horizon);
    TrialOutcome& o = out[t];
    const Rational limit = s.beta_star * utilizations(s.ts).hc;
    const auto hc = s.ts.hc_indices();

    SimConfig cfg = meba_config(s, opt.horizon);
    cfg.stop_at_first_switch = true;
    cfg.record_load = false;
    const ScheduleTrace meba = simulate(s.ts, cfg, s.jobs);
    const auto t_meba = mode_switch_instant(meba);
    o.switched = t_meba.has_value();

    std::vector<std::map<TaskId, Rational>> vectors;
    vectors.emplace_back();  // all zero
    for (std::size_t i : hc) vectors.back()[s.ts[i].id] = 0;
    std::optional<std::size_t> snapshot_index;
    if (t_meba) {
      std::map<TaskId, Rational> snap;
      for (std::size_t i : hc) snap[s.ts[i].id] = meba.switches.front().max_exec[i];
      snapshot_index = vectors.size();
      vectors.push_back(std::move(snap));
    }
    while (vectors.size() < opt.vectors) {
      std::vector<std::int64_t> weight;
      std::int64_t total = 0;
      for (std::size_t k = 0; k < hc.size(); ++k) {
        weight.push_back(uniform_int(rng, 0, 1000));
        total += weight.back();
      }
      const Rational share = Rational(uniform_int(rng, 1, 1000), 1000) * limit;
      std::map<TaskId, Rational> vec;
      for (std::size_t k = 0; k < hc.size(); ++k) {
        const McTask& task = s.ts[hc[k]];
        Rational b = 0;
        if (total > 0) b = floor_to_multiple(share * Rational(weight[k], total) * task.period, Rational(1, 1000));
        vec[task.id] = min_of(b, task.wcet);
      }
      vectors.push_back(std::move(vec));
    }

    const Lemma2Report rep = check_lemma2_optimality(s.ts, s.beta_star, s.x, opt.horizon, s.jobs, vectors);
    o.checks += vectors.size();
    if (rep.meba_switch != t_meba) o.fail("MEBA switch instant differs between runs");
    for (std::size_t v = 0; v < vectors.size(); ++v) {
      const auto& tf = rep.fixed_switch[v];
      if (t_meba && (!tf || *tf > *t_meba))
        o.fail("vector " + std::to_string(v) + " switches after MEBA (" + (tf ? to_string(*tf) : "never") + " > " +
               to_string(*t_meba) + ")");
    }
    if (snapshot_index) {
      // MEBA forgets earlier busy intervals, fixed budgets do not: replay only
      // the busy interval holding the switch.
      Rational start = 0;
      for (const auto& ev : meba.events)
        if (ev.kind == EventKind::Idle) start = ev.time;
      JobSequence tail;
      for (const auto& j : s.jobs)
        if (j.release >= start) tail.push_back(j);
      SimConfig fixed = cfg;
      fixed.policy = Policy::FixedBudget;
      fixed.fixed_budgets = vectors[*snapshot_index];
      ++o.checks;
      if (mode_switch_instant(simulate(s.ts, fixed, tail)) != t_meba)
        o.fail("snapshot budgets do not reproduce the MEBA switch instant");
    }
  });
  return merge("lemma2", out);
}

SuiteReport run_mapping_suite(const SuiteOptions& opt) {
  std::vector<TrialOutcome> out(opt.run.trials);
  for_each_trial(opt.run.trials, opt.run, [&](std::size_t t) {
    Rng rng = make_rng(opt.run.seed, {kMappingStream, t});
    TrialOutcome& o = out[t];
    for (int attempt = 0; attempt < 200; ++attempt) {
      // Rotate through the heavier demand models so most attempts switch.
      const std::size_t variant = attempt % 2 == 0 ? 3 : static_cast<std::size_t>(attempt / 2) % 4;
      const Scenario s = random_scenario(rng, variant, opt.horizon);
      const MappingReport rep = check_mapping_equivalence(s.ts, s.alphas, s.beta_star, s.x, opt.horizon, s.jobs);
      if (!rep.switched) continue;
      o.switched = true;
      ++o.checks;
      if (!rep.equivalent) o.fail(rep.diff);
      return;
    }
    o.fail("no switch-inducing scenario found");
  });
  return merge("mapping", out);
}

SuiteReport run_e2e_suite(const SuiteOptions& opt) {
  std::vector<TrialOutcome> out(opt.run.trials);
  for_each_trial(opt.run.trials, opt.run, [&](std::size_t t) {
    Rng rng = make_rng(opt.run.seed, {kE2eStream, t});
    const Scenario s = random_scenario(rng, t, opt.horizon);
    SimConfig cfg = meba_config(s, opt.horizon);
    cfg.record_load = false;
    const ScheduleTrace tr = simulate(s.ts, cfg, s.jobs);
    const VerifyResult v = verify_mc_schedulable(tr);
    TrialOutcome& o = out[t];
    o.checks += v.checked_jobs;
    o.switched = !tr.switches.empty();
    for (const auto& viol : v.violations) {
      const auto& rec = tr.jobs[viol.job];
      o.fail(viol.reason + ": task " + std::to_string(rec.job.task) + " job " + std::to_string(rec.job.seq) +
             " got " + to_string(viol.received) + " of " + to_string(viol.required) + " (" + s.demand + ")");
    }
  });
  return merge("e2e", out);
}

void write_suite_csv(std::ostream& out, const SuiteOptions& opt, const std::vector<SuiteReport>& reports) {
  write_csv_preamble(out, "property_suites", opt.run.seed,
                     "trials=" + std::to_string(opt.run.trials) + " horizon=" + to_string(opt.horizon));
  out << "suite,trials,checks,switches,violations,first_failure\n";
  for (const auto& r : reports) {
    std::string f = r.first_failure;
    std::replace(f.begin(), f.end(), ',', ';');
    out << r.name << ',' << r.trials << ',' << r.checks << ',' << r.switches << ',' << r.violations << ',' << f
        << '\n';
  }
}

}  // namespace mcs
