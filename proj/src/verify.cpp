#include "mcs/verify.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "mcs/errors.hpp"

namespace mcs {

std::vector<std::pair<Rational, Rational>> hc_periods(const ScheduleTrace& trace) {
  std::vector<std::pair<Rational, Rational>> out;
  std::optional<Rational> open;
  for (const auto& ev : trace.events) {
    if (ev.kind == EventKind::ModeSwitch && !open) {
      open = ev.time;
    } else if (ev.kind == EventKind::Idle && open) {
      out.emplace_back(*open, ev.time);
      open.reset();
    }
  }
  if (open) out.emplace_back(*open, max_of(trace.end_time, trace.horizon));
  return out;
}

std::optional<Rational> mode_switch_instant(const ScheduleTrace& trace) {
  if (trace.switches.empty()) return std::nullopt;
  return trace.switches.front().time;
}

VerifyResult verify_mc_schedulable(const ScheduleTrace& trace) {
  VerifyResult res;
  const auto periods = hc_periods(trace);

  std::vector<Rational> service(trace.jobs.size());
  for (const auto& s : execution_slices(trace)) {
    const Rational& d = trace.jobs[s.job].deadline;
    if (s.start < d) service[s.job] += min_of(s.end, d) - s.start;
  }

  for (std::size_t j = 0; j < trace.jobs.size(); ++j) {
    const JobRecord& rec = trace.jobs[j];
    if (rec.deadline > trace.horizon) continue;
    ++res.checked_jobs;
    Rational required = rec.job.demand;
    const char* reason = "HC job short of its demand";
    if (rec.crit == Criticality::LC) {
      reason = "LC job short of its demand";
      for (const auto& [lo, hi] : periods) {
        if (rec.job.release < hi && lo < rec.deadline) {
          required = min_of(required, rec.guaranteed);
          reason = "LC job short of its guaranteed service";
          break;
        }
      }
    }
    if (service[j] < required) {
      res.schedulable = false;
      res.violations.push_back({j, required, service[j], reason});
    }
  }
  return res;
}

VerifyResult verify_mc_schedulable(const TaskSet& ts, const SimConfig& cfg, const ScheduleTrace& trace) {
  if (trace.task_ids.size() != ts.size()) throw InvalidTask("trace was produced for a different task set");
  (void)cfg;
  return verify_mc_schedulable(trace);
}

Lemma2Report check_lemma2_optimality(const TaskSet& ts, const Rational& beta_star, const Rational& x,
                                     const Rational& horizon, const JobSequence& jobs,
                                     const std::vector<std::map<TaskId, Rational>>& budget_vectors) {
  const Rational limit = beta_star * utilizations(ts).hc;
  for (const auto& vec : budget_vectors) {
    Rational load = 0;
    for (const auto& [id, b] : vec) {
      const McTask& t = ts.by_id(id);
      if (!t.is_hc()) throw InvalidTask("fixed budget given for LC task " + std::to_string(id));
      if (b < 0) throw BudgetSumViolation("negative fixed budget for task " + std::to_string(id));
      load += b / t.period;
    }
    if (load > limit) throw BudgetSumViolation("sum of B_i/T_i exceeds beta*U_H");
  }

  SimConfig cfg;
  cfg.x = x;
  cfg.horizon = horizon;
  cfg.beta_star = beta_star;
  cfg.stop_at_first_switch = true;
  cfg.record_load = false;

  Lemma2Report rep;
  rep.meba_switch = mode_switch_instant(simulate(ts, cfg, jobs));
  cfg.policy = Policy::FixedBudget;
  for (const auto& vec : budget_vectors) {
    cfg.fixed_budgets = vec;
    auto t = mode_switch_instant(simulate(ts, cfg, jobs));
    if (rep.meba_switch && (!t || *t > *rep.meba_switch)) rep.holds = false;
    rep.fixed_switch.push_back(std::move(t));
  }
  return rep;
}

namespace {

// Execution intervals keyed by (source task, job seq), adjacent pieces merged.
using SliceKey = std::tuple<TaskId, std::uint32_t, Rational, Rational>;

std::vector<SliceKey> merged_slices(const ScheduleTrace& trace, const std::vector<TaskId>& source_of,
                                    const Rational& lo, const Rational& hi) {
  std::vector<SliceKey> out;
  for (const auto& s : execution_slices(trace)) {
    Rational a = max_of(s.start, lo);
    Rational b = min_of(s.end, hi);
    if (!(a < b)) continue;
    const JobRecord& rec = trace.jobs[s.job];
    const TaskId src = source_of[rec.task_index];
    if (!out.empty()) {
      auto& [ps, pq, pa, pb] = out.back();
      if (ps == src && pq == rec.job.seq && pb == a) {
        pb = b;
        continue;
      }
    }
    out.emplace_back(src, rec.job.seq, std::move(a), std::move(b));
  }
  return out;
}

std::string describe(const SliceKey& k) {
  std::ostringstream o;
  o << "task " << std::get<0>(k) << " job " << std::get<1>(k) << " [" << to_string(std::get<2>(k)) << ", "
    << to_string(std::get<3>(k)) << ")";
  return o.str();
}

}  // namespace

MappingReport check_mapping_equivalence(const TaskSet& ts_in, const AlphaAssignment& alphas,
                                        const Rational& beta_star, const Rational& x, const Rational& horizon,
                                        const JobSequence& jobs) {
  const TaskSet ts = ts_in.with_alphas(alphas);
  SimConfig cfg;
  cfg.x = x;
  cfg.horizon = horizon;
  cfg.beta_star = beta_star;
  cfg.record_load = false;
  const ScheduleTrace dyn = simulate(ts, cfg, jobs);

  MappingReport rep;
  rep.dynamic_switch = mode_switch_instant(dyn);
  if (!rep.dynamic_switch) return rep;
  rep.switched = true;
  const Rational& t_star = *rep.dynamic_switch;

  // Busy interval [start, end) around the first switch.
  Rational start = 0;
  Rational end = horizon;
  for (const auto& ev : dyn.events) {
    if (ev.kind != EventKind::Idle) continue;
    if (ev.time <= t_star) {
      start = ev.time;
    } else {
      end = ev.time;
      break;
    }
  }

  std::map<TaskId, Rational> max_exec;
  const ModeSwitch& ms = dyn.switches.front();
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts[i].is_hc()) max_exec[ts[i].id] = ms.max_exec[i];
  const auto mapped = map_to_static(ts, alphas, max_exec, x);

  std::map<std::pair<TaskId, StaticRole>, TaskId> mapped_id;
  for (const auto& m : mapped) mapped_id[{m.source, m.role}] = m.id;

  JobSequence split;
  for (const auto& rec : dyn.jobs) {
    const Job& j = rec.job;
    if (j.release < start || j.release >= end) continue;
    const McTask& t = ts[rec.task_index];
    auto push = [&](StaticRole role, const Rational& demand) {
      if (demand <= 0) return;
      split.push_back({mapped_id.at({t.id, role}), j.release, demand, j.seq});
    };
    if (t.is_hc()) {
      push(StaticRole::Hc, j.demand);
      continue;
    }
    const Rational head = min_of(j.demand, t.alpha * t.wcet);
    push(StaticRole::LcGuaranteed, head);
    if (j.release < t_star) push(StaticRole::LcOptional, j.demand - head);
  }
  std::stable_sort(split.begin(), split.end(), [](const Job& a, const Job& b) { return a.release < b.release; });

  const ScheduleTrace st = simulate_static(mapped, x, end, split);
  rep.static_switch = mode_switch_instant(st);

  std::vector<TaskId> dyn_src(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) dyn_src[i] = ts[i].id;
  std::vector<TaskId> st_src(mapped.size());
  for (std::size_t i = 0; i < mapped.size(); ++i) st_src[i] = mapped[i].source;

  const auto a = merged_slices(dyn, dyn_src, start, end);
  const auto b = merged_slices(st, st_src, start, end);

  if (rep.static_switch != rep.dynamic_switch) {
    rep.equivalent = false;
    rep.diff = "switch instants differ: dynamic " + to_string(t_star) + ", static " +
               (rep.static_switch ? to_string(*rep.static_switch) : std::string("none"));
    return rep;
  }
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) {
      rep.equivalent = false;
      rep.diff = "dynamic " + describe(a[i]) + " vs static " + describe(b[i]);
      return rep;
    }
  }
  if (a.size() != b.size()) {
    rep.equivalent = false;
    rep.diff = "slice counts differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size());
  }
  return rep;
}

}  // namespace mcs
