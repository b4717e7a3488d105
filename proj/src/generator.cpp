#include "mcs/generator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mcs/analysis.hpp"
#include "mcs/errors.hpp"

namespace mcs {

std::vector<Band> standard_bands() {
  std::vector<Band> out;
  for (int hi : {55, 60, 65, 70, 75}) out.push_back({Rational(hi - 1, 100), Rational(hi, 100)});
  return out;
}

void GenParams::validate() const {
  if (!(hc_probability >= 0.0 && hc_probability <= 1.0)) throw InvalidTask("PH must lie in [0,1]");
  if (lc_exec_min < 1 || lc_exec_max < lc_exec_min) throw InvalidTask("bad C^L range");
  if (ratio < 1) throw InvalidTask("RC must be at least 1");
  if (period_max < ratio * lc_exec_max) throw InvalidTask("period upper bound below the largest C");
  if (band.lo <= 0 || band.hi < band.lo) throw InvalidTask("bad U_A band");
}

McTask gen_task(const GenParams& p, Rng& rng, TaskId id) {
  McTask t;
  t.id = id;
  const bool hc = bernoulli(rng, p.hc_probability);
  const std::int64_t cl = uniform_int(rng, p.lc_exec_min, p.lc_exec_max);
  // The inflated draw is always taken so every task uses the same draws.
  const std::int64_t inflated = uniform_int(rng, cl, p.ratio * cl);
  const std::int64_t c = hc || p.inflate_lc ? inflated : cl;
  const std::int64_t period = uniform_int(rng, c, p.period_max);
  t.crit = hc ? Criticality::HC : Criticality::LC;
  t.wcet = c;
  t.period = period;
  if (hc) t.lc_estimate = Rational(cl);
  return t;
}

Rational average_utilization(const TaskSet& ts) {
  Rational sum = 0;
  for (const auto& t : ts.tasks()) {
    sum += t.utilization();
    if (t.is_hc()) sum += t.lc_estimate.value_or(t.wcet) / t.period;
  }
  return sum / 2;
}

TaskSet gen_taskset(const GenParams& p, Rng& rng) {
  p.validate();
  for (std::uint64_t restart = 0; restart <= p.max_restarts; ++restart) {
    std::vector<McTask> tasks;
    Rational twice_ua = 0;
    while (true) {
      McTask t = gen_task(p, rng, static_cast<TaskId>(tasks.size() + 1));
      twice_ua += t.utilization();
      if (t.is_hc()) twice_ua += *t.lc_estimate / t.period;
      tasks.push_back(std::move(t));
      if (twice_ua > 2 * p.band.hi) break;
      if (twice_ua >= 2 * p.band.lo) return TaskSet(std::move(tasks));
    }
  }
  throw GenerationTimeout("no task set landed in the U_A band after " + std::to_string(p.max_restarts) +
                          " restarts");
}

Rational max_service_level(const TaskSet& ts) {
  const Utilizations u = utilizations(ts);
  if (u.lc == 0 || u.hc == 0) return u.total() <= 1 ? Rational(1) : Rational(0);
  const Rational beta = beta_from_lc_estimates(ts);
  Rational alpha;
  try {
    alpha = max_alpha_given_beta(u, beta);
  } catch (const Infeasible&) {
    return Rational(0);  // beta* = 1 with M > 0: no alpha* works
  }
  return theorem1_test(u, alpha, beta).schedulable ? alpha : Rational(0);
}

DemandModel DemandModel::constant(double frac) {
  DemandModel m;
  m.kind = Kind::Constant;
  m.lo = m.hi = frac;
  return m;
}

DemandModel DemandModel::uniform(double lo, double hi) {
  DemandModel m;
  m.kind = Kind::Uniform;
  m.lo = lo;
  m.hi = hi;
  return m;
}

DemandModel DemandModel::fraction_grid(const ExecDistribution& dist) {
  DemandModel m;
  m.kind = Kind::FractionGrid;
  m.scales = dist.scales();
  m.pmf = dist.pmf();
  return m;
}

namespace {

Rational thousandths(double v) {
  const auto k = static_cast<std::int64_t>(std::llround(std::clamp(v, 0.001, 1.0) * 1000.0));
  return Rational(k, 1000);
}

}  // namespace

Rational DemandModel::draw_scale(Rng& rng) const {
  switch (kind) {
    case Kind::Constant: return thousandths(lo);
    case Kind::Uniform: {
      const auto a = static_cast<std::int64_t>(std::llround(std::clamp(lo, 0.001, 1.0) * 1000.0));
      const auto b = static_cast<std::int64_t>(std::llround(std::clamp(hi, 0.001, 1.0) * 1000.0));
      return Rational(uniform_int(rng, std::min(a, b), std::max(a, b)), 1000);
    }
    case Kind::FractionGrid: {
      if (scales.empty() || scales.size() != pmf.size()) throw InvalidFraction("fraction grid needs a pmf per scale");
      const double r = uniform_unit(rng);
      double acc = 0.0;
      for (std::size_t i = 0; i < scales.size(); ++i) {
        acc += pmf[i];
        if (r < acc) return scales[i];
      }
      return scales.back();
    }
  }
  return Rational(1);
}

JobSequence gen_job_sequence(const TaskSet& ts, const Rational& horizon, const DemandModel& model, Rng& rng) {
  JobSequence jobs;
  for (const auto& t : ts.tasks()) {
    Rational r = 0;
    while (r < horizon) {
      Rational demand = t.is_lc() && model.lc_full ? t.wcet : model.draw_scale(rng) * t.wcet;
      jobs.push_back({t.id, r, std::move(demand), 0});
      r += t.period;
      if (model.jitter > 0) r += Rational(uniform_int(rng, 0, 1000), 1000) * model.jitter * t.period;
    }
  }
  normalize(jobs);
  return jobs;
}

}  // namespace mcs
