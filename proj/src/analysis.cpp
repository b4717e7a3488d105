#include "mcs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mcs/errors.hpp"

namespace mcs {

std::optional<Rational> SchedVerdict::default_x() const {
  if (!schedulable) return std::nullopt;
  return x_lo > 0 ? x_lo : x_hi;
}

std::optional<Rational> threshold_m(const Utilizations& u) {
  const Rational denom = u.lc * u.hc;
  if (denom == 0) return std::nullopt;
  return (u.total() - 1) / denom;
}

SchedVerdict theorem1_test(const Utilizations& u, const Rational& alpha, const Rational& beta) {
  require_fraction(alpha, "alpha*");
  require_fraction(beta, "beta*");

  SchedVerdict v;
  v.m_exact = threshold_m(u);
  if (v.m_exact)
    v.m = to_double(*v.m_exact);
  else
    v.m = u.total() <= 1 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();

  // (1-a)(1-b) >= M, multiplied through by U_L*U_H so it stays defined at the edges.
  const bool eq4 = (1 - alpha) * (1 - beta) * u.lc * u.hc >= u.total() - 1;

  // LC mode: x * (1 - U_L(1-a)) >= b*U_H + a*U_L.
  const Rational lo_num = beta * u.hc + alpha * u.lc;
  const Rational lo_den = 1 - u.lc * (1 - alpha);
  bool lo_ok = true;
  if (lo_den > 0)
    v.x_lo = lo_num / lo_den;
  else
    lo_ok = lo_den == 0 && lo_num == 0;

  // HC mode: x * (1-a) * U_L <= 1 - U_H - a*U_L.
  const Rational hi_num = 1 - u.hc - alpha * u.lc;
  const Rational hi_den = (1 - alpha) * u.lc;
  bool hi_ok = true;
  v.x_hi = 1;
  if (hi_den > 0)
    v.x_hi = min_of(Rational(1), hi_num / hi_den);
  else
    hi_ok = hi_num >= 0;

  v.schedulable = eq4 && lo_ok && hi_ok && v.x_hi > 0 && v.x_lo <= v.x_hi;
  if (!v.schedulable) {
    v.x_lo = max_of(v.x_lo, Rational(0));
    v.x_hi = max_of(v.x_hi, Rational(0));
  }
  return v;
}

SchedVerdict theorem1_test(const TaskSet& ts, const Rational& alpha, const Rational& beta) {
  return theorem1_test(utilizations(ts), alpha, beta);
}

namespace {

Rational max_other_given(const Utilizations& u, const Rational& fixed, const char* name) {
  require_fraction(fixed, name);
  if (u.total() <= 1) return 1;
  const auto m = threshold_m(u);
  if (!m) throw Infeasible("total utilization exceeds 1 with only one criticality class present");
  if (fixed == 1) throw Infeasible(std::string(name) + " = 1 leaves no room when M > 0");
  Rational best = 1 - *m / (1 - fixed);
  return max_of(Rational(0), min_of(Rational(1), best));
}

double m_value(const Utilizations& u) {
  const auto m = threshold_m(u);
  if (!m) throw Infeasible("M is undefined: total utilization exceeds 1 with one criticality class");
  return to_double(*m);
}

void require_weight(double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw InvalidFraction("weight w = " + std::to_string(w) + " is outside [0,1]");
}

}  // namespace

Rational max_alpha_given_beta(const Utilizations& u, const Rational& beta) {
  return max_other_given(u, beta, "beta*");
}
Rational max_alpha_given_beta(const TaskSet& ts, const Rational& beta) {
  return max_alpha_given_beta(utilizations(ts), beta);
}
Rational max_beta_given_alpha(const Utilizations& u, const Rational& alpha) {
  return max_other_given(u, alpha, "alpha*");
}
Rational max_beta_given_alpha(const TaskSet& ts, const Rational& alpha) {
  return max_beta_given_alpha(utilizations(ts), alpha);
}

ServiceUtilization su_levels(const TaskSet& ts, const Rational& alpha, const Rational& beta) {
  require_fraction(alpha, "alpha*");
  require_fraction(beta, "beta*");
  const auto u = utilizations(ts);
  return {beta * u.hc + u.lc, alpha * u.lc + u.hc};
}

double total_system_utilization(const Utilizations& u, double w, double beta) {
  require_weight(w);
  const double ul = to_double(u.lc);
  const double uh = to_double(u.hc);
  if (beta < 0.0 || beta > 1.0) throw InvalidFraction("beta* outside [0,1]");
  if (u.total() <= 1) {
    // M <= 0: every alpha* is admissible, so the HC-mode term takes alpha* = 1.
    return w * (beta * uh + ul) + (1.0 - w) * (ul + uh);
  }
  const double m = m_value(u);
  if (beta > 1.0 - m + kSuSlack) throw Infeasible("beta* exceeds 1-M");
  return uh * (1.0 - w) + ul + uh * w * beta - ul * (1.0 - w) * m / (1.0 - beta);
}

double total_system_utilization(const TaskSet& ts, double w, double beta) {
  return total_system_utilization(utilizations(ts), w, beta);
}

double optimal_beta_for_su(const Utilizations& u, double w) {
  require_weight(w);
  if (u.total() <= 1) return 1.0;
  const double m = m_value(u);
  if (w == 0.0) return 0.0;
  const double ul = to_double(u.lc);
  const double uh = to_double(u.hc);
  const double inner = 1.0 - std::sqrt(m * (1.0 - w) * ul / (w * uh));
  return std::max(0.0, std::min(1.0 - m, inner));
}

double optimal_beta_for_su(const TaskSet& ts, double w) { return optimal_beta_for_su(utilizations(ts), w); }

double su_overlap_threshold(const Utilizations& u) {
  if (u.total() <= 1) return 0.0;
  const double m = m_value(u);
  const double ul = to_double(u.lc);
  const double uh = to_double(u.hc);
  return ul / (ul + m * uh);
}

double static_model_su(const Utilizations& u, double w) {
  require_weight(w);
  if (u.lc == 0) throw NoLcTasks("static SU(w) divides by U_L");
  const double ul = to_double(u.lc);
  const double uh = to_double(u.hc);
  return w * ul + w * (1.0 - ul) * (1.0 - uh) / ul + (1.0 - w) * uh;
}

double static_model_su(const TaskSet& ts, double w) { return static_model_su(utilizations(ts), w); }

Rational beta_from_lc_estimates(const TaskSet& ts) {
  Rational lo;
  Rational hi;
  for (const auto& t : ts.tasks()) {
    if (!t.is_hc()) continue;
    if (!t.lc_estimate) throw InvalidTask("HC task " + std::to_string(t.id) + " has no C^L");
    lo += *t.lc_estimate / t.period;
    hi += t.utilization();
  }
  if (hi == 0) return 0;
  return lo / hi;
}

std::vector<StaticMcTask> map_to_static(const TaskSet& ts, const AlphaAssignment& alphas,
                                        const std::map<TaskId, Rational>& max_exec, const Rational& x) {
  std::vector<StaticMcTask> out;
  TaskId next = 0;
  for (const auto& t : ts.tasks()) {
    if (t.is_lc()) {
      auto it = alphas.find(t.id);
      const Rational alpha = it != alphas.end() ? it->second : t.alpha;
      require_fraction(alpha, "alpha_i");
      const Rational guaranteed = alpha * t.wcet;
      const Rational optional = (1 - alpha) * t.wcet;
      if (guaranteed > 0)
        out.push_back({next++, t.id, StaticRole::LcGuaranteed, t.period, guaranteed, guaranteed, Criticality::HC, x});
      if (optional > 0)
        out.push_back({next++, t.id, StaticRole::LcOptional, t.period, optional, optional, Criticality::LC, x});
    } else {
      auto it = max_exec.find(t.id);
      const Rational e = it != max_exec.end() ? it->second : Rational(0);
      if (e < 0 || e > t.wcet)
        throw BudgetExceedsWcet("observed execution " + to_string(e) + " of task " + std::to_string(t.id) +
                                " exceeds its WCET");
      out.push_back({next++, t.id, StaticRole::Hc, t.period, e, t.wcet, Criticality::HC, x});
    }
  }
  return out;
}

}  // namespace mcs
