#include "mcs/taskmodel.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "mcs/errors.hpp"

namespace mcs {

const char* to_string(Criticality c) { return c == Criticality::HC ? "HC" : "LC"; }

void require_fraction(const Rational& value, const char* name) {
  if (value < 0 || value > 1)
    throw InvalidFraction(std::string(name) + " = " + to_string(value) + " is outside [0,1]");
}

void McTask::validate() const {
  const std::string who = "task " + std::to_string(id);
  if (period <= 0) throw InvalidTask(who + ": period must be positive");
  if (wcet <= 0) throw InvalidTask(who + ": wcet must be positive");
  if (wcet > period) throw InvalidTask(who + ": wcet exceeds period (implicit deadline)");
  if (is_lc() && (alpha < 0 || alpha > 1)) throw InvalidTask(who + ": alpha outside [0,1]");
  if (lc_estimate && (*lc_estimate <= 0 || *lc_estimate > wcet))
    throw InvalidTask(who + ": C^L must satisfy 0 < C^L <= C");
}

TaskSet::TaskSet(std::vector<McTask> tasks) : tasks_(std::move(tasks)) {
  std::set<TaskId> seen;
  for (auto& t : tasks_) {
    t.validate();
    if (t.is_hc()) t.alpha = 0;
    if (!seen.insert(t.id).second) throw InvalidTask("duplicate task id " + std::to_string(t.id));
  }
}

std::size_t TaskSet::index_of(TaskId id) const {
  for (std::size_t i = 0; i < tasks_.size(); ++i)
    if (tasks_[i].id == id) return i;
  throw std::out_of_range("no task with id " + std::to_string(id));
}

std::vector<std::size_t> TaskSet::lc_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tasks_.size(); ++i)
    if (tasks_[i].is_lc()) out.push_back(i);
  return out;
}

std::vector<std::size_t> TaskSet::hc_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tasks_.size(); ++i)
    if (tasks_[i].is_hc()) out.push_back(i);
  return out;
}

TaskSet TaskSet::with_alphas(const AlphaAssignment& alphas) const {
  std::vector<McTask> copy = tasks_;
  for (auto& t : copy) {
    if (auto it = alphas.find(t.id); it != alphas.end() && t.is_lc()) t.alpha = it->second;
  }
  return TaskSet(std::move(copy));
}

AlphaAssignment TaskSet::alphas() const {
  AlphaAssignment out;
  for (const auto& t : tasks_)
    if (t.is_lc()) out.emplace(t.id, t.alpha);
  return out;
}

void ServiceConfig::validate() const {
  require_fraction(alpha_star, "alpha*");
  require_fraction(beta_star, "beta*");
  if (x <= 0 || x > 1) throw InvalidFraction("x = " + to_string(x) + " is outside (0,1]");
}

bool ServiceConfig::consistent_with(const TaskSet& ts) const {
  if (utilizations(ts).lc == 0) return true;
  return alpha_star_from_per_task(ts) == alpha_star;
}

Utilizations utilizations(const TaskSet& ts) {
  Utilizations u;
  for (const auto& t : ts.tasks()) {
    if (t.is_hc())
      u.hc += t.utilization();
    else
      u.lc += t.utilization();
  }
  return u;
}

Rational alpha_star_from_per_task(const TaskSet& ts) {
  Rational weighted;
  Rational total;
  for (const auto& t : ts.tasks()) {
    if (!t.is_lc()) continue;
    weighted += t.alpha * t.utilization();
    total += t.utilization();
  }
  if (total == 0) throw NoLcTasks("alpha* is undefined without LC utilization");
  return weighted / total;
}

AlphaAssignment distribute_hc_budget_equal(const TaskSet& ts, const Rational& alpha_star) {
  require_fraction(alpha_star, "alpha*");
  const auto lc = ts.lc_indices();
  const Utilizations u = utilizations(ts);
  if (lc.empty() || u.lc == 0) throw NoLcTasks("no LC tasks to distribute the HC budget over");

  // Work in B^H/T units: task i can absorb at most u_i (alpha_i = 1).
  Rational remaining = alpha_star * u.lc;
  std::vector<std::size_t> open(lc.begin(), lc.end());
  AlphaAssignment out;

  while (!open.empty()) {
    const Rational share = remaining / static_cast<long>(open.size());
    std::vector<std::size_t> still_open;
    bool clamped = false;
    for (std::size_t i : open) {
      if (ts[i].utilization() <= share) {
        out[ts[i].id] = 1;
        remaining -= ts[i].utilization();
        clamped = true;
      } else {
        still_open.push_back(i);
      }
    }
    if (!clamped) {
      for (std::size_t i : open) out[ts[i].id] = share / ts[i].utilization();
      break;
    }
    open = std::move(still_open);
  }
  return out;
}

}  // namespace mcs
