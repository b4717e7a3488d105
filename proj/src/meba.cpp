#include "mcs/meba.hpp"

#include <string>

#include "mcs/errors.hpp"

namespace mcs {

const char* to_string(Mode m) { return m == Mode::HC ? "HC" : "LC"; }

MebaState::MebaState(const TaskSet& ts, const Rational& beta_star)
    : max_exec_(ts.size()), budget_(ts.size()) {
  require_fraction(beta_star, "beta*");
  periods_.reserve(ts.size());
  hc_.reserve(ts.size());
  for (const auto& t : ts.tasks()) {
    periods_.push_back(t.period);
    hc_.push_back(t.is_hc());
  }
  beta_budget_ = beta_star * utilizations(ts).hc;
}

void MebaState::require_hc(std::size_t task) const {
  if (task >= hc_.size() || !hc_[task])
    throw InvalidTask("MEBA bookkeeping only applies to HC tasks (index " + std::to_string(task) + ")");
}

const Rational& MebaState::on_dispatch(std::size_t task) {
  require_hc(task);
  if (mode_ != Mode::LC) throw WrongMode("budgets are only allocated in LC mode");
  const Rational others = load_ - max_exec_[task] / periods_[task];
  Rational b = periods_[task] * (beta_budget_ - others);
  budget_[task] = b < 0 ? Rational(0) : std::move(b);
  return budget_[task];
}

ModeSwitch MebaState::on_budget_exhausted(std::size_t task, const Rational& now, const Rational& consumed) {
  require_hc(task);
  if (mode_ != Mode::LC) throw WrongMode("already in HC mode");
  ModeSwitch ev;
  ev.time = now;
  ev.trigger = task;
  if (consumed > max_exec_[task]) {
    load_ += (consumed - max_exec_[task]) / periods_[task];
    max_exec_[task] = consumed;
  }
  ev.max_exec = max_exec_;
  mode_ = Mode::HC;
  return ev;
}

void MebaState::on_preempt_or_complete(std::size_t task, const Rational& consumed) {
  require_hc(task);
  if (mode_ != Mode::LC) throw WrongMode("e_m is only tracked in LC mode");
  if (consumed > budget_[task])
    throw BudgetOverrun("task " + std::to_string(task) + " consumed " + to_string(consumed) +
                        " beyond its budget " + to_string(budget_[task]));
  if (consumed > max_exec_[task]) {
    load_ += (consumed - max_exec_[task]) / periods_[task];
    max_exec_[task] = consumed;
  }
}

void MebaState::on_idle() {
  mode_ = Mode::LC;
  for (auto& e : max_exec_) e = 0;
  for (auto& b : budget_) b = 0;
  load_ = 0;
}

}  // namespace mcs
