#pragma once

#include <cstddef>
#include <vector>

#include "mcs/taskmodel.hpp"

namespace mcs {

enum class Mode { LC, HC };

const char* to_string(Mode m);

/// Emitted when an HC job exhausts its runtime budget without completing.
struct ModeSwitch {
  Rational time;
  std::size_t trigger = 0;          // task index of the exhausting job
  std::vector<Rational> max_exec;   // e_m per task index at the switch; 0 for LC tasks
};

/// Maximum Execution-based Budget Allocation.
///
/// Keeps, for every HC task, the largest execution any of its jobs has reached
/// in the current busy interval, and derives the budget of a dispatched HC job
/// from whatever part of beta*U_H the other tasks have not claimed. Tasks are
/// addressed by their index in the TaskSet.
class MebaState {
 public:
  MebaState(const TaskSet& ts, const Rational& beta_star);

  Mode mode() const { return mode_; }
  const Rational& beta_budget() const { return beta_budget_; }

  /// b_i = T_i * (beta*U_H - sum_{j != i} e_m[j]/T_j), clamped at zero.
  /// Throws WrongMode in HC mode and InvalidTask for LC tasks.
  const Rational& on_dispatch(std::size_t task);

  /// Switches to HC mode. `consumed` is the incomplete job's execution so far;
  /// it is folded into e_m first, so the snapshot and observed_load() cover
  /// every execution that happened before the switch.
  ModeSwitch on_budget_exhausted(std::size_t task, const Rational& now, const Rational& consumed);

  /// e_m[i] = max(e_m[i], consumed). Throws BudgetOverrun if consumed exceeds
  /// the job's budget and WrongMode in HC mode.
  void on_preempt_or_complete(std::size_t task, const Rational& consumed);

  /// New busy interval: back to LC mode with all bookkeeping zeroed.
  void on_idle();

  /// sum_i e_m[i]/T_i over HC tasks.
  const Rational& observed_load() const { return load_; }

  const Rational& max_execution(std::size_t task) const { return max_exec_[task]; }
  const Rational& budget(std::size_t task) const { return budget_[task]; }
  const std::vector<Rational>& max_executions() const { return max_exec_; }

 private:
  void require_hc(std::size_t task) const;

  std::vector<Rational> periods_;
  std::vector<bool> hc_;
  std::vector<Rational> max_exec_;
  std::vector<Rational> budget_;
  Rational beta_budget_;
  Rational load_;
  Mode mode_ = Mode::LC;
};

}  // namespace mcs
