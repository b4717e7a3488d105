#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "mcs/rational.hpp"

namespace mcs {

enum class Criticality { LC, HC };

const char* to_string(Criticality c);

using TaskId = int;

/// One implicit-deadline sporadic task of the dynamic mixed-criticality model.
///
/// HC tasks carry only their WCET; their LC-mode budget is assigned at runtime.
/// LC tasks additionally carry alpha, the fraction of C guaranteed after a mode
/// switch. `lc_estimate` is optional static-model metadata (C^L) used by the
/// task-set generator and by the static EDF-VD baseline.
struct McTask {
  TaskId id = 0;
  Rational period;
  Rational wcet;
  Criticality crit = Criticality::LC;
  Rational alpha{0};
  std::optional<Rational> lc_estimate;

  bool is_hc() const { return crit == Criticality::HC; }
  bool is_lc() const { return crit == Criticality::LC; }

  Rational utilization() const { return wcet / period; }

  /// Budget reserved in HC mode: C for HC tasks, alpha*C for LC tasks.
  Rational hc_budget() const { return is_hc() ? wcet : alpha * wcet; }

  /// Budget reserved in LC mode. HC tasks have none; theirs is decided at runtime.
  std::optional<Rational> lc_budget() const {
    if (is_lc()) return wcet;
    return std::nullopt;
  }

  /// Throws InvalidTask when 0 < C <= T, alpha in [0,1] or 0 < C^L <= C is violated.
  void validate() const;
};

struct Utilizations {
  Rational lc;  // U_L
  Rational hc;  // U_H

  Rational total() const { return lc + hc; }
};

/// Per-LC-task alpha values keyed by task id.
using AlphaAssignment = std::map<TaskId, Rational>;

class TaskSet {
 public:
  TaskSet() = default;
  explicit TaskSet(std::vector<McTask> tasks);

  const std::vector<McTask>& tasks() const { return tasks_; }
  std::size_t size() const { return tasks_.size(); }
  bool empty() const { return tasks_.empty(); }
  const McTask& operator[](std::size_t i) const { return tasks_[i]; }

  /// Position of the task with this id; throws std::out_of_range if unknown.
  std::size_t index_of(TaskId id) const;
  const McTask& by_id(TaskId id) const { return tasks_[index_of(id)]; }

  std::vector<std::size_t> lc_indices() const;
  std::vector<std::size_t> hc_indices() const;

  /// Copy with the given alpha values written into the matching LC tasks.
  TaskSet with_alphas(const AlphaAssignment& alphas) const;

  AlphaAssignment alphas() const;

 private:
  std::vector<McTask> tasks_;
};

struct ServiceConfig {
  Rational alpha_star{0};
  Rational beta_star{0};
  Rational x{1};

  /// Throws InvalidFraction unless alpha*, beta* lie in [0,1] and x in (0,1].
  void validate() const;

  /// True when alpha_star equals the utilization-weighted mean of the per-task
  /// alphas in `ts` (vacuously true without LC tasks).
  bool consistent_with(const TaskSet& ts) const;
};

Utilizations utilizations(const TaskSet& ts);

/// Utilization-weighted mean of the LC tasks' alpha values. Throws NoLcTasks
/// when U_L = 0.
Rational alpha_star_from_per_task(const TaskSet& ts);

/// Splits alpha_star*U_L equally in HC-budget-per-period terms across the LC
/// tasks, clamping tasks whose share exceeds their own utilization at alpha=1
/// and handing the excess to the rest until nothing changes.
AlphaAssignment distribute_hc_budget_equal(const TaskSet& ts, const Rational& alpha_star);

void require_fraction(const Rational& value, const char* name);

}  // namespace mcs
