#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcs/simulator.hpp"

namespace mcs {

struct Violation {
  std::size_t job = 0;  // index into ScheduleTrace::jobs
  Rational required;
  Rational received;
  std::string reason;
};

struct VerifyResult {
  bool schedulable = true;
  std::size_t checked_jobs = 0;
  std::vector<Violation> violations;
};

/// Checks every job whose deadline is within the horizon: HC jobs need their
/// full demand by the deadline; LC jobs need their full demand unless an HC
/// mode period overlaps [release, deadline), in which case min(demand, alpha*C)
/// is enough.
VerifyResult verify_mc_schedulable(const ScheduleTrace& trace);
VerifyResult verify_mc_schedulable(const TaskSet& ts, const SimConfig& cfg, const ScheduleTrace& trace);

std::optional<Rational> mode_switch_instant(const ScheduleTrace& trace);

/// HC-mode periods [t*, end) of the trace; `end` is the closing idle instant or
/// the end of the run.
std::vector<std::pair<Rational, Rational>> hc_periods(const ScheduleTrace& trace);

/// First mode-switch instant under MEBA and under each fixed LC budget vector
/// (keyed by HC task id). Throws BudgetSumViolation if some vector exceeds
/// beta*U_H in sum B/T.
struct Lemma2Report {
  bool holds = true;
  std::optional<Rational> meba_switch;
  std::vector<std::optional<Rational>> fixed_switch;
};

Lemma2Report check_lemma2_optimality(const TaskSet& ts, const Rational& beta_star, const Rational& x,
                                     const Rational& horizon, const JobSequence& jobs,
                                     const std::vector<std::map<TaskId, Rational>>& budget_vectors);

struct MappingReport {
  bool equivalent = true;
  bool switched = false;
  std::optional<Rational> dynamic_switch;
  std::optional<Rational> static_switch;
  std::string diff;  // first mismatch, empty when equivalent
};

/// Simulates the busy interval holding the first MEBA mode switch twice: under
/// EDF-UVD on `ts` and under EDF-VD on the mapped static set, with every LC job
/// split into its guaranteed part and its remainder. Compares the per-job
/// execution intervals and the switch instants. Without a switch the result
/// is trivially equivalent.
MappingReport check_mapping_equivalence(const TaskSet& ts, const AlphaAssignment& alphas, const Rational& beta_star,
                                        const Rational& x, const Rational& horizon, const JobSequence& jobs);

}  // namespace mcs
