#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "mcs/analysis.hpp"
#include "mcs/job.hpp"
#include "mcs/meba.hpp"
#include "mcs/taskmodel.hpp"

namespace mcs {

enum class Policy {
  EdfUvdMeba,   // dynamic model: MEBA budgets, LC virtual deadlines
  EdfVdStatic,  // static model: per-task C^L budgets, LC jobs on real deadlines
  FixedBudget,  // EDF-UVD scheduling with a fixed LC budget per HC task
};

const char* to_string(Policy p);

enum class EventKind { Release, Dispatch, Preempt, Complete, DeadlineChange, ModeSwitch, Idle, Drop };

const char* to_string(EventKind k);

inline constexpr std::int64_t kNoJob = -1;

struct TraceEvent {
  Rational time;
  EventKind kind = EventKind::Idle;
  std::int64_t job = kNoJob;  // index into ScheduleTrace::jobs

  // Release: effective demand. Dispatch/DeadlineChange: effective deadline.
  // Preempt/Complete/Drop/ModeSwitch: execution received so far.
  Rational value;
  std::optional<Rational> budget;  // Dispatch of an HC job in LC mode
  std::optional<Rational> load;    // MEBA sum e_m/T after the event
};

struct JobRecord {
  Job job;
  std::size_t task_index = 0;
  TaskId order_id = 0;  // tie-break: (deadline, order_id, seq, sub)
  int sub = 0;
  Criticality crit = Criticality::LC;
  Rational wcet;
  Rational deadline;          // r + T
  Rational virtual_deadline;  // r + x*T
  Rational guaranteed;        // service owed once HC mode is involved: alpha*C (LC) or C (HC)
};

struct ScheduleTrace {
  std::vector<TraceEvent> events;
  std::vector<JobRecord> jobs;
  std::vector<ModeSwitch> switches;
  std::vector<TaskId> task_ids;  // task index -> id
  Rational horizon;
  Rational end_time;  // time at which simulation stopped
};

/// Snapshot handed to SimConfig::on_dispatch for trace-independent auditing.
struct DispatchAudit {
  Rational time;
  Mode mode = Mode::LC;
  std::size_t chosen = 0;  // job record index
  std::vector<std::pair<std::size_t, Rational>> ready;  // (job record, effective deadline)
};

struct SimConfig {
  Policy policy = Policy::EdfUvdMeba;
  Rational x{1};
  Rational horizon{0};
  Rational beta_star{0};                   // EdfUvdMeba
  std::map<TaskId, Rational> fixed_budgets;  // FixedBudget: B_i^L per HC task (missing = 0)
  bool stop_at_first_switch = false;
  bool record_load = true;
  std::function<void(const DispatchAudit&)> on_dispatch;
};

/// Runs the discrete-event schedule on one processor. Jobs released at or
/// after the horizon are ignored; the run stops once every event at the
/// horizon has been processed. Throws InvalidJobSequence for bad inputs.
///
/// EdfVdStatic reads C^L from McTask::lc_estimate (required for HC tasks) and
/// serves LC jobs after a switch up to alpha_i*C_i, so alpha_i = 0 gives the
/// classic drop-everything EDF-VD.
ScheduleTrace simulate(const TaskSet& ts, const SimConfig& cfg, const JobSequence& jobs);

/// EDF-VD over a mapped static set. Jobs refer to StaticMcTask::id.
ScheduleTrace simulate_static(const std::vector<StaticMcTask>& tasks, const Rational& x, const Rational& horizon,
                              const JobSequence& jobs, bool stop_at_first_switch = false);

/// time,event,task,job,detail
void write_trace_csv(std::ostream& out, const ScheduleTrace& trace);

/// One execution interval [start, end) of a job.
struct ExecSlice {
  std::size_t job = 0;
  Rational start;
  Rational end;
};

/// Execution intervals reconstructed from Dispatch / Preempt / Complete / Drop
/// events, in time order; a slice still open at the end is closed at end_time.
std::vector<ExecSlice> execution_slices(const ScheduleTrace& trace);

}  // namespace mcs
