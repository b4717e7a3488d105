#include "mcs/simulator.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "mcs/errors.hpp"

namespace mcs {

const char* to_string(Policy p) {
  switch (p) {
    case Policy::EdfUvdMeba: return "uvd";
    case Policy::EdfVdStatic: return "vd";
    case Policy::FixedBudget: return "fixed";
  }
  return "?";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Release: return "release";
    case EventKind::Dispatch: return "dispatch";
    case EventKind::Preempt: return "preempt";
    case EventKind::Complete: return "complete";
    case EventKind::DeadlineChange: return "deadline_change";
    case EventKind::ModeSwitch: return "mode_switch";
    case EventKind::Idle: return "idle";
    case EventKind::Drop: return "drop";
  }
  return "?";
}

namespace {

struct EngineTask {
  TaskId id = 0;
  TaskId order_id = 0;
  int sub = 0;
  Rational period;
  Rational wcet;
  Criticality crit = Criticality::LC;
  Rational guaranteed;  // LC: service kept after a switch
  bool lc_virtual = false;
  std::optional<Rational> fixed_budget;  // HC tasks without MEBA
};

struct Active {
  std::size_t rec = 0;
  std::size_t task = 0;
  Rational demand;  // effective, possibly capped in HC mode
  Rational consumed;
  Rational key;
  bool virtual_phase = false;  // LC job still ordered by its virtual deadline
};

class Engine {
 public:
  Engine(std::vector<EngineTask> tasks, const Rational& x, const Rational& horizon, bool stop_first,
         MebaState* meba, bool record_load, const std::function<void(const DispatchAudit&)>* observer)
      : tasks_(std::move(tasks)),
        x_(x),
        meba_(meba),
        stop_first_(stop_first),
        record_load_(record_load && meba != nullptr),
        observer_(observer && *observer ? observer : nullptr) {
    trace_.horizon = horizon;
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
      index_.emplace(tasks_[i].id, i);
      trace_.task_ids.push_back(tasks_[i].id);
    }
  }

  ScheduleTrace run(const JobSequence& input) {
    JobSequence jobs;
    jobs.reserve(input.size());
    for (const auto& j : input)
      if (j.release < trace_.horizon) jobs.push_back(j);
    check_jobs(jobs);

    std::size_t next = 0;
    Rational now = 0;
    while (true) {
      settle_running(now);
      if (ready_.empty() && busy_) {
        busy_ = false;
        mode_ = Mode::LC;
        if (meba_) meba_->on_idle();
        emit(now, EventKind::Idle, kNoJob, Rational(0));
      }
      while (next < jobs.size() && jobs[next].release == now) release(jobs[next++], now);
      schedule(now);
      if (stopped_ || now >= trace_.horizon) break;

      Rational t_next = trace_.horizon;
      if (next < jobs.size()) t_next = min_of(t_next, jobs[next].release);
      if (running_) {
        const Active& a = ready_[*running_];
        t_next = min_of(t_next, now + (a.demand - a.consumed));
        if (mode_ == Mode::LC && a.virtual_phase) t_next = min_of(t_next, now + (guaranteed(a) - a.consumed));
        if (running_budget_ && *running_budget_ > a.consumed)
          t_next = min_of(t_next, now + (*running_budget_ - a.consumed));
      } else if (next >= jobs.size()) {
        break;
      }
      if (running_) ready_[*running_].consumed += t_next - now;
      now = t_next;
    }
    trace_.end_time = now;
    return std::move(trace_);
  }

 private:
  const Rational& guaranteed(const Active& a) const { return tasks_[a.task].guaranteed; }
  bool is_hc(const Active& a) const { return tasks_[a.task].crit == Criticality::HC; }

  void check_jobs(const JobSequence& jobs) {
    std::vector<std::optional<Rational>> last(tasks_.size());
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      const Job& j = jobs[k];
      auto it = index_.find(j.task);
      if (it == index_.end()) throw InvalidJobSequence("job of unknown task " + std::to_string(j.task));
      const EngineTask& t = tasks_[it->second];
      const std::string who = "job " + std::to_string(j.seq) + " of task " + std::to_string(j.task);
      if (j.release < 0) throw InvalidJobSequence(who + " has a negative release time");
      if (j.demand <= 0) throw InvalidJobSequence(who + " has non-positive demand");
      if (j.demand > t.wcet) throw InvalidJobSequence(who + " demands more than C_i");
      if (k > 0 && j.release < jobs[k - 1].release) throw InvalidJobSequence("jobs are not sorted by release time");
      auto& prev = last[it->second];
      if (prev && j.release < *prev + t.period)
        throw InvalidJobSequence(who + " is released less than one period after its predecessor");
      prev = j.release;
    }
  }

  void emit(const Rational& now, EventKind kind, std::int64_t job, Rational value,
            std::optional<Rational> budget = std::nullopt) {
    TraceEvent ev;
    ev.time = now;
    ev.kind = kind;
    ev.job = job;
    ev.value = std::move(value);
    ev.budget = std::move(budget);
    if (record_load_) ev.load = meba_->observed_load();
    trace_.events.push_back(std::move(ev));
  }

  void remove(std::size_t pos) {
    ready_.erase(ready_.begin() + static_cast<std::ptrdiff_t>(pos));
    if (running_) {
      if (*running_ == pos) {
        running_.reset();
        running_budget_.reset();
      } else if (*running_ > pos) {
        --*running_;
      }
    }
  }

  void sync_meba(const Active& a) {
    if (meba_ && mode_ == Mode::LC && is_hc(a)) meba_->on_preempt_or_complete(a.task, a.consumed);
  }

  // Completions and virtual-phase exits of the running job at `now`.
  void settle_running(const Rational& now) {
    if (!running_) return;
    Active& a = ready_[*running_];
    if (a.consumed >= a.demand) {
      sync_meba(a);
      const bool capped = a.demand < trace_.jobs[a.rec].job.demand;
      emit(now, capped ? EventKind::Drop : EventKind::Complete, static_cast<std::int64_t>(a.rec), a.consumed);
      remove(*running_);
      return;
    }
    if (mode_ == Mode::LC && a.virtual_phase && a.consumed >= guaranteed(a)) {
      a.virtual_phase = false;
      a.key = trace_.jobs[a.rec].deadline;
      emit(now, EventKind::DeadlineChange, static_cast<std::int64_t>(a.rec), a.key);
    }
  }

  void release(const Job& j, const Rational& now) {
    const std::size_t ti = index_.at(j.task);
    const EngineTask& t = tasks_[ti];
    JobRecord rec;
    rec.job = j;
    rec.task_index = ti;
    rec.order_id = t.order_id;
    rec.sub = t.sub;
    rec.crit = t.crit;
    rec.wcet = t.wcet;
    rec.deadline = j.release + t.period;
    rec.virtual_deadline = j.release + x_ * t.period;
    rec.guaranteed = t.crit == Criticality::HC ? t.wcet : t.guaranteed;
    const std::size_t idx = trace_.jobs.size();
    trace_.jobs.push_back(rec);

    Active a;
    a.rec = idx;
    a.task = ti;
    a.demand = j.demand;
    a.consumed = 0;
    if (t.crit == Criticality::HC) {
      a.key = mode_ == Mode::LC ? rec.virtual_deadline : rec.deadline;
    } else if (mode_ == Mode::HC) {
      a.demand = min_of(j.demand, t.guaranteed);
      a.key = rec.deadline;
    } else {
      a.virtual_phase = t.lc_virtual && t.guaranteed > 0;
      a.key = a.virtual_phase ? rec.virtual_deadline : rec.deadline;
    }
    emit(now, EventKind::Release, static_cast<std::int64_t>(idx), a.demand);
    if (a.demand <= 0) {
      emit(now, EventKind::Drop, static_cast<std::int64_t>(idx), Rational(0));
      return;
    }
    ready_.push_back(std::move(a));
  }

  auto order_key(const Active& a) const {
    const JobRecord& r = trace_.jobs[a.rec];
    return std::tie(a.key, r.order_id, r.job.seq, r.sub);
  }

  std::size_t best() const {
    std::size_t b = 0;
    for (std::size_t i = 1; i < ready_.size(); ++i)
      if (order_key(ready_[i]) < order_key(ready_[b])) b = i;
    return b;
  }

  void switch_mode(const Rational& now, std::size_t pos) {
    const Active& trig = ready_[pos];
    ModeSwitch ms;
    if (meba_) {
      ms = meba_->on_budget_exhausted(trig.task, now, trig.consumed);
    } else {
      ms.time = now;
      ms.trigger = trig.task;
      ms.max_exec.assign(tasks_.size(), Rational(0));
    }
    mode_ = Mode::HC;
    emit(now, EventKind::ModeSwitch, static_cast<std::int64_t>(trig.rec), trig.consumed);
    trace_.switches.push_back(std::move(ms));
    running_budget_.reset();

    for (std::size_t i = 0; i < ready_.size();) {
      Active& a = ready_[i];
      a.key = trace_.jobs[a.rec].deadline;
      a.virtual_phase = false;
      if (!is_hc(a)) {
        if (a.consumed >= guaranteed(a)) {
          emit(now, EventKind::Drop, static_cast<std::int64_t>(a.rec), a.consumed);
          remove(i);
          continue;
        }
        a.demand = min_of(a.demand, guaranteed(a));
      }
      ++i;
    }
    if (stop_first_) stopped_ = true;
  }

  void schedule(const Rational& now) {
    while (!ready_.empty()) {
      const std::size_t b = best();
      Active& cand = ready_[b];
      std::optional<Rational> budget;
      if (mode_ == Mode::LC && is_hc(cand)) {
        if (running_ && *running_ != b) sync_meba(ready_[*running_]);
        if (meba_) {
          budget = meba_->on_dispatch(cand.task);
        } else {
          budget = tasks_[cand.task].fixed_budget.value_or(Rational(0));
        }
        if (cand.consumed >= *budget) {
          // Preempted-at-budget jobs resurface here and trigger the switch too.
          switch_mode(now, b);
          if (stopped_) {
            running_.reset();
            return;
          }
          continue;
        }
      }
      if (!running_ || *running_ != b) {
        if (running_) {
          Active& prev = ready_[*running_];
          sync_meba(prev);
          emit(now, EventKind::Preempt, static_cast<std::int64_t>(prev.rec), prev.consumed);
        }
        running_ = b;
        busy_ = true;
        if (observer_) audit(now, b);
        emit(now, EventKind::Dispatch, static_cast<std::int64_t>(cand.rec), cand.key, budget);
      }
      running_budget_ = budget;
      return;
    }
    running_.reset();
    running_budget_.reset();
  }

  void audit(const Rational& now, std::size_t chosen) {
    DispatchAudit a;
    a.time = now;
    a.mode = mode_;
    a.chosen = ready_[chosen].rec;
    for (const auto& r : ready_) a.ready.emplace_back(r.rec, r.key);
    (*observer_)(a);
  }

  std::vector<EngineTask> tasks_;
  std::unordered_map<TaskId, std::size_t> index_;
  Rational x_;
  MebaState* meba_;
  bool stop_first_;
  bool record_load_;
  const std::function<void(const DispatchAudit&)>* observer_;

  ScheduleTrace trace_;
  std::vector<Active> ready_;
  std::optional<std::size_t> running_;
  std::optional<Rational> running_budget_;
  Mode mode_ = Mode::LC;
  bool busy_ = false;
  bool stopped_ = false;
};

}  // namespace

ScheduleTrace simulate(const TaskSet& ts, const SimConfig& cfg, const JobSequence& jobs) {
  if (cfg.x <= 0 || cfg.x > 1) throw InvalidFraction("x must lie in (0,1]");
  std::vector<EngineTask> tasks;
  tasks.reserve(ts.size());
  for (const auto& t : ts.tasks()) {
    EngineTask e;
    e.id = t.id;
    e.order_id = t.id;
    e.period = t.period;
    e.wcet = t.wcet;
    e.crit = t.crit;
    e.guaranteed = t.is_hc() ? t.wcet : t.alpha * t.wcet;
    e.lc_virtual = t.is_lc() && cfg.policy != Policy::EdfVdStatic;
    if (t.is_hc()) {
      if (cfg.policy == Policy::FixedBudget) {
        auto it = cfg.fixed_budgets.find(t.id);
        e.fixed_budget = it == cfg.fixed_budgets.end() ? Rational(0) : it->second;
      } else if (cfg.policy == Policy::EdfVdStatic) {
        if (!t.lc_estimate) throw InvalidTask("static EDF-VD needs C^L for HC task " + std::to_string(t.id));
        e.fixed_budget = *t.lc_estimate;
      }
    }
    tasks.push_back(std::move(e));
  }
  std::optional<MebaState> meba;
  if (cfg.policy == Policy::EdfUvdMeba) meba.emplace(ts, cfg.beta_star);
  Engine engine(std::move(tasks), cfg.x, cfg.horizon, cfg.stop_at_first_switch, meba ? &*meba : nullptr,
                cfg.record_load, &cfg.on_dispatch);
  return engine.run(jobs);
}

ScheduleTrace simulate_static(const std::vector<StaticMcTask>& tasks, const Rational& x, const Rational& horizon,
                              const JobSequence& jobs, bool stop_at_first_switch) {
  std::vector<EngineTask> et;
  et.reserve(tasks.size());
  for (const auto& t : tasks) {
    EngineTask e;
    e.id = t.id;
    e.order_id = t.source;
    e.sub = t.sub();
    e.period = t.period;
    e.wcet = t.c_hi;
    e.crit = t.crit;
    e.guaranteed = t.crit == Criticality::HC ? t.c_hi : Rational(0);
    if (t.crit == Criticality::HC) e.fixed_budget = t.c_lo;
    et.push_back(std::move(e));
  }
  Engine engine(std::move(et), x, horizon, stop_at_first_switch, nullptr, false, nullptr);
  return engine.run(jobs);
}

void write_trace_csv(std::ostream& out, const ScheduleTrace& trace) {
  out << "time,event,task,job,detail\n";
  std::size_t sw = 0;
  for (const auto& ev : trace.events) {
    out << to_string(ev.time) << ',' << to_string(ev.kind) << ',';
    if (ev.job != kNoJob) {
      const auto& rec = trace.jobs[static_cast<std::size_t>(ev.job)];
      out << rec.job.task << ',' << rec.job.seq;
    } else {
      out << ',';
    }
    out << ',';
    std::ostringstream d;
    switch (ev.kind) {
      case EventKind::Release: d << "demand=" << to_string(ev.value); break;
      case EventKind::Dispatch:
        d << "deadline=" << to_string(ev.value);
        if (ev.budget) d << " budget=" << to_string(*ev.budget);
        break;
      case EventKind::DeadlineChange: d << "deadline=" << to_string(ev.value); break;
      case EventKind::Preempt:
      case EventKind::Complete:
      case EventKind::Drop: d << "executed=" << to_string(ev.value); break;
      case EventKind::ModeSwitch: {
        d << "executed=" << to_string(ev.value) << " mode=HC";
        if (sw < trace.switches.size()) {
          const auto& ms = trace.switches[sw++];
          d << " e_m=";
          for (std::size_t i = 0; i < ms.max_exec.size(); ++i)
            d << (i ? "|" : "") << trace.task_ids[i] << ':' << to_string(ms.max_exec[i]);
        }
        break;
      }
      case EventKind::Idle: d << "mode=LC"; break;
    }
    if (ev.load) d << " load=" << to_string(*ev.load);
    out << d.str() << '\n';
  }
}

std::vector<ExecSlice> execution_slices(const ScheduleTrace& trace) {
  std::vector<ExecSlice> out;
  std::optional<std::pair<std::size_t, Rational>> open;
  auto close = [&](const Rational& t) {
    if (open && open->second < t) out.push_back({open->first, open->second, t});
    open.reset();
  };
  for (const auto& ev : trace.events) {
    switch (ev.kind) {
      case EventKind::Dispatch:
        close(ev.time);
        open.emplace(static_cast<std::size_t>(ev.job), ev.time);
        break;
      case EventKind::Preempt:
      case EventKind::Complete:
      case EventKind::Drop:
        if (open && open->first == static_cast<std::size_t>(ev.job)) close(ev.time);
        break;
      default: break;
    }
  }
  close(trace.end_time);
  return out;
}

}  // namespace mcs
