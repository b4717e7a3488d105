#pragma once

#include "mcs/job.hpp"
#include "mcs/simulator.hpp"
#include "mcs/taskmodel.hpp"

namespace mcs::testing {

// Two LC tasks with half their WCET guaranteed and one HC task whose LC-mode
// share is a single unit. HC demand arrives mid-way through the LC jobs, so
// the switch lands while both LC jobs still hold their guaranteed halves.
inline TaskSet figure1_taskset() {
  return TaskSet({McTask{1, 10, 4, Criticality::LC, Rational(1, 2), {}},
                  McTask{2, 12, 4, Criticality::LC, Rational(1, 2), {}},
                  McTask{3, 7, 7, Criticality::HC, 0, Rational(1)}});
}

inline JobSequence figure1_jobs() { return {{1, 0, 4, 0}, {2, 0, 4, 0}, {3, 4, 7, 0}}; }

inline SimConfig figure1_config(Policy p) {
  SimConfig c;
  c.policy = p;
  c.x = Rational(1, 2);
  c.horizon = 20;
  c.beta_star = Rational(1, 7);
  c.record_load = false;
  return c;
}

}  // namespace mcs::testing
