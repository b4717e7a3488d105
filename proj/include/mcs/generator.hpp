#pragma once

#include <cstdint>
#include <vector>

#include "mcs/job.hpp"
#include "mcs/probability.hpp"
#include "mcs/random.hpp"
#include "mcs/taskmodel.hpp"

namespace mcs {

struct Band {
  Rational lo;
  Rational hi;
};

/// The five target bands for U_A: [0.54,0.55] ... [0.74,0.75].
std::vector<Band> standard_bands();

struct GenParams {
  double hc_probability = 0.5;
  int lc_exec_min = 1;  // C^L ~ U{lc_exec_min..lc_exec_max}
  int lc_exec_max = 10;
  int ratio = 3;        // HC: C ~ U{C^L..ratio*C^L}
  int period_max = 200; // T ~ U{C..period_max}
  Band band{Rational(54, 100), Rational(55, 100)};
  bool inflate_lc = false;  // variant: LC tasks also draw C from [C^L, ratio*C^L]
  std::uint64_t max_restarts = 1'000'000;

  /// Throws InvalidTask on out-of-range parameters.
  void validate() const;
};

/// One task with integer C^L, C and T. HC tasks carry C^L in lc_estimate.
McTask gen_task(const GenParams& params, Rng& rng, TaskId id);

/// Adds tasks until U_A enters the band; restarts from an empty set when it
/// overshoots. Every task consumes the same number of draws whatever its
/// criticality, so a task never perturbs the draws of the tasks before it.
/// Throws GenerationTimeout after max_restarts restarts.
TaskSet gen_taskset(const GenParams& params, Rng& rng);

/// U_A = (U_L + U_H + sum_HC C^L/T) / 2.
Rational average_utilization(const TaskSet& ts);

/// Largest alpha* admissible with beta* = sum_HC C^L/T / U_H, or 0 when the
/// set fails the test. Sets without LC or HC tasks score 1 if they fit on the
/// processor and 0 otherwise.
Rational max_service_level(const TaskSet& ts);

struct DemandModel {
  enum class Kind { FractionGrid, Uniform, Constant };

  Kind kind = Kind::Constant;
  double lo = 1.0;  // Uniform range or Constant value, as fractions of C
  double hi = 1.0;
  std::vector<Rational> scales;  // FractionGrid support
  std::vector<double> pmf;       // FractionGrid weights
  bool lc_full = true;           // LC jobs demand C; otherwise they follow the model too
  Rational jitter{0};            // extra inter-arrival, uniform in [0, jitter*T], 1/1000 steps

  static DemandModel constant(double frac);
  static DemandModel uniform(double lo, double hi);
  static DemandModel fraction_grid(const ExecDistribution& dist);

  /// Scale in (0,1]; Uniform draws are rounded to 1/1000.
  Rational draw_scale(Rng& rng) const;
};

/// Jobs of every task released in [0, horizon), sorted and numbered.
JobSequence gen_job_sequence(const TaskSet& ts, const Rational& horizon, const DemandModel& model, Rng& rng);

}  // namespace mcs
