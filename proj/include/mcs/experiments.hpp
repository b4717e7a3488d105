#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcs/generator.hpp"
#include "mcs/probability.hpp"
#include "mcs/simulator.hpp"

namespace mcs {

/// Serial runs every trial in order on the calling thread; Parallel spreads
/// trials over OpenMP threads. Both produce identical results because each
/// trial seeds its own generator from (seed, cell, trial) and results are
/// merged by index.
enum class Exec { Serial, Parallel };

struct RunOptions {
  std::uint64_t seed = 1;
  std::size_t trials = 1000;
  Exec exec = Exec::Parallel;
  int threads = 0;  // 0 = OpenMP default
};

// ---- Table III: mean largest alpha* per (RC, band) ----

/// Published means, rows RC = 3, 4, 5 and columns the five standard bands.
inline constexpr std::array<std::array<double, 5>, 3> kTable3Reference{{
    {0.985, 0.931, 0.832, 0.566, 0.235},
    {0.988, 0.950, 0.831, 0.643, 0.321},
    {0.978, 0.912, 0.648, 0.295, 0.089},
}};

struct Table3Cell {
  int ratio = 3;
  std::size_t band = 0;  // index into standard_bands()
  bool inflate_lc = false;
  std::size_t sets = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  double reference = 0.0;
};

std::vector<Table3Cell> run_table3(const RunOptions& opt, bool inflate_lc, const std::vector<int>& ratios = {3, 4, 5});

/// Per-set values of one cell, in trial order.
std::vector<double> table3_samples(const RunOptions& opt, int ratio, std::size_t band, bool inflate_lc);

void write_table3_csv(std::ostream& out, const RunOptions& opt, const std::vector<Table3Cell>& cells);

// ---- Figure 2: optimal beta* over (U_L, w) ----

struct Figure2Cell {
  double u_lc = 0.0;
  double w = 0.0;
  double beta_opt = 0.0;
  double one_minus_m = 0.0;
  bool endpoint = false;  // beta_opt is 0 or 1-M (within 1e-9)
};

/// U_L from U_sum-1 to 1 in steps of 0.1, w from 0.02 to 1 in steps of 0.02.
std::vector<Figure2Cell> run_figure2(double u_sum = 1.5);
std::vector<double> figure_w_grid();
void write_figure2_csv(std::ostream& out, const std::vector<Figure2Cell>& cells);

// ---- Figure 3: no-switch probability, static vs dynamic ----

struct Figure3Cell {
  int n = 1;
  Rational beta;
  double p_static = 0.0;
  double p_dynamic = 0.0;
};

std::vector<Figure3Cell> run_figure3(const ExecDistribution& dist, int n_max, const std::vector<Rational>& betas,
                                     const ProbOptions& prob = {});
void write_figure3_csv(std::ostream& out, const std::vector<Figure3Cell>& cells);

// ---- Figure 4: dynamic vs static total system utilization ----

struct Figure4Cell {
  double u_lc = 0.0;
  double w = 0.0;
  double su_dynamic = 0.0;
  double su_static = 0.0;
  double ratio = 0.0;
  double overlap_w = 0.0;  // weight from which the two coincide
};

/// U_L from U_sum-1 to 1 in steps of 0.1 on the Figure 2 w grid.
std::vector<Figure4Cell> run_figure4(double u_sum = 1.3);
void write_figure4_csv(std::ostream& out, const std::vector<Figure4Cell>& cells);

// ---- Randomised property suites ----

struct SuiteOptions {
  RunOptions run;
  std::size_t vectors = 100;  // fixed budget vectors per sequence (lemma2)
  Rational horizon{1000};
};

struct SuiteReport {
  std::string name;
  std::size_t trials = 0;
  std::size_t checks = 0;    // individual assertions evaluated
  std::size_t switches = 0;  // trials that saw at least one mode switch
  std::size_t violations = 0;
  std::string first_failure;

  bool passed() const { return violations == 0; }
};

/// Random workload: a generated task set, a (alpha*, beta*, x) point that
/// passes the schedulability test, per-task alphas and a job sequence.
struct Scenario {
  TaskSet ts;
  Rational alpha_star;
  Rational beta_star;
  Rational x;
  AlphaAssignment alphas;
  JobSequence jobs;
  std::string demand;  // demand model label
};

/// Draws scenarios until one passes the test (the set needs both LC and HC
/// tasks and M < 1). `variant` rotates through the demand models.
Scenario random_scenario(Rng& rng, std::size_t variant, const Rational& horizon);

/// Observed MEBA load <= beta*U_H at every event and == at every switch, and
/// the triggering job's demand exceeds its recorded maximum.
SuiteReport run_lemma1_suite(const SuiteOptions& opt);

/// Fixed budget vectors never switch later than MEBA.
SuiteReport run_lemma2_suite(const SuiteOptions& opt);

/// EDF-UVD on the dynamic set and EDF-VD on the mapped static set agree.
SuiteReport run_mapping_suite(const SuiteOptions& opt);

/// verify_mc_schedulable finds no violation on sets passing the test.
SuiteReport run_e2e_suite(const SuiteOptions& opt);

void write_suite_csv(std::ostream& out, const SuiteOptions& opt, const std::vector<SuiteReport>& reports);

}  // namespace mcs
