#pragma once

#include <map>
#include <optional>
#include <vector>

#include "mcs/taskmodel.hpp"

namespace mcs {

/// Outcome of the utilization-based test for MEBA + EDF-UVD.
///
/// `x_lo`/`x_hi` bound the admissible virtual-deadline factor, already clamped
/// to [0,1]. `m` is (U_H+U_L-1)/(U_L*U_H); when U_L*U_H = 0 the threshold is
/// undefined, `m_exact` is empty and `m` is -inf or +inf depending on whether
/// the set fits on the processor at all.
struct SchedVerdict {
  bool schedulable = false;
  Rational x_lo{0};
  Rational x_hi{0};
  double m = 0.0;
  std::optional<Rational> m_exact;

  /// x_lo, or x_hi when the lower bound degenerates to zero. Empty when not
  /// schedulable.
  std::optional<Rational> default_x() const;
};

/// M = (U_H+U_L-1)/(U_L*U_H), or empty when U_L*U_H = 0.
std::optional<Rational> threshold_m(const Utilizations& u);

SchedVerdict theorem1_test(const Utilizations& u, const Rational& alpha_star, const Rational& beta_star);
SchedVerdict theorem1_test(const TaskSet& ts, const Rational& alpha_star, const Rational& beta_star);

/// Largest alpha* in [0,1] that still satisfies (1-alpha*)(1-beta*) >= M. The
/// value is clamped at 0, so a 0 result may still be unschedulable; pair it
/// with theorem1_test when that matters.
Rational max_alpha_given_beta(const Utilizations& u, const Rational& beta_star);
Rational max_alpha_given_beta(const TaskSet& ts, const Rational& beta_star);
Rational max_beta_given_alpha(const Utilizations& u, const Rational& alpha_star);
Rational max_beta_given_alpha(const TaskSet& ts, const Rational& alpha_star);

struct ServiceUtilization {
  Rational lc_mode;  // SU_L = beta*U_H + U_L
  Rational hc_mode;  // SU_H = alpha*U_L + U_H
};

ServiceUtilization su_levels(const TaskSet& ts, const Rational& alpha_star, const Rational& beta_star);

/// SU(w) with alpha* at its largest admissible value for the given beta*.
/// Floating point; beta* may exceed 1-M by at most kSuSlack.
double total_system_utilization(const Utilizations& u, double w, double beta_star);
double total_system_utilization(const TaskSet& ts, double w, double beta_star);

/// Closed-form maximiser of SU(w) over beta* in [0, 1-M]; 1 when M <= 0 and 0
/// when w = 0.
double optimal_beta_for_su(const Utilizations& u, double w);
double optimal_beta_for_su(const TaskSet& ts, double w);

/// Weight above which the SU(w) optimum sits at beta* = 1-M, i.e. where the
/// dynamic and static utilizations coincide: U_L / (U_L + M*U_H).
double su_overlap_threshold(const Utilizations& u);

/// SU(w) of the static model under EDF-VD with no LC service after a switch.
double static_model_su(const Utilizations& u, double w);
double static_model_su(const TaskSet& ts, double w);

/// beta* = (sum of C^L/T over HC tasks) / U_H, from supplied C^L values.
Rational beta_from_lc_estimates(const TaskSet& ts);

inline constexpr double kSuSlack = 1e-9;

enum class StaticRole {
  Hc,            // tau'_i: C^L = observed max execution, C = C_i
  LcGuaranteed,  // tau'_{i,1}: HC task with C^L = C = alpha_i*C_i
  LcOptional,    // tau'_{i,2}: LC task with C = (1-alpha_i)*C_i
};

/// Static-model task produced by the dynamic-to-static mapping.
struct StaticMcTask {
  TaskId id = 0;      // fresh id within the mapped set
  TaskId source = 0;  // id of the dynamic task it came from
  StaticRole role = StaticRole::Hc;
  Rational period;
  Rational c_lo;
  Rational c_hi;
  Criticality crit = Criticality::HC;
  Rational x{1};

  /// Tie-break rank among tasks sharing a source.
  int sub() const { return role == StaticRole::Hc ? 0 : role == StaticRole::LcGuaranteed ? 1 : 2; }
  Rational utilization_lo() const { return c_lo / period; }
  Rational utilization_hi() const { return c_hi / period; }
};

/// Maps the dynamic set onto the static set used in the schedulability proof.
/// Tasks whose mapped C is zero (alpha_i = 0 or 1 halves) are omitted.
/// Throws BudgetExceedsWcet if some e_m[i] > C_i.
std::vector<StaticMcTask> map_to_static(const TaskSet& ts, const AlphaAssignment& alphas,
                                        const std::map<TaskId, Rational>& max_exec, const Rational& x);

}  // namespace mcs
