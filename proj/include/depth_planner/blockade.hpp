#pragma once

#include <cstdint>

#include "depth_planner/model_core.hpp"

namespace depth {

/// n defenses, each failing with probability p, with defense dependence f
/// (f = 1 independent, f > 1 overlapping weaknesses). n is real on curves and
/// integral in final postures.
class BlockadePosture {
 public:
  BlockadePosture(double defense_count, Probability failure_prob, double defense_dependence = 1.0);

  [[nodiscard]] double defense_count() const noexcept { return defense_count_; }
  [[nodiscard]] Probability failure_prob() const noexcept { return failure_prob_; }
  [[nodiscard]] double defense_dependence() const noexcept { return defense_dependence_; }

  /// Probability that one attacker gets through every defense: f^(n-1) p^n.
  [[nodiscard]] double joint_failure() const;

 private:
  double defense_count_;
  Probability failure_prob_;
  double defense_dependence_;
};

/// Price model: each defense costs scale / (p - p_best).
class CostModel {
 public:
  CostModel(double scale, Probability best_failure_prob, double budget);

  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] Probability best_failure_prob() const noexcept { return best_failure_prob_; }
  [[nodiscard]] double budget() const noexcept { return budget_; }

 private:
  double scale_;
  Probability best_failure_prob_;
  double budget_;
};

struct PostureVerdict {
  SpendClass classification;
  BlockadePosture optimal_posture;
  double minimal_cost;
  double surplus;  // budget - minimal_cost
};

// Guard band applied at both singular ends of a p search.
inline constexpr double kProbabilityGuard = 1e-12;

Probability blockade_likelihood(const BlockadePosture& posture, const ThreatModel& threat);

/// Real n reaching target_L: n = ln(f y) / ln(f p), y the per-attacker
/// success probability the threat model allows.
double solve_defense_count(Probability p, Probability target_L, const ThreatModel& threat,
                           double f = 1.0);

/// Per-defense failure probability reaching target_L with n defenses:
/// p = (y / f^(n-1))^(1/n). With f = g = 1 this is [1 - (1-L)^(1/N)]^(1/n).
Probability solve_failure_prob(double n, Probability target_L, const ThreatModel& threat,
                               double f = 1.0);

/// Indifference curve of (p, n) pairs at constant breach likelihood.
/// Infeasible samples are dropped; an empty result throws EmptySeries.
CurveSeries indifference_curve(Probability target_L, const ThreatModel& threat, double f,
                               Range p_range, int steps);

/// Postures purchasable with the whole budget: n = (budget / A) (p - p_best).
CurveSeries budget_curve(const CostModel& cost_model, Range p_range, int steps);

double price_per_defense(const CostModel& cost_model, Probability p);

/// Minimum-cost posture on the indifference curve, classified against the
/// budget. In integer mode the continuous optimum n* is rounded to the
/// cheapest of floor(n*), ceil(n*), ceil(n*)+1 with p re-solved for each.
PostureVerdict optimize_blockade(Probability target_L, const ThreatModel& threat, double f,
                                 const CostModel& cost_model, const Tolerances& tol,
                                 bool integer_mode);

enum class SweepAxis { DefenseCount, FailureProb, AttackerCount };

/// Breach likelihood as one of n, p or N varies over `range` with the other
/// parameters held at `base` / `threat`. AttackerCount sweeps round each
/// sample to the nearest integer and drop duplicates.
CurveSeries likelihood_sweep(const BlockadePosture& base, const ThreatModel& threat,
                             SweepAxis axis, Range range, int steps);

}  // namespace depth
