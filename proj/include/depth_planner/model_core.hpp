#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "depth_planner/errors.hpp"

namespace depth {

/// Throws InvalidArgument unless `value` is finite.
double require_finite(double value, std::string_view name);

/// A probability in [0,1]. Construction is the only place the range is
/// checked; everything downstream assumes validity.
class Probability {
 public:
  constexpr Probability() noexcept = default;
  explicit Probability(double value, std::string_view name = "probability");

  [[nodiscard]] constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }  // NOLINT

 private:
  double value_ = 0.0;
};

/// Attacker population: N attackers with dependence factor g (1 = independent).
class ThreatModel {
 public:
  explicit ThreatModel(std::int64_t attacker_count = 1, double attacker_dependence = 1.0);

  [[nodiscard]] std::int64_t attacker_count() const noexcept { return attacker_count_; }
  [[nodiscard]] double attacker_dependence() const noexcept { return attacker_dependence_; }

 private:
  std::int64_t attacker_count_;
  double attacker_dependence_;
};

struct RiskInput {
  RiskInput(double impact, Probability likelihood);

  double impact;
  Probability likelihood;
};

struct Tolerances {
  double rel_tol = 1e-9;
  double budget_match_rel = 1e-3;
  int grid_steps = 256;

  void validate() const;
};

/// Closed interval used by every curve sampler.
struct Range {
  double low = 0.0;
  double high = 0.0;
};

/// `steps` uniformly spaced points over [low, high], endpoints included.
/// A single step yields `low`.
std::vector<double> linspace(Range range, int steps);

struct CurvePoint {
  double x;
  double y;
};

/// Sampled (x, y) series backing the indifference, budget and likelihood
/// curves. `requested` keeps the caller's range; the points themselves carry
/// the feasible sub-range once infeasible samples are dropped.
struct CurveSeries {
  std::string x_label;
  std::string y_label;
  Range requested;
  std::vector<CurvePoint> points;

  /// Throws InvalidArgument unless x is strictly increasing and all values finite.
  void validate() const;
};

enum class SpendClass { Underspending, Overspending, Optimal };

std::string_view to_string(SpendClass c) noexcept;

/// Classifies a minimal posture cost against the available budget.
SpendClass classify_spend(double minimal_cost, double budget, const Tolerances& tol);

double risk(const RiskInput& input) noexcept;

/// L = 1 - g^(N-1) q^N, with q the single-attacker failure probability.
Probability combine_attackers(Probability single_fail_prob, const ThreatModel& threat);

/// Same combinator expressed through the single-attacker success probability
/// s = 1 - q, which keeps precision when s is tiny.
Probability combine_attackers_from_success(double single_success_prob, const ThreatModel& threat);

/// Inverts the attacker combinator: the single-attacker success probability
/// s for which combine_attackers_from_success(s, threat) == target.
/// Throws InfeasibleTarget when (1-L)/g^(N-1) leaves (0,1].
double single_success_for_target(Probability target, const ThreatModel& threat);

}  // namespace depth
