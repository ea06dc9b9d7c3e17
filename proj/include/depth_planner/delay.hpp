#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "depth_planner/model_core.hpp"

namespace depth {

/// Whack-a-mole timescales: attacker find/break times and defender
/// detect/repair times, all in the same time unit.
class DelayTimescales {
 public:
  DelayTimescales(double find_time, double break_time, double detect_time, double repair_time);

  [[nodiscard]] double find_time() const noexcept { return find_; }
  [[nodiscard]] double break_time() const noexcept { return break_; }
  [[nodiscard]] double detect_time() const noexcept { return detect_; }
  [[nodiscard]] double repair_time() const noexcept { return repair_; }

  /// τ_F + τ_B: mean time for one attacker to defeat one defense.
  [[nodiscard]] double attack_cycle() const noexcept { return find_ + break_; }
  /// τ_D + τ_R: mean time for the defender to restore one broken defense.
  [[nodiscard]] double repair_cycle() const noexcept { return detect_ + repair_; }

 private:
  double find_;
  double break_;
  double detect_;
  double repair_;
};

/// Stealth-model detection: Poisson detection at rate λ while the attacker
/// spends τ_a on each stage. λ = 0 models a defender that never notices.
class DetectionModel {
 public:
  DetectionModel(double detect_rate, double stage_time);

  [[nodiscard]] double detect_rate() const noexcept { return rate_; }
  [[nodiscard]] double stage_time() const noexcept { return stage_; }
  /// Compressed capability x = λ τ_a.
  [[nodiscard]] double capability() const noexcept { return rate_ * stage_; }

 private:
  double rate_;
  double stage_;
};

struct TrajectoryPoint {
  double t;
  double n_broken;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
};

/// Delay-side pricing: each defense at capability x = λτ_a costs
/// scale / (best_capability - x).
class DelayCostModel {
 public:
  DelayCostModel(double scale, double best_capability, double budget);

  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] double best_capability() const noexcept { return best_; }
  [[nodiscard]] double budget() const noexcept { return budget_; }

  /// Throws InvalidRange unless 0 < x < best_capability.
  [[nodiscard]] double price(double x) const;

 private:
  double scale_;
  double best_;
  double budget_;
};

/// User-supplied per-defense price as a function of capability x, linearly
/// interpolated between nodes. Prices must be nondecreasing in x.
class PriceTable {
 public:
  explicit PriceTable(std::vector<CurvePoint> nodes);

  [[nodiscard]] double price(double x) const;
  [[nodiscard]] double min_x() const noexcept { return nodes_.front().x; }
  [[nodiscard]] double max_x() const noexcept { return nodes_.back().x; }

 private:
  std::vector<CurvePoint> nodes_;
};

struct DelayPosture {
  double defense_count;
  double capability;  // x = λ τ_a
};

struct DelayVerdict {
  SpendClass classification;
  DelayPosture optimal_posture;
  double minimal_cost;
  double surplus;
};

struct SurfacePoint {
  double detect_rate;
  double stage_time;
  double defense_count;
};

/// Mean number of broken defenses at time t for N attackers:
/// N (τ_D+τ_R)/(τ_F+τ_B) (1 - exp(-t/(τ_D+τ_R))).
double broken_defenses_at(double t, const DelayTimescales& ts, std::int64_t attackers);

/// Steady-state count of simultaneously broken defenses.
double saturation_level(const DelayTimescales& ts, std::int64_t attackers);

Trajectory trajectory(const DelayTimescales& ts, std::int64_t attackers, double t_max, int steps);

/// Smallest integer strictly above the saturation level.
std::int64_t min_defenses_whackamole(const DelayTimescales& ts, std::int64_t attackers);

Probability detection_probability(const DetectionModel& dm);

/// L_N = 1 - g^(N-1) (1 - exp(-λ τ_a n))^N.
Probability stealth_likelihood(const DetectionModel& dm, double n, const ThreatModel& threat);

/// ∂(1-L)/∂n for a single attacker.
double stealth_sensitivity(const DetectionModel& dm, double n);

double solve_stealth_defense_count(Probability target_L, const DetectionModel& dm,
                                   const ThreatModel& threat);

/// n · x required for target_L; n(x) = K / x along a compressed curve.
double stealth_requirement(Probability target_L, const ThreatModel& threat);

CurveSeries stealth_indifference(Probability target_L, const ThreatModel& threat, Range x_range,
                                 int steps);

/// (λ, τ_a, n) over a grid, λ outer and τ_a inner.
std::vector<SurfacePoint> stealth_surface(Probability target_L, const ThreatModel& threat,
                                          Range rate_range, int rate_steps, Range stage_range,
                                          int stage_steps);

/// Minimum-cost stealth posture. By default defenses are priced by
/// `cost_model`; a PriceTable replaces that pricing (budget still comes from
/// `cost_model`).
DelayVerdict optimize_delay(Probability target_L, const ThreatModel& threat,
                            const DelayCostModel& cost_model, const Tolerances& tol,
                            bool integer_mode, const std::optional<PriceTable>& table = std::nullopt);

}  // namespace depth
