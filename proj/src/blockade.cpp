#include "depth_planner/blockade.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "depth_planner/minimize.hpp"

namespace depth {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double require_dependence(double f) {
  require_finite(f, "f");
  if (f < 0.0) {
    throw InvalidArgument("f must be nonnegative");
  }
  return f;
}

}  // namespace

BlockadePosture::BlockadePosture(double defense_count, Probability failure_prob,
                                 double defense_dependence)
    : defense_count_(defense_count),
      failure_prob_(failure_prob),
      defense_dependence_(defense_dependence) {
  require_finite(defense_count, "n");
  if (defense_count < 0.0) {
    throw InvalidArgument("n must be nonnegative");
  }
  require_dependence(defense_dependence);
  if (defense_dependence * failure_prob.value() > 1.0) {
    throw DependenceOutOfRange("f*p must not exceed 1");
  }
}

double BlockadePosture::joint_failure() const {
  const double n = defense_count_;
  const double joint = std::pow(defense_dependence_, n - 1.0) * std::pow(failure_prob_.value(), n);
  if (!(joint <= 1.0)) {
    throw DependenceOutOfRange("f^(n-1) p^n must lie in [0,1]");
  }
  return joint;
}

CostModel::CostModel(double scale, Probability best_failure_prob, double budget)
    : scale_(scale), best_failure_prob_(best_failure_prob), budget_(budget) {
  require_finite(scale, "A");
  require_finite(budget, "budget");
  if (scale <= 0.0) {
    throw InvalidArgument("A must be positive");
  }
  if (budget <= 0.0) {
    throw InvalidArgument("budget must be positive");
  }
  if (best_failure_prob.value() >= 1.0) {
    throw InvalidArgument("p_best must lie in [0,1)");
  }
}

Probability blockade_likelihood(const BlockadePosture& posture, const ThreatModel& threat) {
  return combine_attackers_from_success(posture.joint_failure(), threat);
}

double solve_defense_count(Probability p, Probability target_L, const ThreatModel& threat,
                           double f) {
  require_dependence(f);
  if (!(p.value() > 0.0 && p.value() < 1.0)) {
    throw InfeasibleTarget("p must lie in (0,1)");
  }
  const double y = single_success_for_target(target_L, threat);
  const double fp = f * p.value();
  if (!(fp > 0.0 && fp < 1.0)) {
    throw InfeasibleTarget("f*p must lie in (0,1)");
  }
  if (!(f * y > 0.0)) {
    throw InfeasibleTarget("f*y must be positive");
  }
  const double n = std::log(f * y) / std::log(fp);
  if (!(std::isfinite(n) && n > 0.0)) {
    throw InfeasibleTarget("target L needs a nonpositive defense count");
  }
  return n;
}

Probability solve_failure_prob(double n, Probability target_L, const ThreatModel& threat,
                               double f) {
  require_finite(n, "n");
  require_dependence(f);
  if (n <= 0.0) {
    throw InfeasibleTarget("n must be positive");
  }
  if (f <= 0.0) {
    throw InfeasibleTarget("f must be positive");
  }
  const double y = single_success_for_target(target_L, threat);
  if (!(y > 0.0)) {
    throw InfeasibleTarget("target L needs zero per-attacker success");
  }
  const double p = std::exp((std::log(y) - (n - 1.0) * std::log(f)) / n);
  if (!(p > 0.0 && p < 1.0)) {
    throw InfeasibleTarget("solved p must lie in (0,1)");
  }
  if (f * p > 1.0) {
    throw InfeasibleTarget("solved p violates f*p <= 1");
  }
  return Probability(p, "p");
}

CurveSeries indifference_curve(Probability target_L, const ThreatModel& threat, double f,
                               Range p_range, int steps) {
  if (!(p_range.low > 0.0 && p_range.high < 1.0)) {
    throw InvalidRange("p range must lie inside (0,1)");
  }
  CurveSeries series{"p", "n", p_range, {}};
  for (double p : linspace(p_range, steps)) {
    try {
      series.points.push_back({p, solve_defense_count(Probability(p, "p"), target_L, threat, f)});
    } catch (const InfeasibleTarget&) {
    } catch (const DependenceOutOfRange&) {
    }
  }
  if (series.points.empty()) {
    throw EmptySeries("no feasible points in range");
  }
  return series;
}

CurveSeries budget_curve(const CostModel& cost_model, Range p_range, int steps) {
  const double p_best = cost_model.best_failure_prob();
  if (p_range.low < p_best) {
    throw InvalidRange("p range must not extend below p_best");
  }
  if (p_range.high > 1.0) {
    throw InvalidRange("p range must not extend above 1");
  }
  CurveSeries series{"p", "n", p_range, {}};
  const double per_unit = cost_model.budget() / cost_model.scale();
  for (double p : linspace(p_range, steps)) {
    series.points.push_back({p, per_unit * (p - p_best)});
  }
  return series;
}

double price_per_defense(const CostModel& cost_model, Probability p) {
  const double p_best = cost_model.best_failure_prob();
  if (!(p.value() > p_best + kProbabilityGuard)) {
    throw InvalidRange("p must exceed p_best");
  }
  return cost_model.scale() / (p.value() - p_best);
}

PostureVerdict optimize_blockade(Probability target_L, const ThreatModel& threat, double f,
                                 const CostModel& cost_model, const Tolerances& tol,
                                 bool integer_mode) {
  tol.validate();
  require_dependence(f);
  // Surface bad targets before the search swallows them as infeasible points.
  single_success_for_target(target_L, threat);

  auto cost_at = [&](double p) {
    try {
      const Probability prob(p, "p");
      return solve_defense_count(prob, target_L, threat, f) * price_per_defense(cost_model, prob);
    } catch (const ModelError&) {
      return kInf;
    }
  };

  const double low = cost_model.best_failure_prob() + kProbabilityGuard;
  const double high = 1.0 - kProbabilityGuard;
  const ScalarMinimum best = minimize_bracketed(cost_at, low, high, tol.grid_steps, tol.rel_tol);

  const Probability p_star(best.x, "p");
  double n_final = solve_defense_count(p_star, target_L, threat, f);
  Probability p_final = p_star;
  double cost_final = best.value;

  if (integer_mode) {
    const double lower = std::floor(n_final);
    const double upper = std::ceil(n_final);
    std::optional<PostureVerdict> cheapest;
    for (double n : {lower, upper, upper + 1.0}) {
      if (n < 1.0 || (cheapest && n == cheapest->optimal_posture.defense_count())) {
        continue;
      }
      try {
        const Probability p = solve_failure_prob(n, target_L, threat, f);
        const double cost = n * price_per_defense(cost_model, p);
        if (!cheapest || cost < cheapest->minimal_cost) {
          cheapest = PostureVerdict{SpendClass::Optimal, BlockadePosture(n, p, f), cost, 0.0};
        }
      } catch (const ModelError&) {
      }
    }
    if (!cheapest) {
      throw InfeasibleTarget("no integer defense count near the optimum reaches target L");
    }
    n_final = cheapest->optimal_posture.defense_count();
    p_final = cheapest->optimal_posture.failure_prob();
    cost_final = cheapest->minimal_cost;
  }

  return PostureVerdict{classify_spend(cost_final, cost_model.budget(), tol),
                        BlockadePosture(n_final, p_final, f), cost_final,
                        cost_model.budget() - cost_final};
}

CurveSeries likelihood_sweep(const BlockadePosture& base, const ThreatModel& threat,
                             SweepAxis axis, Range range, int steps) {
  const char* label = axis == SweepAxis::DefenseCount  ? "n"
                      : axis == SweepAxis::FailureProb ? "p"
                                                       : "N";
  CurveSeries series{label, "L", range, {}};
  for (double v : linspace(range, steps)) {
    try {
      switch (axis) {
        case SweepAxis::DefenseCount:
          series.points.push_back(
              {v, blockade_likelihood(BlockadePosture(v, base.failure_prob(),
                                                      base.defense_dependence()),
                                      threat)});
          break;
        case SweepAxis::FailureProb:
          series.points.push_back(
              {v, blockade_likelihood(
                      BlockadePosture(base.defense_count(), Probability(v, "p"),
                                      base.defense_dependence()),
                      threat)});
          break;
        case SweepAxis::AttackerCount: {
          const double n_attackers = std::round(v);
          if (!series.points.empty() && series.points.back().x == n_attackers) {
            break;
          }
          const ThreatModel t(static_cast<std::int64_t>(n_attackers), threat.attacker_dependence());
          series.points.push_back({n_attackers, blockade_likelihood(base, t)});
          break;
        }
      }
    } catch (const DependenceOutOfRange&) {
    } catch (const InvalidArgument&) {
    }
  }
  if (series.points.empty()) {
    throw EmptySeries("no feasible points in range");
  }
  return series;
}

}  // namespace depth
