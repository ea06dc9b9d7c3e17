#include "depth_planner/model_core.hpp"

#include <cmath>
#include <string>

namespace depth {

double require_finite(double value, std::string_view name) {
  if (!std::isfinite(value)) {
    throw InvalidArgument(std::string(name) + " must be finite");
  }
  return value;
}

Probability::Probability(double value, std::string_view name) : value_(value) {
  if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
    throw InvalidArgument(std::string(name) + " must lie in [0,1]");
  }
}

ThreatModel::ThreatModel(std::int64_t attacker_count, double attacker_dependence)
    : attacker_count_(attacker_count), attacker_dependence_(attacker_dependence) {
  if (attacker_count < 1) {
    throw InvalidArgument("N must be at least 1");
  }
  require_finite(attacker_dependence, "g");
  if (attacker_dependence < 0.0) {
    throw InvalidArgument("g must be nonnegative");
  }
}

RiskInput::RiskInput(double impact_, Probability likelihood_)
    : impact(impact_), likelihood(likelihood_) {
  require_finite(impact, "impact");
  if (impact < 0.0) {
    throw InvalidArgument("impact must be nonnegative");
  }
}

void Tolerances::validate() const {
  if (!(std::isfinite(rel_tol) && rel_tol > 0.0)) {
    throw InvalidArgument("rel_tol must be positive");
  }
  if (!(std::isfinite(budget_match_rel) && budget_match_rel > 0.0)) {
    throw InvalidArgument("budget_match_rel must be positive");
  }
  if (grid_steps < 1) {
    throw InvalidArgument("grid_steps must be positive");
  }
}

std::vector<double> linspace(Range range, int steps) {
  require_finite(range.low, "range low");
  require_finite(range.high, "range high");
  if (steps < 1) {
    throw InvalidArgument("steps must be positive");
  }
  if (range.high < range.low) {
    throw InvalidRange("range high must not be below range low");
  }
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    xs.push_back(range.low);
    return xs;
  }
  const double width = range.high - range.low;
  for (int i = 0; i < steps; ++i) {
    // Pin the last point so the upper endpoint is exact.
    xs.push_back(i == steps - 1 ? range.high
                                : range.low + width * static_cast<double>(i) / (steps - 1));
  }
  return xs;
}

void CurveSeries::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y)) {
      throw InvalidArgument("curve values must be finite");
    }
    if (i > 0 && !(points[i].x > points[i - 1].x)) {
      throw InvalidArgument("curve x values must be strictly increasing");
    }
  }
}

std::string_view to_string(SpendClass c) noexcept {
  switch (c) {
    case SpendClass::Underspending:
      return "underspending";
    case SpendClass::Overspending:
      return "overspending";
    case SpendClass::Optimal:
      return "optimal";
  }
  return "unknown";
}

SpendClass classify_spend(double minimal_cost, double budget, const Tolerances& tol) {
  if (minimal_cost > budget * (1.0 + tol.budget_match_rel)) {
    return SpendClass::Underspending;
  }
  if (minimal_cost < budget * (1.0 - tol.budget_match_rel)) {
    return SpendClass::Overspending;
  }
  return SpendClass::Optimal;
}

double risk(const RiskInput& input) noexcept { return input.impact * input.likelihood.value(); }

Probability combine_attackers(Probability single_fail_prob, const ThreatModel& threat) {
  return combine_attackers_from_success(1.0 - single_fail_prob.value(), threat);
}

Probability combine_attackers_from_success(double single_success_prob, const ThreatModel& threat) {
  const double s = Probability(single_success_prob, "single-attacker success probability");
  const auto n_attackers = static_cast<double>(threat.attacker_count());
  const double g = threat.attacker_dependence();

  // log of the joint "all attackers fail" probability g^(N-1) (1-s)^N
  double log_all_fail = n_attackers * std::log1p(-s);
  if (threat.attacker_count() > 1) {
    log_all_fail += (n_attackers - 1.0) * std::log(g);
  }
  if (log_all_fail > 0.0) {
    throw DependenceOutOfRange("g^(N-1) q^N must not exceed 1 (attacker dependence too large)");
  }
  const double likelihood = -std::expm1(log_all_fail);
  return Probability(likelihood < 0.0 ? 0.0 : likelihood, "likelihood");
}

double single_success_for_target(Probability target, const ThreatModel& threat) {
  const double L = target.value();
  if (!(L > 0.0 && L < 1.0)) {
    throw InfeasibleTarget("L must lie in (0,1)");
  }
  const auto n_attackers = static_cast<double>(threat.attacker_count());
  double log_ratio = std::log1p(-L);  // ln((1-L)/g^(N-1))
  if (threat.attacker_count() > 1) {
    log_ratio -= (n_attackers - 1.0) * std::log(threat.attacker_dependence());
  }
  if (!std::isfinite(log_ratio) || log_ratio > 0.0) {
    throw InfeasibleTarget("(1-L)/g^(N-1) must lie in (0,1]");
  }
  return -std::expm1(log_ratio / n_attackers);
}

}  // namespace depth
