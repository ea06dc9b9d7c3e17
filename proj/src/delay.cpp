#include "depth_planner/delay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "depth_planner/minimize.hpp"

namespace depth {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCapabilityGuard = 1e-12;

double require_positive(double v, const char* name) {
  require_finite(v, name);
  if (v <= 0.0) {
    throw InvalidArgument(std::string(name) + " must be positive");
  }
  return v;
}

void require_attackers(std::int64_t attackers) {
  if (attackers < 1) {
    throw InvalidArgument("N must be at least 1");
  }
}

}  // namespace

DelayTimescales::DelayTimescales(double find_time, double break_time, double detect_time,
                                 double repair_time)
    : find_(require_positive(find_time, "tf")),
      break_(require_positive(break_time, "tb")),
      detect_(require_positive(detect_time, "td")),
      repair_(require_positive(repair_time, "tr")) {}

DetectionModel::DetectionModel(double detect_rate, double stage_time)
    : rate_(detect_rate), stage_(require_positive(stage_time, "tau-a")) {
  require_finite(detect_rate, "lambda");
  if (detect_rate < 0.0) {
    throw InvalidArgument("lambda must be nonnegative");
  }
}

DelayCostModel::DelayCostModel(double scale, double best_capability, double budget)
    : scale_(require_positive(scale, "A")),
      best_(require_positive(best_capability, "x-best")),
      budget_(require_positive(budget, "budget")) {}

double DelayCostModel::price(double x) const {
  if (!(x > 0.0 && x < best_)) {
    throw InvalidRange("x must lie in (0, x_best)");
  }
  return scale_ / (best_ - x);
}

PriceTable::PriceTable(std::vector<CurvePoint> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) {
    throw InvalidArgument("price table needs at least two nodes");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto [x, price] = nodes_[i];
    require_finite(x, "price table x");
    require_finite(price, "price table price");
    if (x <= 0.0 || price <= 0.0) {
      throw InvalidArgument("price table entries must be positive");
    }
    if (i > 0 && !(x > nodes_[i - 1].x)) {
      throw InvalidArgument("price table x must be strictly increasing");
    }
    if (i > 0 && price < nodes_[i - 1].y) {
      throw InvalidArgument("price table prices must be nondecreasing in x");
    }
  }
}

double PriceTable::price(double x) const {
  if (!(x >= min_x() && x <= max_x())) {
    throw InvalidRange("x outside the price table");
  }
  const auto upper = std::lower_bound(nodes_.begin(), nodes_.end(), x,
                                      [](const CurvePoint& node, double v) { return node.x < v; });
  if (upper == nodes_.begin()) {
    return upper->y;
  }
  const auto lower = upper - 1;
  const double w = (x - lower->x) / (upper->x - lower->x);
  return lower->y + w * (upper->y - lower->y);
}

double saturation_level(const DelayTimescales& ts, std::int64_t attackers) {
  require_attackers(attackers);
  return static_cast<double>(attackers) * ts.repair_cycle() / ts.attack_cycle();
}

double broken_defenses_at(double t, const DelayTimescales& ts, std::int64_t attackers) {
  require_finite(t, "t");
  if (t < 0.0) {
    throw InvalidArgument("t must be nonnegative");
  }
  return saturation_level(ts, attackers) * -std::expm1(-t / ts.repair_cycle());
}

Trajectory trajectory(const DelayTimescales& ts, std::int64_t attackers, double t_max, int steps) {
  require_positive(t_max, "t-max");
  if (steps < 2) {
    throw InvalidArgument("steps must be at least 2");
  }
  Trajectory out;
  for (double t : linspace({0.0, t_max}, steps)) {
    out.points.push_back({t, broken_defenses_at(t, ts, attackers)});
  }
  return out;
}

std::int64_t min_defenses_whackamole(const DelayTimescales& ts, std::int64_t attackers) {
  return static_cast<std::int64_t>(std::floor(saturation_level(ts, attackers))) + 1;
}

Probability detection_probability(const DetectionModel& dm) {
  return Probability(-std::expm1(-dm.capability()), "detection probability");
}

Probability stealth_likelihood(const DetectionModel& dm, double n, const ThreatModel& threat) {
  require_finite(n, "n");
  if (n < 0.0) {
    throw InvalidArgument("n must be nonnegative");
  }
  return combine_attackers_from_success(std::exp(-dm.capability() * n), threat);
}

double stealth_sensitivity(const DetectionModel& dm, double n) {
  require_finite(n, "n");
  const double x = dm.capability();
  return x * std::exp(-x * n);
}

double stealth_requirement(Probability target_L, const ThreatModel& threat) {
  const double y = single_success_for_target(target_L, threat);
  if (!(y > 0.0)) {
    throw InfeasibleTarget("(1-L)/g^(N-1) must lie in (0,1)");
  }
  return -std::log(y);
}

double solve_stealth_defense_count(Probability target_L, const DetectionModel& dm,
                                   const ThreatModel& threat) {
  const double requirement = stealth_requirement(target_L, threat);
  if (!(dm.capability() > 0.0)) {
    throw InfeasibleTarget("lambda*tau_a must be positive to reach target L");
  }
  return requirement / dm.capability();
}

CurveSeries stealth_indifference(Probability target_L, const ThreatModel& threat, Range x_range,
                                 int steps) {
  if (!(x_range.low > 0.0)) {
    throw InvalidRange("x range must be positive");
  }
  const double requirement = stealth_requirement(target_L, threat);
  CurveSeries series{"x", "n", x_range, {}};
  for (double x : linspace(x_range, steps)) {
    series.points.push_back({x, requirement / x});
  }
  return series;
}

std::vector<SurfacePoint> stealth_surface(Probability target_L, const ThreatModel& threat,
                                          Range rate_range, int rate_steps, Range stage_range,
                                          int stage_steps) {
  if (!(rate_range.low > 0.0 && stage_range.low > 0.0)) {
    throw InvalidRange("lambda and tau_a ranges must be positive");
  }
  const double requirement = stealth_requirement(target_L, threat);
  const auto rates = linspace(rate_range, rate_steps);
  const auto stages = linspace(stage_range, stage_steps);
  std::vector<SurfacePoint> out;
  out.reserve(rates.size() * stages.size());
  for (double rate : rates) {
    for (double stage : stages) {
      out.push_back({rate, stage, requirement / (rate * stage)});
    }
  }
  return out;
}

DelayVerdict optimize_delay(Probability target_L, const ThreatModel& threat,
                            const DelayCostModel& cost_model, const Tolerances& tol,
                            bool integer_mode, const std::optional<PriceTable>& table) {
  tol.validate();
  const double requirement = stealth_requirement(target_L, threat);
  auto price = [&](double x) { return table ? table->price(x) : cost_model.price(x); };
  auto cost_at = [&](double x) {
    try {
      return requirement / x * price(x);
    } catch (const ModelError&) {
      return kInf;
    }
  };

  const double best = cost_model.best_capability();
  const double low = table ? table->min_x() : kCapabilityGuard * best;
  const double high = table ? table->max_x() : best * (1.0 - kCapabilityGuard);
  const ScalarMinimum found = minimize_bracketed(cost_at, low, high, tol.grid_steps, tol.rel_tol);

  DelayPosture posture{requirement / found.x, found.x};
  double cost = found.value;

  if (integer_mode) {
    const double lower = std::floor(posture.defense_count);
    const double upper = std::ceil(posture.defense_count);
    bool any = false;
    double prev = 0.0;
    for (double n : {lower, upper, upper + 1.0}) {
      if (n < 1.0 || n == prev) {
        continue;
      }
      prev = n;
      const double x = requirement / n;
      const double c = cost_at(x) == kInf ? kInf : n * price(x);
      if (std::isfinite(c) && (!any || c < cost)) {
        posture = {n, x};
        cost = c;
        any = true;
      }
    }
    if (!any) {
      throw InfeasibleTarget("required x exceeds x_best at every candidate n");
    }
  }

  return DelayVerdict{classify_spend(cost, cost_model.budget(), tol), posture, cost,
                      cost_model.budget() - cost};
}

}  // namespace depth
