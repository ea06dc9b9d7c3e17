#include "depth_planner/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "depth_planner/blockade.hpp"
#include "depth_planner/config.hpp"
#include "depth_planner/delay.hpp"
#include "depth_planner/model_core.hpp"
#include "depth_planner/output.hpp"
#include "depth_planner/simulation.hpp"

#ifndef DEPTH_PLANNER_VERSION
#define DEPTH_PLANNER_VERSION "0.0.0"
#endif

namespace depth::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Outcome {
  Outcome(Report r) : report(std::move(r)) {}  // NOLINT

  Report report;
  int exit_code = kExitOk;
  std::string diagnostic;
};

// Effective option values for one invocation (command line over config file).
// Every typed read is echoed into the report inputs in the order it happens.
class Params {
 public:
  explicit Params(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  [[nodiscard]] bool has(const std::string& key) const { return values_.contains(key); }

  std::string raw_or(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double real(const std::string& key) {
    const double v = parse_real(key, required(key));
    record(key, v);
    return v;
  }

  double real_or(const std::string& key, double fallback) {
    return has(key) ? real(key) : (record(key, fallback), fallback);
  }

  std::int64_t integer(const std::string& key) {
    const std::string& text = required(key);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw UsageError("--" + key + " expects an integer, got '" + text + "'");
    }
    record(key, v);
    return v;
  }

  std::int64_t integer_or(const std::string& key, std::int64_t fallback) {
    return has(key) ? integer(key) : (record(key, fallback), fallback);
  }

  std::uint64_t unsigned_or(const std::string& key, std::uint64_t fallback, bool echo = true) {
    std::uint64_t v = fallback;
    if (has(key)) {
      const std::string& text = values_.at(key);
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw UsageError("--" + key + " expects a nonnegative integer, got '" + text + "'");
      }
    }
    if (echo) {
      record(key, static_cast<std::int64_t>(v));
    }
    return v;
  }

  bool flag(const std::string& key) {
    if (!has(key)) {
      return false;
    }
    const std::string& text = values_.at(key);
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
      record(key, std::string("true"));
      return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
      return false;
    }
    throw UsageError("--" + key + " expects true or false, got '" + text + "'");
  }

  std::string text(const std::string& key) {
    const std::string v = required(key);
    record(key, v);
    return v;
  }

  Probability probability(const std::string& key) {
    const double v = real(key);
    if (!(v >= 0.0 && v <= 1.0)) {
      throw UsageError(key + " must lie in [0,1]");
    }
    return Probability(v, key);
  }

  Probability probability_or(const std::string& key, double fallback) {
    return has(key) ? probability(key) : (record(key, fallback), Probability(fallback, key));
  }

  Probability open_probability(const std::string& key) {
    const double v = real(key);
    if (!(v > 0.0 && v < 1.0)) {
      throw UsageError(key + " must lie in (0,1)");
    }
    return Probability(v, key);
  }

  std::vector<Field> take_inputs() { return std::move(inputs_); }

 private:
  const std::string& required(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
      throw UsageError("missing required --" + key);
    }
    return it->second;
  }

  static double parse_real(const std::string& key, const std::string& text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
      throw UsageError("--" + key + " expects a finite number, got '" + text + "'");
    }
    return v;
  }

  void record(const std::string& key, Value v) {
    if (recorded_.insert(key).second) {
      inputs_.emplace_back(key, std::move(v));
    }
  }

  std::map<std::string, std::string> values_;
  std::set<std::string> recorded_;
  std::vector<Field> inputs_;
};

struct CommandSpec {
  std::string group;
  std::string name;
  std::string description;
  std::vector<std::string> options;
  std::vector<std::string> flags;
  bool stochastic = false;
  std::function<Outcome(Params&)> handler;
};

// ---------------------------------------------------------------------------
// shared parameter groups

ThreatModel threat_from(Params& p) {
  const std::int64_t attackers = p.integer_or("N", 1);
  const double g = p.real_or("g", 1.0);
  return ThreatModel(attackers, g);
}

DelayTimescales timescales_from(Params& p) {
  const double tf = p.real("tf");
  const double tb = p.real("tb");
  const double td = p.real("td");
  const double tr = p.real("tr");
  return DelayTimescales(tf, tb, td, tr);
}

DetectionModel detection_from(Params& p) {
  const double rate = p.real("lambda");
  const double stage = p.real("tau-a");
  return DetectionModel(rate, stage);
}

Tolerances tolerances_from(Params& p) {
  Tolerances tol;
  tol.rel_tol = p.real_or("rel-tol", tol.rel_tol);
  tol.budget_match_rel = p.real_or("budget-match", tol.budget_match_rel);
  tol.grid_steps = static_cast<int>(p.integer_or("grid-steps", tol.grid_steps));
  tol.validate();
  return tol;
}

int steps_from(Params& p, std::int64_t fallback, const std::string& key = "steps") {
  const std::int64_t steps = p.integer_or(key, fallback);
  if (steps < 1 || steps > 10'000'000) {
    throw UsageError("--" + key + " must lie in [1, 10000000]");
  }
  return static_cast<int>(steps);
}

SimulationConfig simulation_from(Params& p) {
  SimulationConfig cfg;
  cfg.trials = p.unsigned_or("trials", 100000);
  cfg.seed = p.unsigned_or("seed", 0);
  cfg.workers = static_cast<unsigned>(p.unsigned_or("workers", 1, /*echo=*/false));
  cfg.validate();
  return cfg;
}

Report scalar_report(std::vector<Field> scalars) {
  Report r;
  r.scalars = std::move(scalars);
  return r;
}

Report curve_report(const CurveSeries& series, int steps) {
  Report r;
  r.columns = {series.x_label, series.y_label};
  for (const auto& [x, y] : series.points) {
    r.rows.push_back({x, y});
  }
  r.extras = {{"feasible_low", series.points.front().x},
              {"feasible_high", series.points.back().x},
              {"omitted", static_cast<std::int64_t>(steps) -
                              static_cast<std::int64_t>(series.points.size())}};
  return r;
}

Outcome verdict_outcome(Report report, SpendClass cls, double cost, double budget,
                        bool require_feasible) {
  Outcome out{std::move(report)};
  if (require_feasible && cls == SpendClass::Underspending) {
    out.exit_code = kExitInfeasible;
    std::ostringstream msg;
    msg << "underspending: minimal cost " << format_number(cost, 9) << " exceeds budget "
        << format_number(budget, 9);
    out.diagnostic = msg.str();
  }
  return out;
}

std::optional<double> analytic_or_none(const std::function<double()>& fn) {
  try {
    return fn();
  } catch (const ModelError&) {
    return std::nullopt;
  }
}

bool parse_field(std::string_view text, double& value) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return false;
  }
  text = text.substr(first, text.find_last_not_of(" \t\r") - first + 1);
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc{} && end == text.data() + text.size();
}

PriceTable load_price_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot read price table " + path);
  }
  std::vector<CurvePoint> nodes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const auto comma = line.find(',');
    double x = 0.0;
    double price = 0.0;
    const bool ok = comma != std::string::npos &&
                    parse_field(std::string_view(line).substr(0, comma), x) &&
                    parse_field(std::string_view(line).substr(comma + 1), price);
    if (!ok) {
      if (nodes.empty() && line_no == 1) {
        continue;  // header row
      }
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected x,price");
    }
    nodes.push_back({x, price});
  }
  return PriceTable(std::move(nodes));
}

// ---------------------------------------------------------------------------
// command table

std::vector<CommandSpec> command_table() {
  const std::vector<std::string> threat = {"N", "g"};
  const std::vector<std::string> times = {"tf", "tb", "td", "tr"};
  const std::vector<std::string> tol = {"rel-tol", "budget-match", "grid-steps"};
  auto join = [](std::initializer_list<std::vector<std::string>> parts) {
    std::vector<std::string> out;
    for (const auto& part : parts) {
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  };

  std::vector<CommandSpec> table;

  table.push_back(
      {"blockade", "likelihood", "Breach likelihood for n defenses of failure probability p",
       join({{"p", "n", "f", "sweep", "from", "to", "steps"}, threat}), {}, false,
       [](Params& p) {
         const Probability prob = p.probability("p");
         const double n = p.real("n");
         const double f = p.real_or("f", 1.0);
         const ThreatModel threat = threat_from(p);
         const BlockadePosture posture(n, prob, f);
         if (p.has("sweep")) {
           const std::string axis_name = p.text("sweep");
           SweepAxis axis{};
           if (axis_name == "n") {
             axis = SweepAxis::DefenseCount;
           } else if (axis_name == "p") {
             axis = SweepAxis::FailureProb;
           } else if (axis_name == "N") {
             axis = SweepAxis::AttackerCount;
           } else {
             throw UsageError("--sweep must be one of n, p, N");
           }
           const Range range{p.real("from"), p.real("to")};
           const int steps = steps_from(p, 21);
           return Outcome{curve_report(likelihood_sweep(posture, threat, axis, range, steps), steps)};
         }
         return Outcome{scalar_report({{"L", blockade_likelihood(posture, threat).value()}})};
       }});

  table.push_back({"blockade", "solve-n", "Defense count reaching a target likelihood",
                   join({{"p", "L", "f"}, threat}), {}, false, [](Params& p) {
                     const Probability prob = p.probability("p");
                     const Probability target = p.open_probability("L");
                     const double f = p.real_or("f", 1.0);
                     const ThreatModel threat = threat_from(p);
                     return Outcome{scalar_report(
                         {{"n", solve_defense_count(prob, target, threat, f)}})};
                   }});

  table.push_back({"blockade", "solve-p", "Per-defense failure probability reaching a target",
                   join({{"n", "L", "f"}, threat}), {}, false, [](Params& p) {
                     const double n = p.real("n");
                     const Probability target = p.open_probability("L");
                     const double f = p.real_or("f", 1.0);
                     const ThreatModel threat = threat_from(p);
                     return Outcome{scalar_report(
                         {{"p", solve_failure_prob(n, target, threat, f).value()}})};
                   }});

  table.push_back({"blockade", "indifference", "Indifference curve (p, n) at fixed likelihood",
                   join({{"L", "f", "p-min", "p-max", "steps"}, threat}), {}, false,
                   [](Params& p) {
                     const Probability target = p.open_probability("L");
                     const double f = p.real_or("f", 1.0);
                     const ThreatModel threat = threat_from(p);
                     const Range range{p.real_or("p-min", 0.05), p.real_or("p-max", 0.95)};
                     const int steps = steps_from(p, 21);
                     return Outcome{curve_report(
                         indifference_curve(target, threat, f, range, steps), steps)};
                   }});

  table.push_back({"blockade", "budget-curve", "Postures purchasable with the full budget",
                   {"A", "p-best", "budget", "p-min", "p-max", "steps"}, {}, false,
                   [](Params& p) {
                     const double scale = p.real("A");
                     const Probability best = p.probability_or("p-best", 0.0);
                     const double budget = p.real("budget");
                     const CostModel model(scale, best, budget);
                     const Range range{p.real_or("p-min", best.value()), p.real_or("p-max", 0.99)};
                     const int steps = steps_from(p, 21);
                     return Outcome{curve_report(budget_curve(model, range, steps), steps)};
                   }});

  table.push_back({"blockade", "price", "Price of one defense with failure probability p",
                   {"A", "p-best", "p"}, {}, false, [](Params& p) {
                     const double scale = p.real("A");
                     const Probability best = p.probability_or("p-best", 0.0);
                     const Probability prob = p.probability("p");
                     const CostModel model(scale, best, 1.0);
                     return Outcome{scalar_report({{"price", price_per_defense(model, prob)}})};
                   }});

  table.push_back(
      {"blockade", "optimize", "Cheapest posture reaching the target, classified against budget",
       join({{"L", "f", "A", "p-best", "budget"}, threat, tol}), {"integer", "require-feasible"},
       false, [](Params& p) {
         const Probability target = p.open_probability("L");
         const double f = p.real_or("f", 1.0);
         const ThreatModel threat = threat_from(p);
         const double scale = p.real("A");
         const Probability best = p.probability_or("p-best", 0.0);
         const double budget = p.real("budget");
         const CostModel model(scale, best, budget);
         const Tolerances tol = tolerances_from(p);
         const bool integer_mode = p.flag("integer");
         const bool require = p.flag("require-feasible");
         const PostureVerdict v = optimize_blockade(target, threat, f, model, tol, integer_mode);
         Report r = scalar_report({{"classification", std::string(to_string(v.classification))},
                                   {"p", v.optimal_posture.failure_prob().value()},
                                   {"n", v.optimal_posture.defense_count()},
                                   {"cost", v.minimal_cost},
                                   {"budget", budget},
                                   {"surplus", v.surplus}});
         return verdict_outcome(std::move(r), v.classification, v.minimal_cost, budget, require);
       }});

  table.push_back({"delay", "trajectory", "Mean broken defenses over time (whack-a-mole)",
                   join({times, {"N", "t-max", "steps"}}), {}, false, [](Params& p) {
                     const DelayTimescales ts = timescales_from(p);
                     const std::int64_t attackers = p.integer_or("N", 1);
                     const double t_max = p.real("t-max");
                     const int steps = steps_from(p, 51);
                     Report r;
                     r.columns = {"t", "n_broken"};
                     for (const auto& [t, n] : trajectory(ts, attackers, t_max, steps).points) {
                       r.rows.push_back({t, n});
                     }
                     r.extras = {{"saturation", saturation_level(ts, attackers)}};
                     return Outcome{std::move(r)};
                   }});

  table.push_back({"delay", "broken", "Mean broken defenses at one time",
                   join({times, {"N", "t"}}), {}, false, [](Params& p) {
                     const DelayTimescales ts = timescales_from(p);
                     const std::int64_t attackers = p.integer_or("N", 1);
                     const double t = p.real("t");
                     return Outcome{
                         scalar_report({{"n_broken", broken_defenses_at(t, ts, attackers)}})};
                   }});

  table.push_back({"delay", "min-defenses", "Smallest defense count above saturation",
                   join({times, {"N"}}), {}, false, [](Params& p) {
                     const DelayTimescales ts = timescales_from(p);
                     const std::int64_t attackers = p.integer_or("N", 1);
                     return Outcome{
                         scalar_report({{"n_min", min_defenses_whackamole(ts, attackers)}})};
                   }});

  table.push_back({"delay", "detect", "Detection probability for one stage",
                   {"lambda", "tau-a"}, {}, false, [](Params& p) {
                     const DetectionModel dm = detection_from(p);
                     return Outcome{
                         scalar_report({{"P_disc", detection_probability(dm).value()}})};
                   }});

  table.push_back({"delay", "likelihood", "Stealth-model breach likelihood",
                   join({{"lambda", "tau-a", "n"}, threat}), {}, false, [](Params& p) {
                     const DetectionModel dm = detection_from(p);
                     const double n = p.real("n");
                     const ThreatModel threat = threat_from(p);
                     return Outcome{
                         scalar_report({{"L", stealth_likelihood(dm, n, threat).value()}})};
                   }});

  table.push_back({"delay", "sensitivity", "Risk reduction per added defense (single attacker)",
                   {"lambda", "tau-a", "n"}, {}, false, [](Params& p) {
                     const DetectionModel dm = detection_from(p);
                     const double n = p.real("n");
                     return Outcome{scalar_report({{"sensitivity", stealth_sensitivity(dm, n)}})};
                   }});

  table.push_back({"delay", "solve-n", "Stealth defense count reaching a target likelihood",
                   join({{"L", "lambda", "tau-a"}, threat}), {}, false, [](Params& p) {
                     const Probability target = p.open_probability("L");
                     const DetectionModel dm = detection_from(p);
                     const ThreatModel threat = threat_from(p);
                     return Outcome{scalar_report(
                         {{"n", solve_stealth_defense_count(target, dm, threat)}})};
                   }});

  table.push_back({"delay", "indifference", "Compressed indifference curve (x = lambda*tau_a, n)",
                   join({{"L", "x-min", "x-max", "steps"}, threat}), {}, false, [](Params& p) {
                     const Probability target = p.open_probability("L");
                     const ThreatModel threat = threat_from(p);
                     const Range range{p.real_or("x-min", 0.1), p.real_or("x-max", 5.0)};
                     const int steps = steps_from(p, 21);
                     return Outcome{curve_report(
                         stealth_indifference(target, threat, range, steps), steps)};
                   }});

  table.push_back(
      {"delay", "surface", "Indifference surface over a (lambda, tau_a) grid",
       join({{"L", "lambda-min", "lambda-max", "lambda-steps", "tau-a-min", "tau-a-max",
              "tau-a-steps", "steps"},
             threat}),
       {}, false, [](Params& p) {
         const Probability target = p.open_probability("L");
         const ThreatModel threat = threat_from(p);
         const int steps = steps_from(p, 11);
         const Range rates{p.real("lambda-min"), p.real("lambda-max")};
         const int rate_steps = steps_from(p, steps, "lambda-steps");
         const Range stages{p.real("tau-a-min"), p.real("tau-a-max")};
         const int stage_steps = steps_from(p, steps, "tau-a-steps");
         Report r;
         r.columns = {"lambda", "tau_a", "n"};
         for (const auto& pt :
              stealth_surface(target, threat, rates, rate_steps, stages, stage_steps)) {
           r.rows.push_back({pt.detect_rate, pt.stage_time, pt.defense_count});
         }
         return Outcome{std::move(r)};
       }});

  table.push_back(
      {"delay", "optimize", "Cheapest stealth posture, classified against budget",
       join({{"L", "A", "x-best", "budget", "price-table"}, threat, tol}),
       {"integer", "require-feasible"}, false, [](Params& p) {
         const Probability target = p.open_probability("L");
         const ThreatModel threat = threat_from(p);
         const double scale = p.real_or("A", 1.0);
         const double best = p.real("x-best");
         const double budget = p.real("budget");
         const DelayCostModel model(scale, best, budget);
         const Tolerances tol = tolerances_from(p);
         const bool integer_mode = p.flag("integer");
         const bool require = p.flag("require-feasible");
         std::optional<PriceTable> prices;
         if (p.has("price-table")) {
           prices = load_price_table(p.text("price-table"));
         }
         const DelayVerdict v = optimize_delay(target, threat, model, tol, integer_mode, prices);
         Report r = scalar_report({{"classification", std::string(to_string(v.classification))},
                                   {"x", v.optimal_posture.capability},
                                   {"n", v.optimal_posture.defense_count},
                                   {"cost", v.minimal_cost},
                                   {"budget", budget},
                                   {"surplus", v.surplus}});
         return verdict_outcome(std::move(r), v.classification, v.minimal_cost, budget, require);
       }});

  table.push_back({"simulate", "blockade", "Chain-sampler estimate of blockade likelihood",
                   join({{"p", "n", "f"}, threat}), {}, true, [](Params& p) {
                     const Probability prob = p.probability("p");
                     const std::int64_t n = p.integer("n");
                     const double f = p.real_or("f", 1.0);
                     const ThreatModel threat = threat_from(p);
                     const SimulationConfig cfg = simulation_from(p);
                     const BlockadePosture posture(static_cast<double>(n), prob, f);
                     const EstimateWithError est = simulate_blockade(posture, threat, cfg);
                     std::vector<Field> fields = {{"L", est.mean},
                                                  {"std_error", est.std_error},
                                                  {"trials", static_cast<std::int64_t>(est.trials)}};
                     if (const auto exact = analytic_or_none(
                             [&] { return blockade_likelihood(posture, threat).value(); })) {
                       fields.emplace_back("L_analytic", *exact);
                     }
                     return Outcome{scalar_report(std::move(fields))};
                   }});

  table.push_back(
      {"simulate", "whack", "Whack-a-mole break/repair process",
       join({times, {"N", "n-installed", "horizon", "t-max", "steps"}}), {"breach-only"}, true,
       [](Params& p) {
         const DelayTimescales ts = timescales_from(p);
         const std::int64_t attackers = p.integer_or("N", 1);
         const std::int64_t installed =
             p.integer_or("n-installed", min_defenses_whackamole(ts, attackers));
         double horizon = p.real_or("t-max", 5.0 * ts.repair_cycle());
         if (p.has("horizon")) {
           const double h = p.real("horizon");
           if (p.has("t-max") && h != horizon) {
             throw UsageError("--horizon and --t-max disagree");
           }
           horizon = h;
         }
         const int steps = steps_from(p, 11);
         const bool breach_only = p.flag("breach-only");
         const SimulationConfig cfg = simulation_from(p);
         const auto times = linspace({0.0, horizon}, steps);
         const WhackamoleResult res =
             simulate_whackamole(ts, installed, attackers, horizon, times, cfg);
         Report r;
         if (breach_only) {
           r.scalars = {{"breach_prob", res.breach_prob.mean},
                        {"std_error", res.breach_prob.std_error},
                        {"trials", static_cast<std::int64_t>(res.breach_prob.trials)}};
         } else {
           r.columns = {"t", "n_broken", "std_error", "n_broken_analytic"};
           for (const auto& s : res.mean_trajectory) {
             r.rows.push_back(
                 {s.t, s.n_broken.mean, s.n_broken.std_error, broken_defenses_at(s.t, ts, attackers)});
           }
           r.extras = {{"breach_prob", res.breach_prob.mean},
                       {"breach_std_error", res.breach_prob.std_error}};
         }
         r.extras.emplace_back("breach_prob_provenance", std::string("simulation-only"));
         return Outcome{std::move(r)};
       }});

  table.push_back({"simulate", "stealth", "Staged stealth-attack estimate of likelihood",
                   join({{"lambda", "tau-a", "n"}, threat}), {}, true, [](Params& p) {
                     const DetectionModel dm = detection_from(p);
                     const std::int64_t n = p.integer("n");
                     const ThreatModel threat = threat_from(p);
                     const SimulationConfig cfg = simulation_from(p);
                     const EstimateWithError est = simulate_stealth(dm, n, threat, cfg);
                     std::vector<Field> fields = {{"L", est.mean},
                                                  {"std_error", est.std_error},
                                                  {"trials", static_cast<std::int64_t>(est.trials)}};
                     if (const auto exact = analytic_or_none([&] {
                           return stealth_likelihood(dm, static_cast<double>(n), threat).value();
                         })) {
                       fields.emplace_back("L_analytic", *exact);
                     }
                     return Outcome{scalar_report(std::move(fields))};
                   }});

  table.push_back({"", "risk", "Risk = impact x likelihood", {"I", "L"}, {}, false, [](Params& p) {
                     const double impact = p.real("I");
                     const Probability likelihood = p.probability("L");
                     return Outcome{scalar_report({{"risk", risk(RiskInput(impact, likelihood))}})};
                   }});

  return table;
}

const std::vector<std::string> kOutputOptions = {"format", "out", "precision", "config"};
const std::vector<std::string> kSimulationOptions = {"trials", "seed", "workers"};

OutputEnvelope envelope_from(const Params& p) {
  OutputEnvelope env;
  const std::string format = p.raw_or("format", "csv");
  if (format == "csv") {
    env.format = OutputFormat::Csv;
  } else if (format == "json") {
    env.format = OutputFormat::Json;
  } else {
    throw UsageError("--format must be csv or json");
  }
  const std::string precision = p.raw_or("precision", "9");
  int digits = 0;
  const auto [ptr, ec] = std::from_chars(precision.data(), precision.data() + precision.size(), digits);
  if (ec != std::errc{} || ptr != precision.data() + precision.size() || digits < 1 || digits > 17) {
    throw UsageError("--precision must be an integer in [1,17]");
  }
  env.precision = digits;
  env.destination = p.raw_or("out", "");
  return env;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::vector<CommandSpec> table = command_table();

  CLI::App app{"Defense-in-depth posture planner", "depth-planner"};
  app.set_version_flag("--version", DEPTH_PLANNER_VERSION);
  app.require_subcommand(1);

  struct Bound {
    CLI::App* app = nullptr;
    std::map<std::string, std::string> storage;
    std::vector<std::string> keys;
  };
  std::vector<std::unique_ptr<Bound>> bound;
  std::set<std::string, std::less<>> known_keys;
  std::map<std::string, CLI::App*> groups;

  for (const CommandSpec& spec : table) {
    CLI::App* parent = &app;
    if (!spec.group.empty()) {
      auto [it, inserted] = groups.try_emplace(spec.group, nullptr);
      if (inserted) {
        it->second = app.add_subcommand(spec.group, spec.group + " commands");
        it->second->require_subcommand(1);
      }
      parent = it->second;
    }
    auto b = std::make_unique<Bound>();
    b->app = parent->add_subcommand(spec.name, spec.description);
    std::vector<std::string> keys = spec.options;
    keys.insert(keys.end(), kOutputOptions.begin(), kOutputOptions.end());
    if (spec.stochastic) {
      keys.insert(keys.end(), kSimulationOptions.begin(), kSimulationOptions.end());
    }
    for (const std::string& key : keys) {
      b->app->add_option("--" + key, b->storage[key]);
      b->keys.push_back(key);
      known_keys.insert(key);
    }
    for (const std::string& key : spec.flags) {
      b->app->add_flag("--" + key);
      b->keys.push_back(key);
      known_keys.insert(key);
    }
    bound.push_back(std::move(b));
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  std::size_t chosen = table.size();
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (bound[i]->app->parsed()) {
      chosen = i;
    }
  }
  if (chosen == table.size()) {
    err << "error: no command given\n";
    return kExitInvalid;
  }
  const CommandSpec& spec = table[chosen];
  Bound& b = *bound[chosen];

  try {
    std::map<std::string, std::string> values;
    for (const std::string& key : b.keys) {
      if (b.app->get_option("--" + key)->count() > 0) {
        values[key] = b.storage.contains(key) ? b.storage[key] : "true";
      }
    }

    std::string config_path;
    if (values.contains("config")) {
      config_path = values["config"];
    } else if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') {
      config_path = env;
    }
    if (!config_path.empty()) {
      for (const auto& [key, value] : load_config(config_path)) {
        if (!known_keys.contains(key)) {
          throw UsageError("unknown key '" + key + "' in config " + config_path);
        }
        if (key != "config" &&
            std::find(b.keys.begin(), b.keys.end(), key) != b.keys.end()) {
          values.try_emplace(key, value);
        }
      }
    }

    Params params(std::move(values));
    const OutputEnvelope env = envelope_from(params);
    Outcome outcome = spec.handler(params);

    Report& report = outcome.report;
    report.command = spec.group.empty() ? spec.name : spec.group + " " + spec.name;
    report.inputs = params.take_inputs();
    report.provenance = {{"tool", std::string("depth-planner")},
                         {"version", std::string(DEPTH_PLANNER_VERSION)}};
    if (spec.stochastic) {
      report.provenance.emplace_back("seed", std::to_string(params.unsigned_or("seed", 0, false)));
    }
    emit(report, env, out);
    if (outcome.exit_code != kExitOk) {
      err << "error: " << outcome.diagnostic << "\n";
    }
    return outcome.exit_code;
  } catch (const InfeasibleTarget& e) {
    err << "error: infeasible target: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace depth::cli
