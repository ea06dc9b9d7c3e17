#include "depth_planner/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace depth {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Integer tallies for one block of trials. Summation of integers is exact, so
// the reduction is independent of how trials are split across workers.
struct Tally {
  std::uint64_t hits = 0;
  std::vector<std::uint64_t> sums;
  std::vector<std::uint64_t> squares;
};

template <class TrialFn>
Tally run_trials(const SimulationConfig& cfg, std::size_t channels, TrialFn&& trial) {
  const unsigned workers =
      static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(cfg.workers, cfg.trials)));
  std::vector<Tally> partial(workers);
  auto block = [&](unsigned w) {
    Tally& tally = partial[w];
    tally.sums.assign(channels, 0);
    tally.squares.assign(channels, 0);
    const std::uint64_t begin = cfg.trials * w / workers;
    const std::uint64_t end = cfg.trials * (w + 1) / workers;
    for (std::uint64_t i = begin; i < end; ++i) {
      TrialRng rng(cfg.seed, i);
      trial(rng, tally);
    }
  };
  if (workers == 1) {
    block(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(block, w);
    }
  }
  Tally total;
  total.sums.assign(channels, 0);
  total.squares.assign(channels, 0);
  for (const Tally& t : partial) {
    total.hits += t.hits;
    for (std::size_t c = 0; c < channels; ++c) {
      total.sums[c] += t.sums[c];
      total.squares[c] += t.squares[c];
    }
  }
  return total;
}

EstimateWithError bernoulli_estimate(std::uint64_t hits, std::uint64_t trials) {
  const double mean = static_cast<double>(hits) / static_cast<double>(trials);
  const double se =
      trials > 1 ? std::sqrt(mean * (1.0 - mean) / static_cast<double>(trials - 1)) : 0.0;
  return {mean, se, trials};
}

EstimateWithError sample_estimate(std::uint64_t sum, std::uint64_t square, std::uint64_t trials) {
  const auto t = static_cast<long double>(trials);
  const long double mean = static_cast<long double>(sum) / t;
  long double var = 0.0L;
  if (trials > 1) {
    var = (static_cast<long double>(square) - t * mean * mean) / (t - 1.0L);
    var = std::max(var, 0.0L);
  }
  return {static_cast<double>(mean), static_cast<double>(std::sqrt(var / t)), trials};
}

std::int64_t require_integral(double n) {
  if (n != std::floor(n)) {
    throw InvalidArgument("n must be an integer for simulation");
  }
  return static_cast<std::int64_t>(n);
}

// Conditional failure of attacker k >= 2 given all earlier attackers failed.
double later_attacker_fail(double single_fail, double g) {
  const double conditional = g * single_fail;
  if (conditional > 1.0) {
    throw ChainInfeasible("g*(1 - single-attacker success) must not exceed 1");
  }
  return conditional;
}

}  // namespace

void SimulationConfig::validate() const {
  if (trials < 1) {
    throw InvalidArgument("trials must be at least 1");
  }
  if (workers < 1) {
    throw InvalidArgument("workers must be at least 1");
  }
}

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial) noexcept
    : state_(mix64(seed ^ mix64(trial + kGolden))) {}

std::uint64_t TrialRng::next() noexcept {
  state_ += kGolden;
  return mix64(state_);
}

double TrialRng::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double TrialRng::exponential(double rate) noexcept {
  if (rate <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return -std::log1p(-uniform()) / rate;
}

std::vector<double> chain_conditionals(Probability p, double f, std::int64_t n) {
  require_finite(f, "f");
  if (f < 0.0) {
    throw InvalidArgument("f must be nonnegative");
  }
  if (n < 0) {
    throw InvalidArgument("n must be nonnegative");
  }
  if (n > 1 && f * p.value() > 1.0) {
    throw ChainInfeasible("f*p must not exceed 1");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    out.push_back(i == 0 ? p.value() : f * p.value());
  }
  return out;
}

EstimateWithError simulate_blockade(const BlockadePosture& posture, const ThreatModel& threat,
                                    const SimulationConfig& cfg) {
  cfg.validate();
  const std::int64_t n = require_integral(posture.defense_count());
  const auto chain = chain_conditionals(posture.failure_prob(), posture.defense_dependence(), n);
  const double g = threat.attacker_dependence();
  const bool independent = g == 1.0;
  const double later_fail =
      independent ? 0.0 : later_attacker_fail(1.0 - posture.joint_failure(), g);
  const std::int64_t attackers = threat.attacker_count();

  auto defeats_all = [&chain](TrialRng& rng) {
    for (double conditional : chain) {
      if (!rng.bernoulli(conditional)) {
        return false;
      }
    }
    return true;
  };

  const Tally tally = run_trials(cfg, 0, [&](TrialRng& rng, Tally& t) {
    for (std::int64_t k = 0; k < attackers; ++k) {
      const bool success =
          (k == 0 || independent) ? defeats_all(rng) : !rng.bernoulli(later_fail);
      if (success) {
        ++t.hits;
        return;
      }
    }
  });
  return bernoulli_estimate(tally.hits, cfg.trials);
}

WhackamoleResult simulate_whackamole(const DelayTimescales& ts, std::int64_t n_installed,
                                     std::int64_t attackers, double horizon,
                                     std::span<const double> sample_times,
                                     const SimulationConfig& cfg) {
  cfg.validate();
  if (n_installed < 1) {
    throw InvalidArgument("n-installed must be at least 1");
  }
  if (attackers < 1) {
    throw InvalidArgument("N must be at least 1");
  }
  require_finite(horizon, "horizon");
  if (horizon <= 0.0) {
    throw InvalidArgument("horizon must be positive");
  }
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (!(sample_times[i] >= 0.0 && sample_times[i] <= horizon)) {
      throw InvalidArgument("sample times must lie in [0, horizon]");
    }
    if (i > 0 && sample_times[i] < sample_times[i - 1]) {
      throw InvalidArgument("sample times must be nondecreasing");
    }
  }

  const double break_rate = static_cast<double>(attackers) / ts.attack_cycle();
  const double repair_rate = 1.0 / ts.repair_cycle();
  const std::size_t samples = sample_times.size();

  const Tally tally = run_trials(cfg, samples, [&](TrialRng& rng, Tally& t) {
    std::int64_t broken = 0;
    double now = 0.0;
    std::size_t next_sample = 0;
    bool breached = false;
    auto record_until = [&](double until) {
      while (next_sample < samples && sample_times[next_sample] < until) {
        const auto b = static_cast<std::uint64_t>(broken);
        t.sums[next_sample] += b;
        t.squares[next_sample] += b * b;
        ++next_sample;
      }
    };
    while (true) {
      const double up = broken < n_installed ? break_rate : 0.0;
      const double down = repair_rate * static_cast<double>(broken);
      const double total = up + down;
      const double next_event = now + rng.exponential(total);
      if (next_event > horizon) {
        record_until(std::numeric_limits<double>::infinity());
        break;
      }
      record_until(next_event);
      now = next_event;
      if (rng.uniform() * total < up) {
        if (++broken == n_installed) {
          breached = true;
        }
      } else {
        --broken;
      }
    }
    if (breached) {
      ++t.hits;
    }
  });

  WhackamoleResult result;
  result.mean_trajectory.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    result.mean_trajectory.push_back(
        {sample_times[i], sample_estimate(tally.sums[i], tally.squares[i], cfg.trials)});
  }
  result.breach_prob = bernoulli_estimate(tally.hits, cfg.trials);
  return result;
}

EstimateWithError simulate_stealth(const DetectionModel& dm, std::int64_t n,
                                   const ThreatModel& threat, const SimulationConfig& cfg) {
  cfg.validate();
  if (n < 0) {
    throw InvalidArgument("n must be nonnegative");
  }
  const double g = threat.attacker_dependence();
  const bool independent = g == 1.0;
  const double single_success = std::exp(-dm.capability() * static_cast<double>(n));
  const double later_fail = independent ? 0.0 : later_attacker_fail(1.0 - single_success, g);
  const double rate = dm.detect_rate();
  const double stage = dm.stage_time();
  const std::int64_t attackers = threat.attacker_count();

  // Tracks are covered, so each stage is an independent observation window.
  auto evades_all = [&](TrialRng& rng) {
    for (std::int64_t s = 0; s < n; ++s) {
      if (rng.exponential(rate) < stage) {
        return false;
      }
    }
    return true;
  };

  const Tally tally = run_trials(cfg, 0, [&](TrialRng& rng, Tally& t) {
    for (std::int64_t k = 0; k < attackers; ++k) {
      const bool success = (k == 0 || independent) ? evades_all(rng) : !rng.bernoulli(later_fail);
      if (success) {
        ++t.hits;
        return;
      }
    }
  });
  return bernoulli_estimate(tally.hits, cfg.trials);
}

}  // namespace depth
