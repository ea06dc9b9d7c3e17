#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "depth_planner/blockade.hpp"
#include "depth_planner/delay.hpp"
#include "depth_planner/model_core.hpp"

namespace depth {

struct SimulationConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  unsigned workers = 1;  // does not affect results

  void validate() const;
};

struct EstimateWithError {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

/// Random stream for one trial. The state is a pure function of
/// (seed, trial index), so a trial draws the same numbers on any worker.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial) noexcept;

  std::uint64_t next() noexcept;
  /// Uniform on [0,1).
  double uniform() noexcept;
  bool bernoulli(double prob) noexcept { return uniform() < prob; }
  /// Exponential with the given rate; +inf when rate is 0.
  double exponential(double rate) noexcept;

 private:
  std::uint64_t state_;
};

/// Conditional failure probabilities of the defense chain: the first defense
/// fails with p, each later one with f p given all earlier ones failed.
/// Throws ChainInfeasible if f p > 1.
std::vector<double> chain_conditionals(Probability p, double f, std::int64_t n);

/// Breach frequency of the correlated-Bernoulli chain sampler. n must be
/// integral. Attackers after the first fail with conditional g q given all
/// earlier attackers failed, q = 1 - f^(n-1) p^n.
EstimateWithError simulate_blockade(const BlockadePosture& posture, const ThreatModel& threat,
                                    const SimulationConfig& cfg);

struct SampledEstimate {
  double t;
  EstimateWithError n_broken;
};

struct WhackamoleResult {
  std::vector<SampledEstimate> mean_trajectory;
  EstimateWithError breach_prob;  // simulation-only, no closed form
};

/// Continuous-time break/repair process: defenses break at rate N/(τ_F+τ_B)
/// while any remain intact, and each broken defense is restored at rate
/// 1/(τ_D+τ_R). A run breaches once every installed defense is broken.
WhackamoleResult simulate_whackamole(const DelayTimescales& ts, std::int64_t n_installed,
                                     std::int64_t attackers, double horizon,
                                     std::span<const double> sample_times,
                                     const SimulationConfig& cfg);

/// Staged stealth attack: n stages of fixed length τ_a, each watched by a
/// Poisson detector of rate λ. Attackers after the first fail with
/// conditional g (1 - L_1) given all earlier attackers failed.
EstimateWithError simulate_stealth(const DetectionModel& dm, std::int64_t n,
                                   const ThreatModel& threat, const SimulationConfig& cfg);

}  // namespace depth
