#include <doctest.h>

#include <cmath>
#include <random>

#include "depth_planner/blockade.hpp"

using namespace depth;

namespace {

// Expected values below were evaluated with 30-digit arithmetic (mpmath).
constexpr double kL_p05_n3_N10 = 0.736924423836171627;
constexpr double kN_L001_N1 = 6.64385618977472469;
constexpr double kN_L001_N10 = 9.95926548947291294;
constexpr double kN_L001_N100 = 13.2805411638357820;
constexpr double kN_L001_f12 = 8.65823565503097110;

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("blockade_likelihood examples") {
  CHECK(blockade_likelihood(BlockadePosture(3, Probability(0.5)), ThreatModel(10)).value() ==
        doctest::Approx(kL_p05_n3_N10).epsilon(1e-13));
  CHECK(blockade_likelihood(BlockadePosture(0, Probability(0.37)), ThreatModel(5)).value() == 1.0);
  // chain identity 0.5 * 0.75 * 0.75
  CHECK(blockade_likelihood(BlockadePosture(3, Probability(0.5), 1.5), ThreatModel(1)).value() ==
        doctest::Approx(0.28125).epsilon(1e-14));
}

TEST_CASE("blockade posture feasibility") {
  CHECK_THROWS_AS(BlockadePosture(3, Probability(0.8), 1.5), DependenceOutOfRange);
  CHECK_THROWS_AS(BlockadePosture(-1, Probability(0.5)), InvalidArgument);
  CHECK_THROWS_AS(BlockadePosture(2, Probability(0.5), -1.0), InvalidArgument);
  // f < 1 at n < 1 pushes f^(n-1) p^n above one
  CHECK_THROWS_AS((void)BlockadePosture(0.0, Probability(0.5), 0.5).joint_failure(),
                  DependenceOutOfRange);
  // attacker dependence can make the joint "all fail" exceed one
  CHECK_THROWS_AS(blockade_likelihood(BlockadePosture(3, Probability(0.5)), ThreatModel(2, 1.5)),
                  DependenceOutOfRange);
}

TEST_CASE("f = g = 1 reduces to the independent formula") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> count(0.5, 20.0);
  for (int i = 0; i < 500; ++i) {
    const double p = unit(gen);
    const double n = count(gen);
    const std::int64_t N = 1 + static_cast<std::int64_t>(unit(gen) * 50);
    const double plain = 1.0 - std::pow(1.0 - std::pow(p, n), static_cast<double>(N));
    const double L = blockade_likelihood(BlockadePosture(n, Probability(p)), ThreatModel(N));
    CHECK(std::abs(L - plain) <= 1e-9 * plain + 1e-13);  // the naive form cancels for tiny p^n
  }
}

TEST_CASE("blockade_likelihood monotonicity") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int i = 0; i < 200; ++i) {
    const double p = unit(gen);
    const double f = 1.0 + 0.5 * unit(gen) * (1.0 / p - 1.0) * 0.9;  // keeps f p < 1
    const ThreatModel threat(3);
    double prev = 2.0;
    for (double n = 1; n <= 12; n += 0.5) {
      const double L = blockade_likelihood(BlockadePosture(n, Probability(p), f), threat);
      CHECK(L <= prev);
      prev = L;
    }
    prev = -1.0;
    for (double q = 0.0; q <= 0.95; q += 0.05) {
      const double L = blockade_likelihood(BlockadePosture(4, Probability(q)), threat);
      CHECK(L >= prev);
      prev = L;
    }
    prev = -1.0;
    for (std::int64_t N = 1; N <= 30; ++N) {
      const double L = blockade_likelihood(BlockadePosture(4, Probability(p)), ThreatModel(N));
      CHECK(L >= prev);
      prev = L;
    }
  }
}

TEST_CASE("solve_defense_count examples") {
  const Probability half(0.5);
  const Probability L(0.01);
  CHECK(solve_defense_count(half, L, ThreatModel(1)) == doctest::Approx(kN_L001_N1).epsilon(1e-12));
  CHECK(solve_defense_count(half, L, ThreatModel(100)) ==
        doctest::Approx(kN_L001_N100).epsilon(1e-12));
  const double n_dep = solve_defense_count(half, L, ThreatModel(1), 1.2);
  CHECK(n_dep == doctest::Approx(kN_L001_f12).epsilon(1e-12));
  CHECK(blockade_likelihood(BlockadePosture(n_dep, half, 1.2), ThreatModel(1)).value() ==
        doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("solve_defense_count error paths") {
  const Probability L(0.01);
  CHECK_THROWS_AS(solve_defense_count(Probability(0.0), L, ThreatModel()), InfeasibleTarget);
  CHECK_THROWS_AS(solve_defense_count(Probability(1.0), L, ThreatModel()), InfeasibleTarget);
  // f p >= 1
  CHECK_THROWS_AS(solve_defense_count(Probability(0.7), L, ThreatModel(), 1.5), InfeasibleTarget);
  // (1-L)/g^(N-1) > 1
  CHECK_THROWS_AS(solve_defense_count(Probability(0.5), Probability(0.1), ThreatModel(3, 0.5)),
                  InfeasibleTarget);
  // f y >= 1 gives a nonpositive count
  CHECK_THROWS_AS(solve_defense_count(Probability(0.1), Probability(0.5), ThreatModel(), 5.0),
                  InfeasibleTarget);
}

TEST_CASE("solve_failure_prob examples") {
  CHECK(solve_failure_prob(kN_L001_N1, Probability(0.01), ThreatModel()).value() ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(solve_failure_prob(1.0, Probability(0.25), ThreatModel()).value() ==
        doctest::Approx(0.25).epsilon(1e-14));
  CHECK(solve_failure_prob(2.0, Probability(0.19), ThreatModel()).value() ==
        doctest::Approx(0.435889894354067355).epsilon(1e-13));
  CHECK_THROWS_AS(solve_failure_prob(0.0, Probability(0.19), ThreatModel()), InfeasibleTarget);
  CHECK_THROWS_AS(solve_failure_prob(2.0, Probability(1.0), ThreatModel()), InfeasibleTarget);
}

TEST_CASE("round trips through the forward equation") {
  for (double p : {0.05, 0.2, 0.4, 0.6, 0.9}) {
    for (double L : {1e-4, 0.01, 0.3, 0.9}) {
      for (std::int64_t N : {1, 7, 100}) {
        for (double f : {0.8, 1.0, 1.05}) {
          for (double g : {1.0, 1.02}) {
            const ThreatModel threat(N, g);
            double n = 0.0;
            try {
              n = solve_defense_count(Probability(p), Probability(L), threat, f);
            } catch (const InfeasibleTarget&) {
              continue;
            }
            const double back =
                blockade_likelihood(BlockadePosture(n, Probability(p), f), threat).value();
            CHECK(rel_err(back, L) <= 1e-9);
            const double p_back = solve_failure_prob(n, Probability(L), threat, f).value();
            CHECK(rel_err(p_back, p) <= 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("indifference_curve examples") {
  const auto curve = indifference_curve(Probability(0.01), ThreatModel(), 1.0, {0.3, 0.7}, 3);
  REQUIRE(curve.points.size() == 3);
  CHECK(curve.points[0].y == doctest::Approx(3.82497857878639689).epsilon(1e-12));
  CHECK(curve.points[1].y == doctest::Approx(6.64385618977472470).epsilon(1e-12));
  CHECK(curve.points[2].y == doctest::Approx(12.9113924716257660).epsilon(1e-12));
  CHECK_NOTHROW(curve.validate());

  const auto one = indifference_curve(Probability(0.5), ThreatModel(), 1.0, {0.5, 0.5}, 1);
  REQUIRE(one.points.size() == 1);
  CHECK(one.points[0].y == doctest::Approx(1.0).epsilon(1e-14));

  // every point evaluates back to the target
  const auto dense = indifference_curve(Probability(0.05), ThreatModel(4, 1.1), 1.2, {0.05, 0.8}, 50);
  for (const auto& [p, n] : dense.points) {
    CHECK(rel_err(blockade_likelihood(BlockadePosture(n, Probability(p), 1.2), ThreatModel(4, 1.1)),
                  0.05) <= 1e-9);
  }
}

TEST_CASE("indifference_curve drops infeasible points and errors when empty") {
  // f = 1.5 is infeasible once p >= 2/3
  const auto curve = indifference_curve(Probability(0.01), ThreatModel(), 1.5, {0.3, 0.9}, 7);
  CHECK(curve.points.size() == 4);  // 0.3, 0.4, 0.5, 0.6
  CHECK(curve.points.back().x == doctest::Approx(0.6));
  CHECK(curve.requested.high == 0.9);
  CHECK_THROWS_AS(indifference_curve(Probability(0.01), ThreatModel(), 1.5, {0.7, 0.9}, 5),
                  EmptySeries);
  CHECK_THROWS_AS(indifference_curve(Probability(0.01), ThreatModel(), 1.0, {0.0, 0.9}, 5),
                  InvalidRange);
}

TEST_CASE("defense dependence shifts the indifference curve up") {
  const Probability L(0.01);
  const ThreatModel one(1);
  for (double p : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}) {
    CHECK(solve_defense_count(Probability(p), L, one, 1.5) >
          solve_defense_count(Probability(p), L, one, 1.0));
  }
  // Inflation is larger for weaker defenses (larger p), where more defenses
  // multiply the dependence factor.
  auto inflation = [&](double p) {
    return solve_defense_count(Probability(p), L, one, 1.5) -
           solve_defense_count(Probability(p), L, one, 1.0);
  };
  CHECK(inflation(0.3) == doctest::Approx(1.43446362543071787).epsilon(1e-10));
  CHECK(inflation(0.5) == doctest::Approx(7.95456852987425339).epsilon(1e-10));
  CHECK(inflation(0.5) > inflation(0.3));
}

TEST_CASE("attacker dependence lowers the required count") {
  const Probability L(0.5);
  for (double p : {0.2, 0.5, 0.8}) {
    for (std::int64_t N : {2, 10}) {
      CHECK(solve_defense_count(Probability(p), L, ThreatModel(N, 1.05)) <
            solve_defense_count(Probability(p), L, ThreatModel(N, 1.0)));
    }
  }
  CHECK(solve_defense_count(Probability(0.5), L, ThreatModel(10, 1.05)) ==
        doctest::Approx(3.22362915799923792).epsilon(1e-12));
  CHECK(solve_defense_count(Probability(0.5), L, ThreatModel(10, 1.0)) ==
        doctest::Approx(3.90040566806950085).epsilon(1e-12));
}

TEST_CASE("required n grows sub-linearly with attackers") {
  const Probability p(0.5);
  const Probability L(0.01);
  const double n1 = solve_defense_count(p, L, ThreatModel(1));
  const double n10 = solve_defense_count(p, L, ThreatModel(10));
  const double n100 = solve_defense_count(p, L, ThreatModel(100));
  CHECK(n10 == doctest::Approx(kN_L001_N10).epsilon(1e-12));
  CHECK(n100 < 100.0 * n1);
  // Each added attacker costs fewer extra defenses than the one before.
  double prev_step = solve_defense_count(p, L, ThreatModel(2)) - n1;
  for (std::int64_t N = 2; N < 200; ++N) {
    const double step = solve_defense_count(p, L, ThreatModel(N + 1)) -
                        solve_defense_count(p, L, ThreatModel(N));
    CHECK(step < prev_step);
    prev_step = step;
  }
  // Per decade the growth is close to logarithmic: 3.31541 then 3.32128.
  CHECK(n10 - n1 == doctest::Approx(3.31540929969818825).epsilon(1e-10));
  CHECK(n100 - n10 == doctest::Approx(3.32127567436286904).epsilon(1e-10));
}

TEST_CASE("price and budget curve") {
  const CostModel model(1.0, Probability(0.01), 100.0);
  CHECK(price_per_defense(model, Probability(0.11)) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(price_per_defense(CostModel(2.0, Probability(0.01), 1.0), Probability(0.11)) ==
        doctest::Approx(20.0).epsilon(1e-12));
  CHECK_THROWS_AS(price_per_defense(model, Probability(0.01)), InvalidRange);
  CHECK_THROWS_AS(price_per_defense(model, Probability(0.005)), InvalidRange);
  CHECK(price_per_defense(model, Probability(0.2)) > price_per_defense(model, Probability(0.3)));

  const auto curve = budget_curve(model, {0.01, 0.11}, 2);
  CHECK(curve.points[0].y == 0.0);
  CHECK(curve.points[1].y == doctest::Approx(10.0).epsilon(1e-12));
  const auto doubled = budget_curve(CostModel(1.0, Probability(0.01), 200.0), {0.01, 0.11}, 2);
  CHECK(doubled.points[1].y == doctest::Approx(2.0 * curve.points[1].y).epsilon(1e-14));
  CHECK_THROWS_AS(budget_curve(model, {0.0, 0.5}, 3), InvalidRange);

  // three sampled points are collinear
  const auto line = budget_curve(CostModel(3.0, Probability(0.05), 70.0), {0.1, 0.9}, 3);
  const auto& a = line.points[0];
  const auto& b = line.points[1];
  const auto& c = line.points[2];
  const double cross = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  CHECK(std::abs(cross) <= 1e-9 * std::abs((c.x - a.x) * (c.y - a.y)));
}

TEST_CASE("optimizer analytic case: p_best = 0 gives p* = 1/e") {
  const Probability L(0.01);
  const ThreatModel threat(1);
  const Tolerances tol;
  const double c_star = 12.5181504335327904;  // e ln(100)

  const auto v = optimize_blockade(L, threat, 1.0, CostModel(1.0, Probability(0.0), 12.518), tol, false);
  CHECK(v.classification == SpendClass::Optimal);
  CHECK(std::abs(v.optimal_posture.failure_prob().value() - std::exp(-1.0)) < 1e-6);
  CHECK(v.optimal_posture.defense_count() == doctest::Approx(4.60517018598809137).epsilon(1e-8));
  CHECK(std::abs(v.minimal_cost - c_star) < 1e-9);

  const auto under = optimize_blockade(L, threat, 1.0, CostModel(1.0, Probability(0.0), 10.0), tol, false);
  CHECK(under.classification == SpendClass::Underspending);
  CHECK(under.surplus == doctest::Approx(10.0 - c_star).epsilon(1e-8));

  const auto over = optimize_blockade(L, threat, 1.0, CostModel(1.0, Probability(0.0), 20.0), tol, false);
  CHECK(over.classification == SpendClass::Overspending);

  const auto integral = optimize_blockade(L, threat, 1.0, CostModel(1.0, Probability(0.0), 12.518), tol, true);
  CHECK(integral.optimal_posture.defense_count() == 5.0);
  CHECK(integral.optimal_posture.failure_prob().value() ==
        doctest::Approx(0.398107170553497251).epsilon(1e-12));
  CHECK(integral.minimal_cost == doctest::Approx(12.5594321575479006).epsilon(1e-12));
}

TEST_CASE("optimizer dominates a 1000-point grid scan") {
  struct Case {
    double L;
    std::int64_t N;
    double g;
    double f;
    double p_best;
  };
  for (const Case c : {Case{0.01, 1, 1.0, 1.0, 0.0}, Case{0.05, 10, 1.0, 1.2, 0.02},
                       Case{0.2, 3, 1.05, 0.9, 0.1}, Case{0.001, 50, 1.0, 1.0, 0.3}}) {
    const Probability L(c.L);
    const ThreatModel threat(c.N, c.g);
    const CostModel model(2.5, Probability(c.p_best), 100.0);
    const auto v = optimize_blockade(L, threat, c.f, model, Tolerances{}, false);
    for (int i = 1; i <= 1000; ++i) {
      const double p = c.p_best + (1.0 - c.p_best) * i / 1001.0;
      try {
        const double cost = solve_defense_count(Probability(p), L, threat, c.f) *
                            price_per_defense(model, Probability(p));
        CHECK(v.minimal_cost <= cost * (1.0 + 1e-12));
      } catch (const ModelError&) {
      }
    }
  }
}

TEST_CASE("likelihood sweeps") {
  const BlockadePosture base(3, Probability(0.5));
  const auto by_n = likelihood_sweep(base, ThreatModel(10), SweepAxis::DefenseCount, {1, 10}, 10);
  CHECK(by_n.x_label == "n");
  CHECK(by_n.points.size() == 10);
  CHECK(by_n.points[2].y == doctest::Approx(kL_p05_n3_N10).epsilon(1e-13));
  const auto by_N = likelihood_sweep(base, ThreatModel(1), SweepAxis::AttackerCount, {1, 3}, 9);
  CHECK(by_N.points.size() == 3);
  CHECK_NOTHROW(by_N.validate());
  const auto by_p = likelihood_sweep(base, ThreatModel(1), SweepAxis::FailureProb, {0, 1}, 11);
  CHECK(by_p.points.front().y == 0.0);
  CHECK(by_p.points.back().y == 1.0);
}
