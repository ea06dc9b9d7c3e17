#include <doctest.h>

#include <cmath>
#include <limits>

#include "depth_planner/errors.hpp"
#include "depth_planner/minimize.hpp"

using namespace depth;

TEST_CASE("golden refinement finds a smooth interior minimum") {
  const auto r = minimize_bracketed([](double x) { return (x - 0.3) * (x - 0.3) + 2.0; }, 0.0,
                                    1.0, 16, 1e-10);
  CHECK(r.x == doctest::Approx(0.3).epsilon(1e-7));
  CHECK(r.value == doctest::Approx(2.0));
}

TEST_CASE("-p ln p is maximized at 1/e") {
  const auto r = minimize_bracketed([](double p) { return 1.0 / (-p * std::log(p)); }, 1e-12,
                                    1.0 - 1e-12, 256, 1e-9);
  CHECK(std::abs(r.x - std::exp(-1.0)) < 1e-7);
}

TEST_CASE("grid seeding escapes a shallow local minimum") {
  // local minimum near 0.1, global near 0.8
  auto f = [](double x) {
    return -0.2 * std::exp(-std::pow((x - 0.1) / 0.05, 2)) - std::exp(-std::pow((x - 0.8) / 0.05, 2));
  };
  const auto r = minimize_bracketed(f, 0.0, 1.0, 64, 1e-10);
  CHECK(r.x == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("infeasible points are skipped and all-infeasible throws") {
  const double inf = std::numeric_limits<double>::infinity();
  const auto r = minimize_bracketed([&](double x) { return x < 0.5 ? inf : x; }, 0.0, 1.0, 32,
                                    1e-10);
  CHECK(r.x >= 0.5);
  CHECK(r.x == doctest::Approx(0.5).epsilon(1e-6));
  CHECK_THROWS_AS(minimize_bracketed([&](double) { return inf; }, 0.0, 1.0, 32, 1e-10),
                  InfeasibleTarget);
  CHECK_THROWS_AS(minimize_bracketed([](double x) { return x; }, 1.0, 0.0, 32, 1e-10),
                  InvalidRange);
}
