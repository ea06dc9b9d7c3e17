#include "depth_planner/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "depth_planner/errors.hpp"

namespace depth {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double guarded(const std::function<double(double)>& cost, double x) {
  const double v = cost(x);
  return std::isfinite(v) ? v : kInf;
}

}  // namespace

ScalarMinimum minimize_bracketed(const std::function<double(double)>& cost, double low,
                                 double high, int grid_steps, double rel_tol) {
  if (!(std::isfinite(low) && std::isfinite(high) && low < high)) {
    throw InvalidRange("minimization bracket must satisfy low < high");
  }
  const int steps = std::max(grid_steps, 3);

  std::vector<double> xs(static_cast<std::size_t>(steps));
  std::vector<double> vs(xs.size());
  for (int i = 0; i < steps; ++i) {
    xs[i] = i == steps - 1 ? high : low + (high - low) * static_cast<double>(i) / (steps - 1);
    vs[i] = guarded(cost, xs[i]);
  }
  const auto best = static_cast<std::size_t>(std::min_element(vs.begin(), vs.end()) - vs.begin());
  if (!std::isfinite(vs[best])) {
    throw InfeasibleTarget("no feasible point in the search range");
  }

  double a = xs[best == 0 ? 0 : best - 1];
  double b = xs[std::min(best + 1, xs.size() - 1)];
  ScalarMinimum incumbent{xs[best], vs[best]};

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = guarded(cost, c);
  double fd = guarded(cost, d);
  for (int iter = 0; iter < 400; ++iter) {
    const double scale = std::max(std::abs(a) + std::abs(b), 1e-300);
    if (b - a <= rel_tol * scale * 0.5) {
      break;
    }
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = guarded(cost, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = guarded(cost, d);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fmid = guarded(cost, mid);
  for (const auto& [x, v] : {std::pair{c, fc}, std::pair{d, fd}, std::pair{mid, fmid}}) {
    if (v < incumbent.value) {
      incumbent = {x, v};
    }
  }
  return incumbent;
}

}  // namespace depth
