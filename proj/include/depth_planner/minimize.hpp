#pragma once

#include <functional>

namespace depth {

struct ScalarMinimum {
  double x;
  double value;
};

/// Minimizes `cost` over [low, high]. A uniform grid of `grid_steps` points
/// seeds the search, then golden-section refinement runs inside the bracket
/// around the best grid point until its width drops below rel_tol * |x|.
/// Non-finite cost values count as +infinity (infeasible). Throws
/// InfeasibleTarget if every grid point is infeasible.
ScalarMinimum minimize_bracketed(const std::function<double(double)>& cost, double low,
                                 double high, int grid_steps, double rel_tol);

}  // namespace depth
