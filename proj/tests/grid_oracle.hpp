#pragma once

// Test-only exhaustive-grid minimizer over the plan box. Independent of the
// production solver: brute-force enumeration at a fixed resolution, used as
// the optimality oracle for solve_horizon.

#include <functional>
#include <vector>

#include "tacf/core.hpp"

namespace tacf_test {

struct GridResult {
  tacf::Plan plan;
  double cost = 0.0;
  long evaluations = 0;
};

inline GridResult grid_min(const std::function<double(const tacf::Plan&)>& f,
                           int n, double u_min, double u_max,
                           double resolution = 0.1) {
  const int points =
      static_cast<int>(std::round((u_max - u_min) / resolution)) + 1;
  tacf::Plan plan = tacf::Plan::zeros(static_cast<std::size_t>(n));
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  GridResult best;
  best.cost = std::numeric_limits<double>::infinity();

  for (;;) {
    for (int k = 0; k < n; ++k) {
      double u = u_min + resolution * idx[static_cast<std::size_t>(k)];
      if (u > u_max) u = u_max;
      plan[static_cast<std::size_t>(k)] = u;
    }
    const double c = f(plan);
    ++best.evaluations;
    if (c < best.cost) {
      best.cost = c;
      best.plan = plan;
    }
    int k = 0;
    while (k < n && ++idx[static_cast<std::size_t>(k)] == points) {
      idx[static_cast<std::size_t>(k)] = 0;
      ++k;
    }
    if (k == n) break;
  }
  return best;
}

}  // namespace tacf_test
