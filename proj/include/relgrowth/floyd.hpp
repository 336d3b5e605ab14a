#pragma once

#include <span>
#include <vector>

#include "relgrowth/ball.hpp"

namespace relgrowth {

// Floyd geometry with scaling f(n) = lambda^(-n): an edge at distance n
// from the basepoint has length lambda^(-n), where the distance of an edge
// is the minimum over its two endpoints.

double floyd_length(std::span<const uint32_t> path, uint32_t basepoint, double lambda,
                    const Ball& b);

struct FloydInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool certified = false;
};

// Floyd distance rho_v(x, y). On tree balls the unique simple path realizes
// it exactly; otherwise the upper bound is the in-ball Dijkstra value and
// the lower bound accounts for paths escaping the ball.
FloydInterval floyd_distance(uint32_t x, uint32_t y, uint32_t basepoint, double lambda,
                             const Ball& b);

// Empirical visibility data over all ordered pairs in B(1, max_depth):
// for each observed Floyd distance kappa = rho_1(x,y), the maximum over
// pairs with rho_1 >= kappa of d(1, [x,y]). Rows sorted by kappa ascending;
// the max column is non-increasing.
struct VisibilityRow {
  double kappa;
  int max_dist;
};
std::vector<VisibilityRow> visibility_table(const Ball& b, double lambda, int max_depth);

}  // namespace relgrowth
