#include "relgrowth/floyd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

namespace relgrowth {

namespace {

// Unique simple path between two elements of a tree ball: up through the
// longest common prefix, then down.
std::vector<uint32_t> tree_path(uint32_t x, uint32_t y, const Ball& b) {
  auto wx = b.word_of(x), wy = b.word_of(y);
  size_t lcp = 0;
  while (lcp < wx.size() && lcp < wy.size() && wx[lcp] == wy[lcp]) ++lcp;
  std::vector<uint32_t> path;
  // walk x down to the meet
  uint32_t cur = x;
  path.push_back(cur);
  const GeneratorSet& gs = b.presentation().gens();
  for (size_t i = wx.size(); i > lcp; --i) {
    cur = b.mul(cur, gs.inverse(wx[i - 1]));
    path.push_back(cur);
  }
  for (size_t i = lcp; i < wy.size(); ++i) {
    cur = b.mul(cur, wy[i]);
    path.push_back(cur);
  }
  return path;
}

}  // namespace

double floyd_length(std::span<const uint32_t> path, uint32_t basepoint, double lambda,
                    const Ball& b) {
  if (lambda <= 1.0) throw input_error("floyd: lambda must be > 1");
  double total = 0.0;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    int d = std::min(b.pair_distance(path[i], basepoint), b.pair_distance(path[i + 1], basepoint));
    total += std::pow(lambda, -d);
  }
  return total;
}

FloydInterval floyd_distance(uint32_t x, uint32_t y, uint32_t basepoint, double lambda,
                             const Ball& b) {
  if (lambda <= 1.0) throw input_error("floyd: lambda must be > 1");
  FloydInterval out;
  if (b.tree_metric()) {
    auto path = tree_path(x, y, b);
    out.hi = out.lo = floyd_length(path, basepoint, lambda, b);
    out.certified = true;
    return out;
  }

  // Non-tree: bracket the true distance. In-ball BFS from the basepoint
  // overestimates d(v, z) near the boundary, so weights are taken twice:
  // from a certified lower bound on d (upper-bound weights, giving hi) and
  // from the BFS value (lower-bound weights, giving lo together with the
  // cheapest escape through the ball boundary).
  const uint32_t n = b.size();
  const uint32_t ngens = (uint32_t)b.presentation().gens().size();
  std::vector<int> bfs(n, -1);
  {
    std::deque<uint32_t> q{basepoint};
    bfs[basepoint] = 0;
    while (!q.empty()) {
      uint32_t u = q.front();
      q.pop_front();
      for (uint32_t s = 0; s < ngens; ++s) {
        uint32_t w = b.mul(u, (Gen)s);
        if (w == Ball::npos || bfs[w] >= 0) continue;
        bfs[w] = bfs[u] + 1;
        q.push_back(w);
      }
    }
  }
  const int margin = b.has_lateral_edges() ? 1 : 0;
  auto d_lower = [&](uint32_t z) {
    if (bfs[z] >= 0 && b.depth(basepoint) + bfs[z] + margin <= b.radius()) return bfs[z];
    return std::abs(b.depth(z) - b.depth(basepoint));
  };
  auto d_upper_model = [&](uint32_t z) {
    return bfs[z] >= 0 ? bfs[z] : b.radius() + 1 - b.depth(basepoint);
  };

  auto dijkstra = [&](uint32_t src, auto&& dist_fn, double* escape_out) {
    std::vector<double> cost(n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    cost[src] = 0.0;
    pq.emplace(0.0, src);
    double escape = std::numeric_limits<double>::infinity();
    while (!pq.empty()) {
      auto [c, u] = pq.top();
      pq.pop();
      if (c > cost[u]) continue;
      bool boundary = false;
      for (uint32_t s = 0; s < ngens; ++s) {
        uint32_t w = b.mul(u, (Gen)s);
        if (w == Ball::npos) {
          boundary = true;
          continue;
        }
        double ew = std::pow(lambda, -(double)std::min(dist_fn(u), dist_fn(w)));
        if (c + ew < cost[w]) {
          cost[w] = c + ew;
          pq.emplace(cost[w], w);
        }
      }
      if (boundary) escape = std::min(escape, c);
    }
    if (escape_out) *escape_out = escape;
    return cost;
  };

  double escape_x = 0, escape_y = 0;
  auto cost_hi = dijkstra(x, d_lower, nullptr);
  auto cost_lo_x = dijkstra(x, d_upper_model, &escape_x);
  auto cost_lo_y = dijkstra(y, d_upper_model, &escape_y);
  out.hi = cost_hi[y];
  out.lo = std::min(cost_lo_x[y], escape_x + escape_y);
  out.certified = out.lo >= out.hi;
  if (out.certified) out.lo = out.hi;
  return out;
}

std::vector<VisibilityRow> visibility_table(const Ball& b, double lambda, int max_depth) {
  if (!b.tree_metric()) throw input_error("visibility_table: tree balls only");
  if (max_depth > b.radius()) throw range_error("visibility_table: ball too small");
  std::map<double, int> best;  // kappa -> max d(1, geodesic)
  uint32_t end = b.sphere_end(max_depth);
  for (uint32_t x = 0; x < end; ++x) {
    for (uint32_t y = x + 1; y < end; ++y) {
      auto path = tree_path(x, y, b);
      double rho = floyd_length(path, 0, lambda, b);
      int dist = b.radius();
      for (uint32_t p : path) dist = std::min(dist, b.depth(p));
      auto [it, fresh] = best.emplace(rho, dist);
      if (!fresh) it->second = std::max(it->second, dist);
    }
  }
  // convert pointwise maxima into suffix maxima: max over pairs with rho >= kappa
  std::vector<VisibilityRow> rows;
  int running = 0;
  for (auto it = best.rbegin(); it != best.rend(); ++it) {
    running = std::max(running, it->second);
    rows.push_back({it->first, running});
  }
  std::reverse(rows.begin(), rows.end());
  return rows;
}

}  // namespace relgrowth
