#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relgrowth/peripheral.hpp"

namespace relgrowth {

// Partial lexi-cone annulus L_{eps,R}(x, r, Delta): elements h with x on
// their lexi-geodesic and (d(1,h) <= d(1,x) + 2R, or w_h carrying an
// (eps,R)-transition point within 2R of x), restricted to A(x, r, Delta).
std::vector<uint32_t> lexi_cone_annulus(uint32_t x, int r, int delta, int eps, int R,
                                        const PeripheralContext& ctx);

struct TreeConfig {
  int r = 1;
  int delta = 0;
  int eps = 0;
  int R = 1;
  size_t target_branching = 3;
};

// Rooted geodesic tree: children lie in the partial lexi-cone annulus of
// their parent, so every root path is a lexi-geodesic.
struct TransitionalTree {
  struct Vertex {
    uint32_t element = Ball::npos;
    uint32_t parent = UINT32_MAX;  // index into vertices; UINT32_MAX at root
    int level = 0;
  };
  TreeConfig config;
  std::vector<Vertex> vertices;          // vertex 0 is the root (identity)
  std::vector<size_t> level_counts;      // per level
};

// Level-by-level greedy construction: the lexicographically first
// target_branching members of each vertex's lexi-cone annulus, each
// re-verified geodesic through the oracle. Vertices without valid children
// become leaves.
TransitionalTree build_tree(const TreeConfig& config, int depth, const PeripheralContext& ctx,
                            int threads = 0);  // 0: hardware default

struct TreeReport {
  int depth = 0;
  size_t vertex_count = 0;
  std::vector<size_t> level_counts;
  size_t min_branching = 0;   // over internal vertices
  double mean_branching = 0.0;
  int spacing = 0;            // max distance from a root-path vertex to the
                              // nearest transition point on its path
  int spacing_bound = 0;      // r + 2R + delta
  std::optional<double> rate_bound;  // ln(min_branching) / (r + delta)
  double empirical_slope = 0.0;
  size_t geodesy_violations = 0;
  size_t spacing_violations = 0;
};

// Re-verifies geodesy of every root path (hard failure on violation),
// measures transition-point spacing and the growth-rate bound.
TreeReport verify_tree(const TransitionalTree& tree, const PeripheralContext& ctx);

std::string tree_to_json(const TransitionalTree& tree, const PeripheralContext& ctx);

}  // namespace relgrowth
