#include "relgrowth/treelab.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relgrowth/parallel.hpp"

namespace relgrowth {

namespace {

// h has x on its lexi-geodesic iff the canonical word of x is a prefix of
// the canonical word of h (prefixes of lexi-geodesics are lexi-geodesics).
bool on_lexi_geodesic(uint32_t x, uint32_t h, const Ball& b) {
  auto wx = b.word_of(x), wh = b.word_of(h);
  return wx.size() <= wh.size() && std::equal(wx.begin(), wx.end(), wh.begin());
}

bool lexi_cone_transition_clause(uint32_t x, uint32_t h, int eps, int R,
                                 const PeripheralContext& ctx) {
  const Ball& b = ctx.ball();
  if (b.depth(h) <= b.depth(x) + 2 * R) return true;
  auto path = b.canonical_path(h);
  for (size_t i = 0; i < path.size(); ++i) {
    if (b.pair_distance(path[i], x) > 2 * R) continue;
    if (ctx.strict_path_transition(path, i, eps, R)) return true;
  }
  return false;
}

}  // namespace

std::vector<uint32_t> lexi_cone_annulus(uint32_t x, int r, int delta, int eps, int R,
                                        const PeripheralContext& ctx) {
  const Ball& b = ctx.ball();
  AnnulusSet ann = annulus(x, r, delta, b);
  std::vector<uint32_t> out;
  // descendants in the canonical prefix tree, depth-first in letter order;
  // this emits members ordered by the edge word w_{x^-1 h}
  std::vector<uint32_t> stack{x};
  const GeneratorSet& gs = b.presentation().gens();
  auto walk = [&](auto&& self, uint32_t v) -> void {
    int rel = b.depth(v) - b.depth(x);
    int lo = ann.lo_sphere - b.depth(x), hi = ann.hi_sphere - b.depth(x);
    if (rel >= lo && rel <= hi && lexi_cone_transition_clause(x, v, eps, R, ctx))
      out.push_back(v);
    if (rel >= hi) return;
    auto wv = b.word_of(v);
    for (size_t ri = 0; ri < gs.size(); ++ri) {
      Gen s = gs.nth_by_rank(ri);
      uint32_t child = b.mul(v, s);
      if (child == Ball::npos || b.depth(child) != b.depth(v) + 1) continue;
      // descend only along canonical-word extensions
      auto wc = b.word_of(child);
      if (wc.size() != wv.size() + 1 || wc.back() != s) continue;
      if (!std::equal(wv.begin(), wv.end(), wc.begin())) continue;
      self(self, child);
    }
  };
  walk(walk, x);
  return out;
}

TransitionalTree build_tree(const TreeConfig& config, int depth, const PeripheralContext& ctx,
                            int threads) {
  if (threads <= 0) threads = default_threads();
  const Ball& b = ctx.ball();
  TransitionalTree tree;
  tree.config = config;
  tree.vertices.push_back({0, UINT32_MAX, 0});
  tree.level_counts.push_back(1);

  std::vector<uint32_t> frontier{0};  // indices into tree.vertices
  for (int level = 1; level <= depth; ++level) {
    std::vector<std::vector<uint32_t>> children(frontier.size());
    parallel_for(frontier.size(), threads, [&](size_t i) {
      uint32_t x = tree.vertices[frontier[i]].element;
      auto members =
          lexi_cone_annulus(x, config.r, config.delta, config.eps, config.R, ctx);
      std::vector<uint32_t> chosen;
      for (uint32_t h : members) {
        if (chosen.size() >= config.target_branching) break;
        // concatenated root path stays geodesic (oracle re-check)
        if (b.depth(h) != b.depth(x) + b.pair_distance(x, h)) continue;
        chosen.push_back(h);
      }
      children[i] = std::move(chosen);
    });
    std::vector<uint32_t> next;
    for (size_t i = 0; i < frontier.size(); ++i) {
      for (uint32_t h : children[i]) {
        tree.vertices.push_back({h, frontier[i], level});
        next.push_back((uint32_t)tree.vertices.size() - 1);
      }
    }
    if (next.empty()) break;
    tree.level_counts.push_back(next.size());
    frontier = std::move(next);
  }
  return tree;
}

TreeReport verify_tree(const TransitionalTree& tree, const PeripheralContext& ctx) {
  const Ball& b = ctx.ball();
  TreeReport rep;
  rep.depth = (int)tree.level_counts.size() - 1;
  rep.vertex_count = tree.vertices.size();
  rep.level_counts = tree.level_counts;
  rep.spacing_bound = tree.config.r + 2 * tree.config.R + tree.config.delta;

  // geodesy: the root-path concatenation of edge words equals the canonical
  // geodesic, so d(1, v) must equal the summed edge lengths
  for (const auto& v : tree.vertices) {
    if (v.parent == UINT32_MAX) continue;
    uint32_t p = tree.vertices[v.parent].element;
    int edge = b.pair_distance(p, v.element);
    if (b.depth(v.element) != b.depth(p) + edge) ++rep.geodesy_violations;
    if (!on_lexi_geodesic(p, v.element, b)) ++rep.geodesy_violations;
  }
  if (rep.geodesy_violations)
    throw range_error("verify_tree: geodesy violation (construction bug)");

  // branching over internal vertices
  std::vector<size_t> child_count(tree.vertices.size(), 0);
  for (const auto& v : tree.vertices)
    if (v.parent != UINT32_MAX) ++child_count[v.parent];
  size_t internal = 0, total_children = 0;
  rep.min_branching = SIZE_MAX;
  int max_level = rep.depth;
  for (size_t i = 0; i < tree.vertices.size(); ++i) {
    if (tree.vertices[i].level == max_level) continue;  // leaves of the build
    ++internal;
    total_children += child_count[i];
    rep.min_branching = std::min(rep.min_branching, child_count[i]);
  }
  if (internal == 0) rep.min_branching = 0;
  rep.mean_branching = internal ? (double)total_children / internal : 0.0;

  // spacing: per root path, distance from each vertex to the nearest
  // transition point of that path
  rep.spacing = 0;
  for (const auto& v : tree.vertices) {
    if (v.parent == UINT32_MAX) continue;
    bool is_leaf = child_count[&v - tree.vertices.data()] == 0;
    if (!is_leaf) continue;  // every prefix is covered by leaf paths
    auto path = b.canonical_path(v.element);
    std::vector<size_t> transitions;
    for (size_t i = 0; i < path.size(); ++i)
      if (!ctx.classify_vertex(path, i, tree.config.eps, tree.config.R).deep)
        transitions.push_back(i);
    for (size_t i = 0; i < path.size(); ++i) {
      int best = INT32_MAX;
      for (size_t t : transitions) best = std::min(best, (int)std::abs((long)i - (long)t));
      if (best == INT32_MAX || best >= rep.spacing_bound) ++rep.spacing_violations;
      if (best != INT32_MAX) rep.spacing = std::max(rep.spacing, best);
    }
  }

  int step = tree.config.r + tree.config.delta;
  if (rep.min_branching >= 1 && internal > 0 && step > 0 && rep.min_branching != SIZE_MAX)
    rep.rate_bound = std::log((double)rep.min_branching) / step;
  if (tree.level_counts.size() >= 2 && step > 0) {
    double lc0 = std::log((double)tree.level_counts.front());
    double lc1 = std::log((double)tree.level_counts.back());
    rep.empirical_slope = (lc1 - lc0) / ((double)(tree.level_counts.size() - 1) * step);
  }
  return rep;
}

std::string tree_to_json(const TransitionalTree& tree, const PeripheralContext& ctx) {
  const Ball& b = ctx.ball();
  std::ostringstream out;
  out << "{\n  \"config\": {\"r\": " << tree.config.r << ", \"delta\": " << tree.config.delta
      << ", \"eps\": " << tree.config.eps << ", \"R\": " << tree.config.R
      << ", \"target_branching\": " << tree.config.target_branching << "},\n";
  out << "  \"levels\": [";
  for (size_t i = 0; i < tree.level_counts.size(); ++i)
    out << (i ? ", " : "") << tree.level_counts[i];
  out << "],\n  \"vertices\": [\n";
  const GeneratorSet& gs = b.presentation().gens();
  for (size_t i = 0; i < tree.vertices.size(); ++i) {
    const auto& v = tree.vertices[i];
    auto path = b.canonical_path(v.element);
    bool transitional = false;
    if (v.element != 0) {
      size_t pos = path.size() - 1;
      transitional = !ctx.classify_vertex(path, pos, tree.config.eps, tree.config.R).deep;
    }
    out << "    {\"word\": \"" << spell(gs, b.word_of(v.element)) << "\", \"parent\": "
        << (v.parent == UINT32_MAX ? -1 : (long)v.parent) << ", \"level\": " << v.level
        << ", \"transition\": " << (transitional ? "true" : "false") << "}"
        << (i + 1 < tree.vertices.size() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  return out.str();
}

}  // namespace relgrowth
