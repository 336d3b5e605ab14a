#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relgrowth/ball.hpp"

namespace relgrowth {

// A family of finitely generated subgroups, each given by generator words;
// their left cosets form the contracting system used for deep/transition
// classification. An empty list is allowed (every vertex transitional).
struct PeripheralStructure {
  struct Subgroup {
    std::string label;
    std::vector<Word> generators;
  };
  std::vector<Subgroup> subgroups;

  // "a;b" - semicolon-separated subgroups, whitespace/comma-separated
  // generator words within each.
  static PeripheralStructure parse(const std::string& spec, const GeneratorSet& gs);
  bool empty() const { return subgroups.empty(); }
};

// A peripheral coset, identified by its subgroup and the minimal coset
// element found within the ball (canonical order).
struct CosetId {
  int subgroup = -1;
  uint32_t representative = Ball::npos;
  bool operator==(const CosetId& o) const {
    return subgroup == o.subgroup && representative == o.representative;
  }
  bool operator<(const CosetId& o) const {
    return subgroup != o.subgroup ? subgroup < o.subgroup : representative < o.representative;
  }
};

struct CosetDistance {
  int lo = 0;
  int hi = 0;
  bool exact = false;
};

// Verdict for one vertex of a geodesic path: deep in a specific peripheral
// coset, or a transition point. Failing the endpoint precondition
// (an endpoint within R of the vertex) classifies as Transition.
struct VertexClassification {
  uint32_t vertex = Ball::npos;
  bool deep = false;
  CosetId coset;
  int eps = 0;
  int R = 0;
};

// Binds a peripheral structure to a ball and memoizes coset enumeration.
// All queries are read-only with respect to the ball; the lazy memo tables
// are guarded internally, so one context can serve concurrent queries.
class PeripheralContext {
 public:
  PeripheralContext(const Ball& ball, PeripheralStructure structure);

  const Ball& ball() const { return ball_; }
  const PeripheralStructure& structure() const { return structure_; }
  int subgroup_count() const { return (int)structure_.subgroups.size(); }

  // Minimal element of e's coset of subgroup i inside the ball.
  uint32_t coset_rep(uint32_t e, int subgroup) const;
  CosetId coset_of(uint32_t e, int subgroup) const { return {subgroup, coset_rep(e, subgroup)}; }
  bool same_coset(uint32_t a, uint32_t b, int subgroup) const;

  // All coset members inside the ball, sorted by element index.
  const std::vector<uint32_t>& coset_members(const CosetId& id) const;

  // Exact min distance from x to the coset within the ball.
  CosetDistance coset_distance(uint32_t x, const CosetId& id) const;

  // Is some member of the coset within dist of x?
  bool coset_within(uint32_t x, const CosetId& id, int dist) const;

  // Total dichotomy for reporting: a vertex failing the endpoint
  // precondition (an endpoint inside B(v,R)) is classified Transition.
  VertexClassification classify_vertex(std::span<const uint32_t> path, size_t v_index, int eps,
                                       int R) const;

  // The strict notion used by membership predicates (partial cones, partial
  // shadows, lexi-cones): v is a transition point only when both endpoints
  // lie outside B(v,R) and the window is deep in no coset. Vertices failing
  // the precondition do not qualify.
  bool strict_path_transition(std::span<const uint32_t> path, size_t v_index, int eps,
                              int R) const;

  // Strict transition test for a vertex of an infinite ray whose known
  // prefix is `path` (path[0] = identity); the forward endpoint lies at
  // infinity. Requires the window [v-R, v+R] to be inside the prefix.
  bool ray_vertex_is_transition(std::span<const uint32_t> path, size_t v_index, int eps,
                                int R) const;

 private:
  bool window_deep_in(std::span<const uint32_t> window, int eps, CosetId id) const;
  std::optional<CosetId> find_deep_coset(std::span<const uint32_t> window, uint32_t center,
                                         int eps, int R) const;
  void enumerate_coset(uint32_t seed, int subgroup) const;

  const Ball& ball_;
  PeripheralStructure structure_;
  std::vector<std::vector<Word>> sub_gens_;  // generator words + inverses
  // rep_of_[i][e]: coset representative, npos until enumerated (atomic so
  // readers never observe torn values; enumeration itself is serialized)
  mutable std::vector<std::unique_ptr<std::atomic<uint32_t>[]>> rep_of_;
  mutable std::map<CosetId, std::vector<uint32_t>> members_;
  mutable std::mutex memo_mutex_;
};

}  // namespace relgrowth
