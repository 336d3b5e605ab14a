#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "relgrowth/errors.hpp"
#include "relgrowth/oracle.hpp"
#include "relgrowth/words.hpp"

namespace relgrowth {

class Ball;

struct ball_budget_error : budget_error {
  ball_budget_error(const std::string& what, int completed_radius, std::shared_ptr<Ball> partial)
      : budget_error(what, completed_radius), partial_ball(std::move(partial)) {}
  std::shared_ptr<Ball> partial_ball;
};

struct BallLimits {
  uint64_t max_elements = 300'000'000ull;
  double max_seconds = std::numeric_limits<double>::infinity();
};

// The exact ball N(1, radius) in the Cayley graph of a presentation,
// stored as canonical words (lexi-geodesics), sphere by sphere, with the
// full in-ball adjacency and the geodesic predecessor structure.
//
// Element identity in quotients is decided by the word-problem oracle on
// difference words, with abelianization-residue buckets as a prefilter.
// Levels k with 2k <= girth_bound skip the oracle entirely (no kernel word
// is short enough to cause a collision).
class Ball {
 public:
  static constexpr uint32_t npos = 0xFFFFFFFFu;
  using Limits = BallLimits;

  static std::shared_ptr<Ball> build(std::shared_ptr<const Presentation> pres, int radius,
                                     const Limits& limits = {});

  const Presentation& presentation() const { return *pres_; }
  std::shared_ptr<const Presentation> presentation_ptr() const { return pres_; }
  int radius() const { return radius_; }

  // Whether the stored counts are exact for the group. False only for
  // generic presentations past the sub-girth regime.
  bool exact() const { return exact_; }
  // Free presentations: the Cayley graph is a tree and all in-ball word
  // computations are globally exact.
  bool tree_metric() const { return tree_; }
  // With all relators of even length the graph is bipartite and has no
  // edges inside a sphere.
  bool has_lateral_edges() const { return lateral_; }

  uint32_t size() const { return (uint32_t)offsets_.size() - 1; }
  uint64_t sphere_size(int k) const;
  uint64_t ball_count(int k) const;  // #N(1, k)
  uint32_t sphere_begin(int k) const { return sphere_start_[k]; }
  uint32_t sphere_end(int k) const { return sphere_start_[k + 1]; }

  int depth(uint32_t e) const { return depth_[e]; }
  std::span<const Gen> word_of(uint32_t e) const {
    return {bytes_.data() + offsets_[e], offsets_[e + 1] - offsets_[e]};
  }
  Word word(uint32_t e) const;

  // One-generator product; npos when the result lies outside the ball (or
  // past the known horizon for boundary-sphere elements).
  uint32_t mul(uint32_t e, Gen s) const { return adj_[(size_t)e * gens_count_ + s]; }
  // Exact product with a word; npos only when genuinely outside the ball.
  uint32_t mul_word(uint32_t e, std::span<const Gen> w) const;

  // Exact element lookup for an arbitrary word; nullopt means the element
  // lies outside the ball (for non-exact generic balls: outside the model).
  std::optional<uint32_t> locate(const Word& w) const;
  uint32_t require(const Word& w) const;

  // Exact word-metric distance; throws range_error when the ball cannot
  // certify it (never happens for free presentations).
  int pair_distance(uint32_t a, uint32_t b) const;

  // Closed ball around v inside the group, as sorted element indices.
  std::vector<uint32_t> neighborhood(uint32_t v, int dist) const;

  // Bitmask over generators t such that d(1, e t^-1) = d(1, e) - 1, i.e.
  // some geodesic word for e ends with t.
  uint64_t last_letter_mask(uint32_t e) const { return last_letters_[e]; }

  // All geodesic words for e via the predecessor DAG.
  void all_geodesics(uint32_t e, std::vector<Word>& out, size_t cap = SIZE_MAX) const;
  // Lexi-minimal geodesic word recomputed by descent through predecessor
  // sets (always equals word_of(e); kept as an independent route).
  Word lexi_geodesic_greedy(uint32_t e) const;

  // Element indices of the path vertices of e's canonical geodesic,
  // starting at the identity.
  std::vector<uint32_t> canonical_path(uint32_t e) const;

  uint64_t oracle_calls() const { return oracle_calls_.load(std::memory_order_relaxed); }

  void save(std::ostream& out) const;
  static std::shared_ptr<Ball> load(std::istream& in, std::shared_ptr<const Presentation> pres);

 private:
  Ball() = default;
  void push_element(std::span<const Gen> word, int depth, uint32_t parent, Gen via);
  bool syntactic_level(int k) const;
  std::string residue_key(const std::vector<int>& residue) const;
  std::vector<int> ab_of(uint32_t e) const;
  std::optional<uint32_t> oracle_scan(const Word& w, const std::vector<int>& ab, int min_depth,
                                      int max_depth) const;
  int certified_reach(uint32_t v) const;

  std::shared_ptr<const Presentation> pres_;
  int radius_ = 0;
  bool exact_ = true;
  bool tree_ = false;
  bool lateral_ = false;
  bool needs_oracle_ = false;
  uint32_t gens_count_ = 0;

  std::vector<Gen> bytes_;
  std::vector<uint32_t> offsets_;
  std::vector<uint8_t> depth_;
  std::vector<uint32_t> adj_;
  std::vector<uint64_t> last_letters_;
  std::vector<uint32_t> sphere_start_;
  std::vector<int16_t> ab_;  // per element, ab_dim coords (oracle kinds only)
  std::unordered_map<std::string, std::vector<uint32_t>> buckets_;
  mutable std::atomic<uint64_t> oracle_calls_{0};
};

// Growth-rate estimators from exact sphere counts: per_radius_log has
// ln(#N(1,n))/n per radius, ratio_log has ln(#S^n/#S^(n-1)); the headline
// is the sphere-ratio value at the largest radius.
struct GrowthEstimate {
  std::vector<double> per_radius_log;
  std::vector<double> ratio_log;
  double reported = 0.0;
  std::string method;
};

GrowthEstimate growth_estimate(const Ball& b);

enum class PoincareVerdict { Diverging, Converging, Inconclusive };

struct PoincareReport {
  std::vector<double> partial_sums;
  PoincareVerdict verdict = PoincareVerdict::Inconclusive;
  std::string method;
};

PoincareReport poincare_partial(const Ball& b, double s);
PoincareReport poincare_partial(const Ball& b, double s, std::span<const uint32_t> subset);

Word lexi_geodesic(uint32_t g, const Ball& b);

// A(g, n, Delta): elements whose distance from 1 exceeds d(1,g) by a value
// in [n-Delta, n+Delta). Delta = 0 denotes the single sphere at offset n.
struct AnnulusSet {
  uint32_t base = 0;
  int n = 0;
  int delta = 0;
  int lo_sphere = 0;  // inclusive absolute sphere indices
  int hi_sphere = 0;
  const Ball* ball = nullptr;

  uint64_t size() const;
  std::vector<uint32_t> members() const;
  template <class F>
  void for_each(F&& f) const {
    for (int k = lo_sphere; k <= hi_sphere; ++k)
      for (uint32_t e = ball->sphere_begin(k); e < ball->sphere_end(k); ++e) f(e);
  }
};

AnnulusSet annulus(uint32_t g, int n, int delta, const Ball& b);

// Greedy maximal C-separated subset in canonical order; the result Z
// satisfies #Z * #B(1,C) >= #members.
std::vector<uint32_t> separated_net(std::span<const uint32_t> members, int C, const Ball& b);

int dead_end_depth(uint32_t g, const Ball& b);

// Exhaustive dead-end depths on the integer line with generating steps
// +-steps[i]; returns depth per g in [-max_abs, max_abs].
std::vector<std::pair<int, int>> dead_end_depths_line(const std::vector<int>& steps, int max_abs);

}  // namespace relgrowth
