#include "relgrowth/peripheral.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "relgrowth/oracle.hpp"

namespace relgrowth {

PeripheralStructure PeripheralStructure::parse(const std::string& spec, const GeneratorSet& gs) {
  PeripheralStructure out;
  if (spec.empty()) return out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ';')) {
    for (auto& c : part)
      if (c == ',') c = ' ';
    std::istringstream ws(part);
    Subgroup sub;
    std::string tok;
    while (ws >> tok) {
      Word w = free_reduce(gs, parse_word(gs, tok));
      if (w.empty()) throw input_error("peripheral generator is trivial: " + tok);
      sub.generators.push_back(w);
      sub.label += (sub.label.empty() ? "" : ",") + tok;
    }
    if (sub.generators.empty()) throw input_error("empty peripheral subgroup in spec");
    out.subgroups.push_back(std::move(sub));
  }
  return out;
}

PeripheralContext::PeripheralContext(const Ball& ball, PeripheralStructure structure)
    : ball_(ball), structure_(std::move(structure)) {
  const GeneratorSet& gs = ball.presentation().gens();
  for (const auto& sub : structure_.subgroups) {
    std::vector<Word> gens;
    for (const auto& g : sub.generators) {
      Word r = free_reduce(gs, g);
      if (word_problem(ball.presentation(), r))
        throw input_error("peripheral subgroup generator is trivial in the group");
      gens.push_back(r);
      gens.push_back(inverse_word(gs, r));
    }
    sub_gens_.push_back(std::move(gens));
  }
  for (size_t i = 0; i < structure_.subgroups.size(); ++i) {
    auto arr = std::make_unique<std::atomic<uint32_t>[]>(ball.size());
    for (uint32_t e = 0; e < ball.size(); ++e)
      arr[e].store(Ball::npos, std::memory_order_relaxed);
    rep_of_.push_back(std::move(arr));
  }
}

// Called with memo_mutex_ held.
void PeripheralContext::enumerate_coset(uint32_t seed, int subgroup) const {
  auto& reps = rep_of_[subgroup];
  std::unordered_set<uint32_t> seen{seed};
  std::vector<uint32_t> found{seed};
  std::deque<uint32_t> queue{seed};
  while (!queue.empty()) {
    uint32_t x = queue.front();
    queue.pop_front();
    for (const Word& g : sub_gens_[subgroup]) {
      uint32_t y = ball_.mul_word(x, g.letters);
      if (y == Ball::npos || !seen.insert(y).second) continue;
      found.push_back(y);
      queue.push_back(y);
    }
  }
  std::sort(found.begin(), found.end());
  CosetId id{subgroup, found.front()};
  members_[id] = found;
  for (uint32_t e : found) reps[e].store(id.representative, std::memory_order_release);
}

uint32_t PeripheralContext::coset_rep(uint32_t e, int subgroup) const {
  uint32_t r = rep_of_[subgroup][e].load(std::memory_order_acquire);
  if (r != Ball::npos) return r;
  std::lock_guard<std::mutex> lock(memo_mutex_);
  r = rep_of_[subgroup][e].load(std::memory_order_acquire);
  if (r != Ball::npos) return r;
  enumerate_coset(e, subgroup);
  return rep_of_[subgroup][e].load(std::memory_order_acquire);
}

bool PeripheralContext::same_coset(uint32_t a, uint32_t b, int subgroup) const {
  return coset_rep(a, subgroup) == coset_rep(b, subgroup);
}

const std::vector<uint32_t>& PeripheralContext::coset_members(const CosetId& id) const {
  coset_rep(id.representative, id.subgroup);
  std::lock_guard<std::mutex> lock(memo_mutex_);
  return members_.at(id);
}

CosetDistance PeripheralContext::coset_distance(uint32_t x, const CosetId& id) const {
  const auto& members = coset_members(id);
  CosetDistance out;
  out.lo = 0;
  out.hi = -1;
  bool certified = true;
  for (uint32_t m : members) {
    // cheap lower bound first: |d(1,x) - d(1,m)| <= d(x,m)
    int lb = std::abs(ball_.depth(x) - ball_.depth(m));
    if (out.hi >= 0 && lb >= out.hi) continue;
    try {
      int d = ball_.pair_distance(x, m);
      if (out.hi < 0 || d < out.hi) out.hi = d;
    } catch (const range_error&) {
      certified = false;
    }
  }
  if (out.hi < 0) throw range_error("coset has no members within the ball");
  out.lo = out.hi;
  out.exact = certified;
  if (!certified) out.lo = 0;  // members beyond certification could be closer
  return out;
}

bool PeripheralContext::coset_within(uint32_t x, const CosetId& id, int dist) const {
  if (dist == 0) return coset_rep(x, id.subgroup) == id.representative;
  const auto& members = coset_members(id);
  for (uint32_t m : members) {
    if (std::abs(ball_.depth(x) - ball_.depth(m)) > dist) continue;
    if (ball_.pair_distance(x, m) <= dist) return true;
  }
  return false;
}

bool PeripheralContext::window_deep_in(std::span<const uint32_t> window, int eps,
                                       CosetId id) const {
  for (uint32_t w : window)
    if (!coset_within(w, id, eps)) return false;
  return true;
}

std::optional<CosetId> PeripheralContext::find_deep_coset(std::span<const uint32_t> window,
                                                          uint32_t center, int eps, int R) const {
  (void)R;
  // candidate cosets must pass within eps of the center vertex
  std::vector<uint32_t> near =
      eps == 0 ? std::vector<uint32_t>{center} : ball_.neighborhood(center, eps);
  for (int i = 0; i < subgroup_count(); ++i) {
    std::vector<CosetId> cands;
    for (uint32_t u : near) {
      CosetId id = coset_of(u, i);
      if (std::find(cands.begin(), cands.end(), id) == cands.end()) cands.push_back(id);
    }
    std::sort(cands.begin(), cands.end());
    for (const CosetId& id : cands)
      if (window_deep_in(window, eps, id)) return id;
  }
  return std::nullopt;
}

VertexClassification PeripheralContext::classify_vertex(std::span<const uint32_t> path,
                                                        size_t v_index, int eps, int R) const {
  if (v_index >= path.size()) throw input_error("classify_vertex: index out of range");
  VertexClassification out;
  out.vertex = path[v_index];
  out.eps = eps;
  out.R = R;
  // distances along a geodesic are index differences
  const long i = (long)v_index, n = (long)path.size();
  if (i <= R || (n - 1 - i) <= R) return out;  // endpoint inside B(v,R): transition
  size_t lo = (size_t)(i - R), hi = (size_t)std::min<long>(n - 1, i + R);
  auto window = path.subspan(lo, hi - lo + 1);
  auto deep = find_deep_coset(window, path[v_index], eps, R);
  if (deep) {
    out.deep = true;
    out.coset = *deep;
  }
  return out;
}

bool PeripheralContext::strict_path_transition(std::span<const uint32_t> path, size_t v_index,
                                               int eps, int R) const {
  const long i = (long)v_index, n = (long)path.size();
  if (i <= R || (n - 1 - i) <= R) return false;  // endpoint precondition fails
  size_t lo = (size_t)(i - R);
  auto window = path.subspan(lo, 2 * (size_t)R + 1);
  return !find_deep_coset(window, path[v_index], eps, R).has_value();
}

bool PeripheralContext::ray_vertex_is_transition(std::span<const uint32_t> path, size_t v_index,
                                                 int eps, int R) const {
  const long i = (long)v_index;
  if (i <= R) return false;  // backward endpoint (identity) inside B(v,R)
  if (i + R >= (long)path.size())
    throw range_error("ray window not yet complete at this prefix length");
  auto window = path.subspan((size_t)(i - R), 2 * (size_t)R + 1);
  return !find_deep_coset(window, path[v_index], eps, R).has_value();
}

}  // namespace relgrowth
