#include "relgrowth/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "relgrowth/parallel.hpp"

namespace relgrowth {

PowerQuotient make_power_quotient(std::shared_ptr<const Presentation> base, const Word& h,
                                  int n) {
  if (!base || base->kind() != PresentationKind::Free)
    throw input_error("make_power_quotient: base must be a free presentation");
  if (n < 2) throw input_error("make_power_quotient: exponent must be >= 2");
  const GeneratorSet& gs = base->gens();
  Word hr = free_reduce(gs, h);
  if (hr.empty()) throw input_error("make_power_quotient: h is trivial");
  auto [core, conj] = cyclic_reduce(gs, hr);

  PowerQuotient q;
  q.base = base;
  q.h = hr;
  q.n = n;
  q.quotient = Presentation::one_relator_power(gs, core, n);
  q.root = q.quotient->power_root();
  q.exponent = q.quotient->power_exponent();
  q.girth_bound = q.quotient->girth_bound();
  return q;
}

bool epsilon_contains(uint32_t g, const Word& f, int eps, const Ball& b) {
  if (eps < 0) throw input_error("epsilon_contains: eps must be >= 0");
  auto path = b.canonical_path(g);

  if (eps == 0) {
    for (uint32_t t : path) {
      uint32_t tf = b.mul_word(t, f.letters);
      if (tf == Ball::npos) continue;
      for (uint32_t v : path)
        if (v == tf) return true;
    }
    return false;
  }

  // N_eps(w_g), then test both endpoints against it
  std::set<uint32_t> tube;
  for (uint32_t v : path)
    for (uint32_t u : b.neighborhood(v, eps)) tube.insert(u);
  for (uint32_t t : tube) {
    uint32_t tf = b.mul_word(t, f.letters);
    if (tf == Ball::npos) continue;
    if (tube.count(tf)) return true;
  }
  return false;
}

std::vector<uint32_t> language_filter(const Ball& b, const ContainmentFilter& filter) {
  if (filter.root.empty()) throw input_error("language_filter: empty root");
  const GeneratorSet& gs = b.presentation().gens();
  const int rl = (int)filter.root.size();
  // the eps-tube around a lexi-geodesic needs headroom inside the ball
  const uint32_t scan_end = b.sphere_end(std::max(0, b.radius() - filter.eps));
  std::vector<uint32_t> kept;
  for (uint32_t g = 0; g < scan_end; ++g) {
    // members of W = E(root, L) relevant for g: root^m with
    // L < m*|root| <= d(1,g) + 2 eps, both signs
    bool contains = false;
    int max_len = b.depth(g) + 2 * filter.eps;
    for (int m = filter.L / rl + 1; m * rl <= max_len && !contains; ++m) {
      if (m * rl <= filter.L) continue;
      Word f;
      for (int i = 0; i < m; ++i) f = concat(f, filter.root);
      f.reduced = true;
      if (epsilon_contains(g, f, filter.eps, b) ||
          epsilon_contains(g, inverse_word(gs, f), filter.eps, b))
        contains = true;
    }
    if (!contains) kept.push_back(g);
  }
  return kept;
}

InjectivityReport injectivity_check(std::span<const uint32_t> kept, const PowerQuotient& q,
                                    const Ball& base_ball, int threads) {
  InjectivityReport rep;
  const GeneratorSet& gs = base_ball.presentation().gens();
  const size_t n = kept.size();
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> hits(n);
  std::atomic<size_t> pairs{0};
  parallel_for(n, threads, [&](size_t i) {
    Word wi = base_ball.word(kept[i]);
    Word wi_inv = inverse_word(gs, wi);
    size_t local = 0;
    for (size_t j = i + 1; j < n; ++j) {
      Word diff = concat_reduced(gs, wi_inv, base_ball.word(kept[j]));
      ++local;
      // below the girth bound nothing nontrivial can die
      if ((int)diff.size() <= q.girth_bound) continue;
      if (word_problem(*q.quotient, diff)) hits[i].emplace_back(kept[i], kept[j]);
    }
    pairs.fetch_add(local, std::memory_order_relaxed);
  });
  rep.checked_pairs = pairs.load();
  for (auto& v : hits)
    for (auto& p : v) rep.collisions.push_back(p);
  return rep;
}

namespace {

ExperimentLeg run_leg(std::shared_ptr<const Presentation> base, const Word& h, int n, int radius,
                      const std::vector<uint64_t>& free_spheres, const Ball* free_ball) {
  ExperimentLeg leg;
  leg.n = n;
  try {
    PowerQuotient q = make_power_quotient(base, h, n);
    leg.exponent = q.exponent;
    leg.girth_bound = q.girth_bound;
    auto ball = Ball::build(q.quotient, radius);
    for (int k = 0; k <= radius; ++k) leg.spheres.push_back(ball->sphere_size(k));
    leg.collapse_radius = -1;
    for (int k = 0; k <= radius; ++k) {
      if (leg.spheres[k] < free_spheres[k]) {
        leg.collapse_radius = k;
        break;
      }
    }
    leg.estimate = growth_estimate(*ball).reported;
    // element-for-element comparison against the free ball when no sphere
    // collapsed
    leg.equals_free_ball = leg.collapse_radius < 0;
    if (leg.equals_free_ball && free_ball) {
      for (uint32_t e = 0; e < ball->size() && leg.equals_free_ball; ++e) {
        auto a = ball->word_of(e);
        auto b = free_ball->word_of(e);
        if (!std::equal(a.begin(), a.end(), b.begin(), b.end())) leg.equals_free_ball = false;
      }
    }
  } catch (const std::exception& ex) {
    leg.error = ex.what();
  }
  return leg;
}

}  // namespace

ExperimentResult theorem_a_experiment(std::shared_ptr<const Presentation> base, const Word& h,
                                      const std::vector<int>& n_list, int radius, int threads) {
  if (!base || base->kind() != PresentationKind::Free)
    throw input_error("theorem_a_experiment: base must be free");
  ExperimentResult res;
  res.h = free_reduce(base->gens(), h);
  res.radius = radius;

  auto free_ball = Ball::build(base, radius);
  for (int k = 0; k <= radius; ++k) res.free_spheres.push_back(free_ball->sphere_size(k));
  res.free_estimate = growth_estimate(*free_ball).reported;

  // independent legs in parallel
  res.per_n.resize(n_list.size());
  parallel_for(n_list.size(), threads, [&](size_t i) {
    res.per_n[i] = run_leg(base, res.h, n_list[i], radius, res.free_spheres, free_ball.get());
  });

  res.estimates_nondecreasing = true;
  for (size_t i = 1; i < res.per_n.size(); ++i) {
    if (!res.per_n[i].error.empty() || !res.per_n[i - 1].error.empty()) continue;
    if (res.per_n[i].estimate < res.per_n[i - 1].estimate - 1e-12)
      res.estimates_nondecreasing = false;
  }
  return res;
}

}  // namespace relgrowth
