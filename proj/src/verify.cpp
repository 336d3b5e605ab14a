#include "relgrowth/verify.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "relgrowth/boundary.hpp"
#include "relgrowth/floyd.hpp"
#include "relgrowth/quotient.hpp"

namespace relgrowth {

namespace {

Word random_word(const GeneratorSet& gs, std::mt19937& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<size_t> pick(0, gs.size() - 1);
  Word w;
  int n = len(rng);
  for (int i = 0; i < n; ++i) w.letters.push_back((Gen)pick(rng));
  return w;
}

CheckResult check_free_reduction_algebra(unsigned seed) {
  CheckResult res{"free-reduction-algebra", true, ""};
  GeneratorSet gs = GeneratorSet::pairs({"a", "b", "c"});
  std::mt19937 rng(seed);
  for (int trial = 0; trial < 2000 && res.pass; ++trial) {
    Word w = random_word(gs, rng, 24);
    Word r = free_reduce(gs, w);
    if (!is_freely_reduced(gs, r)) res.pass = false;
    if (r.size() > w.size()) res.pass = false;
    if (!(free_reduce(gs, r) == r)) res.pass = false;  // idempotent
    Word ww = concat_reduced(gs, w, inverse_word(gs, w));
    if (!ww.empty()) res.pass = false;  // w w^-1 = 1
    auto [core, conj] = cyclic_reduce(gs, r);
    Word back = concat_reduced(gs, concat_reduced(gs, conj, core), inverse_word(gs, conj));
    if (!(back == r)) res.pass = false;
  }
  res.detail = "2000 random words over F_3";
  return res;
}

CheckResult check_separated_net_bound(unsigned /*seed*/) {
  CheckResult res{"separated-net-bound", true, ""};
  auto f2 = Presentation::free_group(GeneratorSet::pairs({"a", "b"}));
  auto ball = Ball::build(f2, 7);
  std::ostringstream detail;
  for (int k = 1; k <= 4 && res.pass; ++k) {
    std::vector<uint32_t> sphere;
    for (uint32_t e = ball->sphere_begin(k); e < ball->sphere_end(k); ++e)
      sphere.push_back(e);
    for (int C = 1; C <= 3 && res.pass; ++C) {
      auto net = separated_net(sphere, C, *ball);
      // maximality and separation
      for (size_t i = 0; i < net.size() && res.pass; ++i)
        for (size_t j = i + 1; j < net.size(); ++j)
          if (ball->pair_distance(net[i], net[j]) <= C) res.pass = false;
      uint64_t bc = ball->ball_count(C);
      if ((uint64_t)net.size() * bc < sphere.size()) res.pass = false;
    }
  }
  res.detail = "F_2 spheres 1..4, C in 1..3: #Z * #B(1,C) >= #Y";
  return res;
}

CheckResult check_floyd_basepoint_inequality(unsigned seed) {
  CheckResult res{"floyd-basepoint-inequality", true, ""};
  auto f2 = Presentation::free_group(GeneratorSet::pairs({"a", "b"}));
  auto ball = Ball::build(f2, 6);
  const double lambda = 2.0;
  uint32_t v1 = 0;
  uint32_t v2 = ball->require(parse_word(f2->gens(), "a"));
  std::mt19937 rng(seed);
  std::uniform_int_distribution<uint32_t> pick(0, ball->size() - 1);
  int tested = 0;
  for (int trial = 0; trial < 400 && res.pass; ++trial) {
    uint32_t x = pick(rng), y = pick(rng);
    if (x == y) continue;
    auto r1 = floyd_distance(x, y, v1, lambda, *ball);
    auto r2 = floyd_distance(x, y, v2, lambda, *ball);
    if (!r1.certified || !r2.certified) continue;
    double ratio = r2.hi / r1.hi;
    int dvv = ball->pair_distance(v1, v2);
    if (ratio < std::pow(lambda, -dvv) - 1e-12 || ratio > std::pow(lambda, dvv) + 1e-12)
      res.pass = false;
    ++tested;
  }
  res.detail = std::to_string(tested) + " certified pairs in B(1,6), lambda=2, basepoints 1,a";
  return res;
}

CheckResult check_subgirth_equality(unsigned /*seed*/) {
  CheckResult res{"sub-girth-equality", true, ""};
  auto f2 = Presentation::free_group(GeneratorSet::pairs({"a", "b"}));
  Word h = parse_word(f2->gens(), "abAB");
  // (abAB)^3 at radius 5 and (abAB)^6 at radius 6: both sub-girth regimes
  for (auto [n, radius] : {std::pair{3, 5}, std::pair{6, 6}}) {
    PowerQuotient q = make_power_quotient(f2, h, n);
    auto qb = Ball::build(q.quotient, radius);
    for (int k = 0; k <= radius; ++k) {
      uint64_t expect = k == 0 ? 1 : 4ull * (uint64_t)std::llround(std::pow(3.0, k - 1));
      if (qb->sphere_size(k) != expect) res.pass = false;
    }
  }
  res.detail = "(abAB)^3 r<=5 and (abAB)^6 r<=6 match free sphere counts";
  return res;
}

CheckResult check_filter_monotonicity(unsigned /*seed*/) {
  CheckResult res{"filter-monotonicity", true, ""};
  auto f2 = Presentation::free_group(GeneratorSet::pairs({"a", "b"}));
  auto ball = Ball::build(f2, 6);
  Word root = parse_word(f2->gens(), "a");
  auto kept_l2 = language_filter(*ball, {root, 2, 0});
  auto kept_l3 = language_filter(*ball, {root, 3, 0});
  auto kept_e1 = language_filter(*ball, {root, 3, 1});
  // kept(L) grows with L; kept(eps) shrinks as eps grows
  auto subset = [](const std::vector<uint32_t>& small, const std::vector<uint32_t>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
  };
  if (!subset(kept_l2, kept_l3)) res.pass = false;
  if (!subset(kept_e1, kept_l3)) res.pass = false;
  res.detail = "kept(L=2) subset of kept(L=3); kept(eps=1) subset of kept(eps=0), root a";
  return res;
}

CheckResult check_cylinder_additivity(unsigned /*seed*/) {
  CheckResult res{"cylinder-additivity", true, ""};
  const int k = 2;
  GeneratorSet gs = GeneratorSet::pairs({"a", "b"});
  // every reduced prefix up to length 8: mass([w]) = sum of extensions
  std::vector<Word> level{Word({}, true)};
  for (int len = 0; len < 8 && res.pass; ++len) {
    std::vector<Word> next;
    for (const Word& w : level) {
      Rational total(0);
      Gen blocked = w.empty() ? kNoGen : gs.inverse(w.letters.back());
      for (size_t s = 0; s < gs.size(); ++s) {
        if ((Gen)s == blocked) continue;
        Word ext = w;
        ext.letters.push_back((Gen)s);
        ext.reduced = true;
        total += cylinder_mass(ext, k);
        next.push_back(std::move(ext));
      }
      if (!(total == cylinder_mass(w, k))) res.pass = false;
    }
    level = std::move(next);
  }
  res.detail = "mass([w]) equals the sum over reduced one-letter extensions, |w| <= 8";
  return res;
}

}  // namespace

std::vector<CheckResult> run_verify_all(unsigned seed, int /*threads*/) {
  std::vector<CheckResult> out;
  out.push_back(check_free_reduction_algebra(seed));
  out.push_back(check_separated_net_bound(seed));
  out.push_back(check_floyd_basepoint_inequality(seed));
  out.push_back(check_subgirth_equality(seed));
  out.push_back(check_filter_monotonicity(seed));
  out.push_back(check_cylinder_additivity(seed));
  return out;
}

bool report_verify_all(std::ostream& out, unsigned seed, int threads) {
  bool all = true;
  for (const auto& r : run_verify_all(seed, threads)) {
    out << (r.pass ? "ok   " : "FAIL ") << r.name << " - " << r.detail << "\n";
    all = all && r.pass;
  }
  return all;
}

}  // namespace relgrowth
