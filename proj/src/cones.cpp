#include "relgrowth/cones.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "relgrowth/parallel.hpp"

namespace relgrowth {

namespace {

// Element indices along one geodesic word for h.
std::vector<uint32_t> path_of_word(const Word& w, const Ball& b) {
  std::vector<uint32_t> path{0};
  uint32_t cur = 0;
  for (Gen g : w.letters) {
    cur = b.mul(cur, g);
    path.push_back(cur);
  }
  return path;
}

bool geodesic_qualifies(const std::vector<uint32_t>& path, uint32_t g, int r, int eps, int R,
                        bool clause1, const PeripheralContext& ctx) {
  const Ball& b = ctx.ball();
  bool meets = false;
  for (uint32_t v : path)
    if (b.pair_distance(v, g) <= r) {
      meets = true;
      break;
    }
  if (!meets) return false;
  if (clause1) return true;
  for (size_t i = 0; i < path.size(); ++i) {
    if (b.pair_distance(path[i], g) > 2 * R) continue;
    if (ctx.strict_path_transition(path, i, eps, R)) return true;
  }
  return false;
}

}  // namespace

bool in_partial_cone(uint32_t h, uint32_t g, int r, int eps, int R,
                     const PeripheralContext& ctx) {
  const Ball& b = ctx.ball();
  const bool clause1 = b.depth(h) <= b.depth(g) + 2 * R;
  constexpr size_t kGeodesicCap = 100000;
  std::vector<Word> geos;
  b.all_geodesics(h, geos, kGeodesicCap);
  if (geos.size() >= kGeodesicCap)
    throw range_error("partial cone: too many geodesics to enumerate exhaustively");
  for (const Word& w : geos) {
    auto path = path_of_word(w, b);
    if (geodesic_qualifies(path, g, r, eps, R, clause1, ctx)) return true;
  }
  return false;
}

std::vector<uint32_t> partial_cone_members(uint32_t g, int r, int eps, int R,
                                           const PeripheralContext& ctx, int n, int delta) {
  const Ball& b = ctx.ball();
  AnnulusSet ann = annulus(g, n, delta, b);
  std::vector<uint32_t> out;
  ann.for_each([&](uint32_t h) {
    if (in_partial_cone(h, g, r, eps, R, ctx)) out.push_back(h);
  });
  return out;
}

namespace {

void put_u32(std::string& s, uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back((char)((v >> (8 * i)) & 0xFF));
}

}  // namespace

std::string PartialConeType::key() const {
  std::string s;
  s.reserve((level_data.size() + f_data.size()) * 4 + 1);
  for (uint32_t v : level_data) put_u32(s, v);
  s.push_back('|');
  for (uint32_t v : f_data) put_u32(s, v);
  return s;
}

std::string PartialConeType::cone_key() const {
  std::string s;
  s.reserve(level_data.size() * 4);
  for (uint32_t v : level_data) put_u32(s, v);
  return s;
}

PartialConeType partial_cone_type(uint32_t g, int eps, int R, const PeripheralContext& ctx,
                                  int C) {
  const Ball& b = ctx.ball();
  const GeneratorSet& gs = b.presentation().gens();
  PartialConeType t;

  Word gw = b.word(g);
  Word ginv = inverse_word(gs, gw);

  for (uint32_t h : b.neighborhood(g, 2 * R + 1)) {
    if (!in_partial_cone(h, g, /*r=*/0, eps, R, ctx)) continue;
    Word rel = concat_reduced(gs, ginv, b.word(h));
    t.level_data.push_back(b.require(rel));
  }
  std::sort(t.level_data.begin(), t.level_data.end());

  for (uint32_t f : b.neighborhood(0, 2 * C + 1)) {
    uint32_t gf = b.mul_word(g, b.word_of(f));
    if (gf == Ball::npos)
      throw range_error("partial_cone_type: F_g horizon exceeds ball radius");
    if (b.depth(gf) <= b.depth(g)) t.f_data.push_back(f);
  }
  std::sort(t.f_data.begin(), t.f_data.end());
  return t;
}

TypeCensus enumerate_types(const PeripheralContext& ctx, int eps, int R, int C, int first_sphere,
                           int last_sphere, int threads) {
  const Ball& b = ctx.ball();
  TypeCensus census;
  census.eps = eps;
  census.R = R;
  census.C = C;
  census.first_sphere = first_sphere;

  std::map<std::string, int> cone_ids;
  for (int k = first_sphere; k <= last_sphere; ++k) {
    const uint32_t lo = b.sphere_begin(k), hi = b.sphere_end(k);
    std::vector<std::pair<std::string, std::string>> keys(hi - lo);
    parallel_for(hi - lo, threads, [&](size_t i) {
      auto t = partial_cone_type(lo + (uint32_t)i, eps, R, ctx, C);
      keys[i] = {t.cone_key(), t.key()};
    });
    std::set<std::string> sphere_cones, sphere_certs;
    for (auto& [cone, cert] : keys) {
      sphere_certs.insert(std::move(cert));
      sphere_cones.insert(cone);
      cone_ids.emplace(std::move(cone), (int)cone_ids.size());
    }
    census.types_per_sphere.push_back(sphere_cones.size());
    census.certificates_per_sphere.push_back(sphere_certs.size());
    census.cumulative_types.push_back(cone_ids.size());
  }
  size_t m = census.types_per_sphere.size();
  census.stabilized =
      m >= 2 && census.types_per_sphere[m - 1] == census.types_per_sphere[m - 2];
  return census;
}

CompanionCone companion_cone(uint32_t g, int search_r, int eps, int R, int delta,
                             const PeripheralContext& ctx, int horizon) {
  const Ball& b = ctx.ball();
  CompanionCone best;
  // the lemma pins g' = 1 for g = 1; search_r = 0 degenerates to g itself
  std::vector<uint32_t> candidates;
  if (g == 0 || search_r == 0)
    candidates = {g};
  else
    candidates = b.neighborhood(g, search_r);

  const double gamma_hat = growth_estimate(b).reported;
  best.score = -1.0;
  for (uint32_t cand : candidates) {
    std::vector<size_t> counts;
    double score = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= horizon; ++n) {
      size_t c = partial_cone_members(cand, 0, eps, R, ctx, n, delta).size();
      counts.push_back(c);
      score = std::min(score, (double)c * std::exp(-gamma_hat * n));
    }
    if (score > best.score) {
      best.score = score;
      best.companion = cand;
      best.counts = std::move(counts);
    }
  }
  return best;
}

}  // namespace relgrowth
