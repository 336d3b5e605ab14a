#include "relgrowth/boundary.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace relgrowth {

namespace {

int check_rank(const Word& prefix, int k, const GeneratorSet* gs) {
  if (k < 2) throw input_error("boundary model needs rank k >= 2");
  if (gs) {
    if (!prefix.empty() && !is_freely_reduced(*gs, prefix))
      throw input_error("cylinder prefix must be freely reduced");
  } else {
    // standard pair layout: inverse of symbol 2i is 2i+1
    for (size_t i = 0; i < prefix.size(); ++i) {
      if (prefix.letters[i] >= 2 * k) throw input_error("cylinder prefix: symbol out of rank");
      if (i + 1 < prefix.size() && (prefix.letters[i] ^ 1u) == prefix.letters[i + 1])
        throw input_error("cylinder prefix must be freely reduced");
    }
  }
  return 2 * k - 1;
}

size_t lcp_len(std::span<const Gen> a, std::span<const Gen> b) {
  size_t n = std::min(a.size(), b.size());
  size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

}  // namespace

Rational cylinder_mass(const Word& prefix, int k) {
  int q = check_rank(prefix, k, nullptr);
  if (prefix.empty()) return Rational(1);
  return Rational(1, 2 * k) * Rational::pow(Rational(1, q), (int)prefix.size() - 1);
}

Rational cylinder_mass_from(const Word& base, const Word& prefix, int k,
                            const GeneratorSet& gs) {
  int q = check_rank(prefix, k, &gs);
  if (prefix.empty()) return Rational(1);
  size_t l = lcp_len(base.letters, prefix.letters);
  if (l < prefix.size()) {
    // base outside the closed subtree at `prefix`
    int d = (int)(base.size() - l) + (int)(prefix.size() - l);
    return Rational(1, 2 * k) * Rational::pow(Rational(1, q), d - 1);
  }
  // base inside: complement of the branch through prefix's parent edge
  int d_parent = (int)(base.size() - prefix.size()) + 1;
  return Rational(1) - Rational(1, 2 * k) * Rational::pow(Rational(1, q), d_parent - 1);
}

namespace {

// Recursive exact decomposition of a (partial) shadow into cylinders.
// Rays are infinite reduced words; a prefix node is decided IN when every
// extension belongs to the shadow, OUT when none does, and split otherwise.
struct ShadowWalker {
  const Ball& b;
  const GeneratorSet& gs;
  const PeripheralContext* ctx;
  ShadowKind kind;
  uint32_t g;
  std::span<const Gen> gword;
  int r, eps, R;
  int horizon;
  ShadowDecomposition* out;

  std::vector<Gen> prefix;
  std::vector<uint32_t> path;     // elements of the prefix vertices
  std::vector<int> dist_to_g;     // d(prefix vertex, g) per position

  void run() {
    path.push_back(0);
    dist_to_g.push_back((int)gword.size());
    bool crossed0 = dist_to_g[0] <= r;
    std::vector<size_t> pending;
    if (kind == ShadowKind::Partial && dist_to_g[0] <= 2 * R) pending.push_back(0);
    visit(crossed0, false, std::move(pending));
  }

  bool is_proper_prefix_of_target() const {
    size_t n = prefix.size();
    return n < gword.size() && std::equal(prefix.begin(), prefix.end(), gword.begin());
  }

  void emit() {
    out->cylinders.push_back(Word(prefix, true));
    out->deepest_prefix = std::max(out->deepest_prefix, (int)prefix.size());
  }

  // pending: positions with d(v, g) <= 2R whose transition window is not
  // yet complete. Returns with all state restored.
  void visit(bool crossed, bool transition_found, std::vector<size_t> pending) {
    out->deepest_prefix = std::max(out->deepest_prefix, (int)prefix.size());
    // resolve pendings whose windows closed at the current prefix length;
    // vertices within R of the ray start never qualify (strict notion)
    if (kind == ShadowKind::Partial && !transition_found) {
      std::vector<size_t> still;
      for (size_t i : pending) {
        if ((long)i <= (long)R) continue;
        if (i + (size_t)R <= prefix.size()) {
          if (ctx->ray_vertex_is_transition(path, i, eps, R)) transition_found = true;
        } else {
          still.push_back(i);
        }
        if (transition_found) break;
      }
      pending = transition_found ? std::vector<size_t>{} : std::move(still);
    }

    const bool target_prefix = is_proper_prefix_of_target();
    const int d_end = dist_to_g.back();

    if (kind != ShadowKind::Partial) {
      if (crossed) { emit(); return; }
      if (!target_prefix) return;  // distance to g only grows from here
    } else {
      if (crossed && transition_found) { emit(); return; }
      const bool can_cross = crossed || target_prefix;
      const bool can_new_candidates = target_prefix || d_end < 2 * R;
      if (!can_cross) return;
      if (!transition_found && pending.empty() && !can_new_candidates) return;
    }

    if ((int)prefix.size() >= horizon)
      throw range_error("shadow decomposition undecided at the decision horizon");

    const Gen blocked = prefix.empty() ? kNoGen : gs.inverse(prefix.back());
    for (size_t ri = 0; ri < gs.size(); ++ri) {
      Gen s = gs.nth_by_rank(ri);
      if (s == blocked) continue;
      uint32_t next = b.mul(path.back(), s);
      if (next == Ball::npos)
        throw range_error("shadow decomposition needs prefixes beyond the ball radius");
      prefix.push_back(s);
      path.push_back(next);
      // tree distance update: one step toward g iff still on its geodesic
      bool on_target = prefix.size() <= gword.size() &&
                       std::equal(prefix.begin(), prefix.end(), gword.begin());
      dist_to_g.push_back(on_target ? d_end - 1 : d_end + 1);
      bool crossed2 = crossed || dist_to_g.back() <= r;
      auto pending2 = pending;
      if (kind == ShadowKind::Partial && !transition_found && dist_to_g.back() <= 2 * R)
        pending2.push_back(prefix.size() - 1 + 1);  // vertex index = new path top
      visit(crossed2, transition_found, std::move(pending2));
      prefix.pop_back();
      path.pop_back();
      dist_to_g.pop_back();
    }
  }
};

}  // namespace

ShadowDecomposition shadow_decompose(uint32_t g, int r, const Ball& b, ShadowKind kind, int eps,
                                     int R, const PeripheralContext* ctx, int horizon_slack) {
  if (!b.tree_metric())
    throw input_error("shadow_decompose: exact boundary model requires a free presentation");
  if (kind == ShadowKind::Partial && ctx == nullptr)
    throw input_error("partial shadow needs a peripheral context");
  if (r < 0 || eps < 0 || R < 0) throw input_error("shadow parameters must be >= 0");

  ShadowDecomposition out;
  out.target = g;
  out.r = r;
  out.eps = eps;
  out.R = R;
  out.kind = kind;
  out.horizon = b.depth(g) + r + 3 * R + 1 + horizon_slack;

  ShadowWalker walker{b,   b.presentation().gens(), ctx, kind, g, b.word_of(g),
                      r,   eps,
                      R,   out.horizon,
                      &out, {}, {}, {}};
  walker.run();

  out.mass = Rational(0);
  int k = (int)b.presentation().gens().size() / 2;
  for (const Word& c : out.cylinders) out.mass += cylinder_mass(c, k);
  return out;
}

long busemann(const Word& x, const Word& y, const Word& xi_prefix, int k,
              const GeneratorSet& gs) {
  check_rank(xi_prefix, k, &gs);
  if (xi_prefix.empty()) throw input_error("busemann: empty ray prefix");
  auto term = [&](const Word& w) {
    size_t l = lcp_len(w.letters, xi_prefix.letters);
    if (l == xi_prefix.size() && w.size() > xi_prefix.size())
      throw range_error("busemann: ray prefix too short to pin the projection",
                        (long)w.size() + 1);
    // b(w) = d(w, proj) - d(1, proj) = (|w| - l) - l
    return (long)w.size() - 2 * (long)l;
  };
  return term(x) - term(y);
}

ShadowLemmaReport verify_shadow_lemma(const Ball& b, int r, int k, int max_depth,
                                      std::vector<ShadowRow>* rows) {
  ShadowLemmaReport rep;
  rep.r = r;
  bool first = true;
  Rational q(2 * k - 1);
  for (int d = 1; d <= max_depth; ++d) {
    for (uint32_t g = b.sphere_begin(d); g < b.sphere_end(d); ++g) {
      auto dec = shadow_decompose(g, r, b, ShadowKind::Full);
      Rational ratio = dec.mass * Rational::pow(q, d);
      if (rows) rows->push_back({g, d, dec.mass, ratio});
      if (first || ratio < rep.min_ratio) rep.min_ratio = ratio;
      if (first || rep.max_ratio < ratio) rep.max_ratio = ratio;
      first = false;
      ++rep.count;
    }
  }
  if (rep.count && rep.min_ratio == rep.max_ratio) rep.constant_ratio = rep.min_ratio;
  return rep;
}

PartialShadowLemmaReport verify_partial_shadow_lemma(const Ball& b, const PeripheralContext& ctx,
                                                     int r, int eps, int R, int k, int max_depth,
                                                     std::vector<ShadowRow>* rows) {
  PartialShadowLemmaReport rep;
  rep.r = r;
  rep.eps = eps;
  rep.R = R;
  rep.horizon_stable = true;
  bool first = true;
  Rational q(2 * k - 1);
  for (int d = 0; d <= max_depth; ++d) {
    for (uint32_t g = b.sphere_begin(d); g < b.sphere_end(d); ++g) {
      auto dec = shadow_decompose(g, r, b, ShadowKind::Partial, eps, R, &ctx);
      auto dec1 = shadow_decompose(g, r, b, ShadowKind::Partial, eps, R, &ctx, 1);
      auto dec2 = shadow_decompose(g, r, b, ShadowKind::Partial, eps, R, &ctx, 2);
      if (!(dec.mass == dec1.mass) || !(dec.mass == dec2.mass)) rep.horizon_stable = false;
      Rational ratio = dec.mass * Rational::pow(q, d);
      if (rows) rows->push_back({g, d, dec.mass, ratio});
      if (first || ratio < rep.min_ratio) rep.min_ratio = ratio;
      if (first || rep.max_ratio < ratio) rep.max_ratio = ratio;
      first = false;
      ++rep.count;
    }
  }
  return rep;
}

namespace {

void conformality_cases(const Ball& b, std::span<const Gen> gword, int k, const Word& prefix,
                        int max_prefix_len, ConformalityReport* rep) {
  const GeneratorSet& gs = b.presentation().gens();
  size_t l = lcp_len(gword, prefix.letters);
  if (l == prefix.size() && gword.size() > prefix.size()) {
    // projection of g varies over this cylinder: split finer
    const Gen blocked = prefix.empty() ? kNoGen : gs.inverse(prefix.letters.back());
    for (size_t ri = 0; ri < gs.size(); ++ri) {
      Gen s = gs.nth_by_rank(ri);
      if (s == blocked) continue;
      Word finer = prefix;
      finer.letters.push_back(s);
      conformality_cases(b, gword, k, finer, max_prefix_len, rep);
    }
    return;
  }
  ConformalityCase c;
  c.prefix = prefix;
  // B_xi(1, g) = -(d(g, p) - d(1, p)) = 2 lcp - |g| for every xi in [prefix]
  c.busemann_value = 2 * (long)l - (long)gword.size();
  Word base(std::vector<Gen>(gword.begin(), gword.end()), true);
  Rational mu1 = cylinder_mass(prefix, k);
  Rational mug = cylinder_mass_from(base, prefix, k, gs);
  c.ratio = mu1 / mug;
  c.expected = Rational::pow(Rational(2 * k - 1), -(int)c.busemann_value);
  c.exact = c.ratio == c.expected;
  if (!c.exact) rep->all_exact = false;
  rep->cases.push_back(std::move(c));
}

}  // namespace

ConformalityReport verify_conformality(const Ball& b, uint32_t g, int k, int max_prefix_len) {
  if (!b.tree_metric()) throw input_error("verify_conformality: free presentations only");
  ConformalityReport rep;
  rep.g = g;
  const GeneratorSet& gs = b.presentation().gens();
  // every reduced prefix up to the requested length, splitting where the
  // Busemann value is non-constant
  std::vector<Word> stack{Word({}, true)};
  for (int len = 1; len <= max_prefix_len; ++len) {
    std::vector<Word> next;
    for (const Word& p : stack) {
      const Gen blocked = p.empty() ? kNoGen : gs.inverse(p.letters.back());
      for (size_t ri = 0; ri < gs.size(); ++ri) {
        Gen s = gs.nth_by_rank(ri);
        if (s == blocked) continue;
        Word q = p;
        q.letters.push_back(s);
        next.push_back(q);
      }
    }
    for (const Word& p : next) conformality_cases(b, b.word_of(g), k, p, max_prefix_len, &rep);
    stack = std::move(next);
  }
  return rep;
}

double patterson_estimate(const Word& prefix, int k, double s, int N, const Ball& b) {
  check_rank(prefix, k, nullptr);
  const double q = 2.0 * k - 1.0;
  // finite Patterson sum over B(1, N) in F_k: the numerator counts the
  // orbit points whose canonical word extends the prefix
  (void)b;
  double denom = 1.0;
  for (int j = 1; j <= N; ++j) denom += 2.0 * k * std::pow(q, j - 1) * std::exp(-s * j);
  double numer = 0.0;
  for (int j = (int)prefix.size(); j <= N; ++j)
    numer += std::pow(q, j - (int)prefix.size()) * std::exp(-s * j);
  if (prefix.empty()) return 1.0;
  return numer / denom;
}

}  // namespace relgrowth
