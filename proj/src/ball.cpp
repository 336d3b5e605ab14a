#include "relgrowth/ball.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <deque>
#include <istream>
#include <ostream>

namespace relgrowth {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

uint64_t Ball::sphere_size(int k) const {
  if (k < 0 || k > radius_) return 0;
  return sphere_start_[k + 1] - sphere_start_[k];
}

uint64_t Ball::ball_count(int k) const {
  if (k < 0) return 0;
  k = std::min(k, radius_);
  return sphere_start_[k + 1];
}

Word Ball::word(uint32_t e) const {
  auto s = word_of(e);
  return Word(std::vector<Gen>(s.begin(), s.end()), true);
}

bool Ball::syntactic_level(int k) const {
  switch (pres_->kind()) {
    case PresentationKind::Free:
      return true;
    case PresentationKind::FreeAlias:
      return false;
    case PresentationKind::OneRelatorPower:
      return 2 * k <= pres_->girth_bound();
    case PresentationKind::SmallCancellation:
      // Greendlinger: nontrivial kernel words are longer than half the
      // shortest relator
      return 4 * k < pres_->min_relator_length();
    case PresentationKind::Generic:
      return true;  // free-reduction model; exactness tracked separately
  }
  return false;
}

std::string Ball::residue_key(const std::vector<int>& residue) const {
  std::string key;
  key.reserve(residue.size() * 2);
  for (int v : residue) {
    key.push_back((char)(v & 0xFF));
    key.push_back((char)((v >> 8) & 0xFF));
  }
  return key;
}

std::vector<int> Ball::ab_of(uint32_t e) const {
  int dim = pres_->gens().ab_dim();
  std::vector<int> v(dim);
  for (int c = 0; c < dim; ++c) v[c] = ab_[(size_t)e * dim + c];
  return v;
}

void Ball::push_element(std::span<const Gen> word, int d, uint32_t parent, Gen via) {
  uint32_t idx = size();
  bytes_.insert(bytes_.end(), word.begin(), word.end());
  offsets_.push_back((uint32_t)bytes_.size());
  depth_.push_back((uint8_t)d);
  last_letters_.push_back(0);
  for (uint32_t i = 0; i < gens_count_; ++i) adj_.push_back(npos);
  if (parent != npos) {
    adj_[(size_t)parent * gens_count_ + via] = idx;
    adj_[(size_t)idx * gens_count_ + pres_->gens().inverse(via)] = parent;
    last_letters_[idx] |= 1ull << via;
  }
  if (needs_oracle_) {
    const GeneratorSet& gs = pres_->gens();
    int dim = gs.ab_dim();
    if (parent == npos) {
      ab_.insert(ab_.end(), dim, 0);
    } else {
      for (int c = 0; c < dim; ++c) ab_.push_back(ab_[(size_t)parent * dim + c]);
      ab_[(size_t)idx * dim + gs.ab_coord(via)] += gs.ab_sign(via);
      int c = gs.ab_coord(via);
      if (gs.ab_coord_is_mod2(c))
        ab_[(size_t)idx * dim + c] = (int16_t)(((ab_[(size_t)idx * dim + c] % 2) + 2) % 2);
    }
    std::vector<int> v = ab_of(idx);
    buckets_[residue_key(pres_->ab_residue(v))].push_back(idx);
  }
}

std::optional<uint32_t> Ball::oracle_scan(const Word& w, const std::vector<int>& ab, int min_depth,
                                          int max_depth) const {
  auto it = buckets_.find(residue_key(pres_->ab_residue(ab)));
  if (it == buckets_.end()) return std::nullopt;
  for (uint32_t e : it->second) {
    int d = depth_[e];
    if (d < min_depth || d > max_depth) continue;
    oracle_calls_.fetch_add(1, std::memory_order_relaxed);
    if (elements_equal(*pres_, w, word(e))) return e;
  }
  return std::nullopt;
}

std::shared_ptr<Ball> Ball::build(std::shared_ptr<const Presentation> pres, int radius,
                                  const Limits& limits) {
  if (radius < 0) throw input_error("ball radius must be >= 0");
  auto ball = std::shared_ptr<Ball>(new Ball());
  Ball& b = *ball;
  b.pres_ = pres;
  b.radius_ = radius;
  b.gens_count_ = (uint32_t)pres->gens().size();
  b.tree_ = pres->kind() == PresentationKind::Free;
  b.needs_oracle_ = pres->kind() == PresentationKind::FreeAlias ||
                    pres->kind() == PresentationKind::OneRelatorPower ||
                    pres->kind() == PresentationKind::SmallCancellation;
  b.exact_ = pres->kind() != PresentationKind::Generic ||
             (pres->relators().empty() || 2 * radius < pres->min_relator_length());
  b.lateral_ = false;
  for (const auto& r : pres->relators())
    if (r.size() % 2 == 1) b.lateral_ = true;

  const GeneratorSet& gs = pres->gens();
  b.offsets_.push_back(0);
  b.sphere_start_ = {0};
  b.push_element({}, 0, npos, 0);
  b.sphere_start_.push_back(1);

  const double t0 = now_seconds();
  std::vector<Gen> by_rank(gs.size());
  for (size_t i = 0; i < gs.size(); ++i) by_rank[i] = gs.nth_by_rank(i);

  for (int k = 1; k <= radius; ++k) {
    const bool syntactic = !b.needs_oracle_ || b.syntactic_level(k);
    const uint32_t lo = b.sphere_start_[k - 1], hi = b.sphere_start_[k];
    std::vector<Gen> wc;
    for (uint32_t g = lo; g < hi; ++g) {
      if (b.size() > limits.max_elements || now_seconds() - t0 > limits.max_seconds) {
        // truncate to the last complete sphere and report
        int done = k - 1;
        b.bytes_.resize(b.offsets_[b.sphere_start_[k]]);
        uint32_t cut = b.sphere_start_[k];
        b.offsets_.resize(cut + 1);
        b.depth_.resize(cut);
        b.last_letters_.resize(cut);
        b.adj_.resize((size_t)cut * b.gens_count_);
        for (auto& a : b.adj_)
          if (a != npos && a >= cut) a = npos;
        if (b.needs_oracle_) {
          b.ab_.resize((size_t)cut * gs.ab_dim());
          for (auto& [key, vec] : b.buckets_)
            vec.erase(std::remove_if(vec.begin(), vec.end(), [&](uint32_t e) { return e >= cut; }),
                      vec.end());
        }
        b.sphere_start_.resize(done + 2);
        b.radius_ = done;
        throw ball_budget_error("ball build budget exceeded at radius " + std::to_string(k),
                                done, ball);
      }
      // copy: the arena reallocates as elements are appended
      auto gw_span = b.word_of(g);
      const std::vector<Gen> gw(gw_span.begin(), gw_span.end());
      const Gen last = gw.empty() ? kNoGen : gw.back();
      for (Gen s : by_rank) {
        if (b.mul(g, s) != npos) continue;  // down-edge or already matched
        if (last != kNoGen && gs.inverse(last) == s) continue;  // handled at discovery
        if (syntactic) {
          wc.assign(gw.begin(), gw.end());
          wc.push_back(s);
          b.push_element(wc, k, g, s);
          continue;
        }
        // oracle identification: candidate word has length k (no
        // syntactic cancellation here); true distance is in {k-2, k-1, k},
        // and k-2 matches were already wired by the reverse edge.
        Word cand;
        cand.letters.assign(gw.begin(), gw.end());
        cand.letters.push_back(s);
        cand.reduced = true;
        std::vector<int> ab = abelianization(gs, cand);
        auto hit = b.oracle_scan(cand, ab, k - 1, k);
        if (hit) {
          uint32_t e = *hit;
          b.adj_[(size_t)g * b.gens_count_ + s] = e;
          b.adj_[(size_t)e * b.gens_count_ + gs.inverse(s)] = g;
          if (b.depth_[e] == k) b.last_letters_[e] |= 1ull << s;
        } else {
          b.push_element(cand.letters, k, g, s);
        }
      }
    }
    b.sphere_start_.push_back(b.size());
    // sub-girth exactness: below half the kernel girth the quotient spheres
    // must reproduce the free counts
    if (pres->kind() == PresentationKind::OneRelatorPower && 2 * k < pres->girth_bound()) {
      uint64_t expect = gs.size();
      for (int i = 1; i < k; ++i) expect *= gs.size() - 1;
      if (b.sphere_size(k) != expect)
        throw std::logic_error("sub-girth sphere count mismatch at radius " + std::to_string(k));
    }
  }
  return ball;
}

uint32_t Ball::mul_word(uint32_t e, std::span<const Gen> w) const {
  uint32_t cur = e;
  for (size_t i = 0; i < w.size(); ++i) {
    uint32_t next = mul(cur, w[i]);
    if (next == npos) {
      // walk left the known horizon; resolve the whole product exactly
      Word full;
      auto base = word_of(e);
      full.letters.assign(base.begin(), base.end());
      full.letters.insert(full.letters.end(), w.begin(), w.end());
      auto r = locate(free_reduce(pres_->gens(), full));
      return r ? *r : npos;
    }
    cur = next;
  }
  return cur;
}

std::optional<uint32_t> Ball::locate(const Word& w0) const {
  Word w = w0.reduced ? w0 : free_reduce(pres_->gens(), w0);
  // canonical words are prefix-closed: walk the adjacency from the identity
  if ((int)w.size() <= radius_) {
    uint32_t cur = 0;
    bool ok = true;
    for (Gen g : w.letters) {
      cur = mul(cur, g);
      if (cur == npos) { ok = false; break; }
    }
    if (ok) return cur;
  }
  if (!needs_oracle_) {
    // free / generic model: reduced words are canonical
    return std::nullopt;
  }
  // sub-girth certainty: if w plus any in-ball representative is shorter
  // than every kernel word, a failed walk means the element is outside
  if (pres_->kind() == PresentationKind::OneRelatorPower &&
      (int)w.size() + radius_ <= pres_->girth_bound())
    return std::nullopt;
  std::vector<int> ab = abelianization(pres_->gens(), w);
  return oracle_scan(w, ab, 0, radius_);
}

uint32_t Ball::require(const Word& w) const {
  auto r = locate(w);
  if (!r) throw range_error("element outside ball of radius " + std::to_string(radius_));
  return *r;
}

int Ball::pair_distance(uint32_t a, uint32_t b) const {
  Word diff = concat_reduced(pres_->gens(), inverse_word(pres_->gens(), word(a)), word(b));
  if (tree_) return (int)diff.size();
  auto e = locate(diff);
  if (e) return depth_[*e];
  if (!exact_) return (int)diff.size();  // free-model distance, ball flagged
  throw range_error("pair distance exceeds ball radius", radius_ + 1);
}

int Ball::certified_reach(uint32_t v) const {
  // completeness of B(v, dist) enumeration: every member and every geodesic
  // to it must lie inside the stored ball
  if (!lateral_) return radius_ - depth_[v];
  return radius_ - 1 - depth_[v];
}

std::vector<uint32_t> Ball::neighborhood(uint32_t v, int dist) const {
  if (dist < 0) throw input_error("neighborhood: negative distance");
  if (dist > certified_reach(v))
    throw range_error("neighborhood not certifiable at this radius");
  std::vector<uint32_t> out{v};
  std::unordered_map<uint32_t, int> seen{{v, 0}};
  std::deque<uint32_t> queue{v};
  while (!queue.empty()) {
    uint32_t x = queue.front();
    queue.pop_front();
    int dx = seen[x];
    if (dx == dist) continue;
    for (uint32_t s = 0; s < gens_count_; ++s) {
      uint32_t y = mul(x, (Gen)s);
      if (y == npos) continue;
      if (seen.emplace(y, dx + 1).second) {
        out.push_back(y);
        queue.push_back(y);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void Ball::all_geodesics(uint32_t e, std::vector<Word>& out, size_t cap) const {
  if (e == 0) {
    out.push_back(Word({}, true));
    return;
  }
  const GeneratorSet& gs = pres_->gens();
  uint64_t mask = last_letters_[e];
  for (uint32_t t = 0; t < gens_count_ && out.size() < cap; ++t) {
    if (!(mask & (1ull << t))) continue;
    uint32_t prev = mul(e, gs.inverse((Gen)t));
    std::vector<Word> heads;
    all_geodesics(prev, heads, cap - out.size());
    for (auto& h : heads) {
      h.letters.push_back((Gen)t);
      out.push_back(std::move(h));
    }
  }
}

Word Ball::lexi_geodesic_greedy(uint32_t e) const {
  // minimal word by descent: min over last letters t of min-word(e t^-1) + t
  const GeneratorSet& gs = pres_->gens();
  std::unordered_map<uint32_t, Word> memo;
  auto rec = [&](auto&& self, uint32_t x) -> const Word& {
    auto it = memo.find(x);
    if (it != memo.end()) return it->second;
    Word best;
    if (x != 0) {
      uint64_t mask = last_letters_[x];
      bool have = false;
      for (uint32_t t = 0; t < gens_count_; ++t) {
        if (!(mask & (1ull << t))) continue;
        Word cand = self(self, mul(x, gs.inverse((Gen)t)));
        cand.letters.push_back((Gen)t);
        if (!have || lex_compare(gs, cand.letters, best.letters) < 0) {
          best = std::move(cand);
          have = true;
        }
      }
    }
    best.reduced = true;
    return memo.emplace(x, std::move(best)).first->second;
  };
  return rec(rec, e);
}

std::vector<uint32_t> Ball::canonical_path(uint32_t e) const {
  std::vector<uint32_t> path{0};
  uint32_t cur = 0;
  for (Gen g : word_of(e)) {
    cur = mul(cur, g);
    path.push_back(cur);
  }
  return path;
}

GrowthEstimate growth_estimate(const Ball& b) {
  if (b.radius() < 1) throw input_error("growth_estimate: radius must be >= 1");
  GrowthEstimate est;
  for (int n = 1; n <= b.radius(); ++n)
    est.per_radius_log.push_back(std::log((double)b.ball_count(n)) / n);
  for (int k = 1; k <= b.radius(); ++k)
    est.ratio_log.push_back(std::log((double)b.sphere_size(k) / (double)b.sphere_size(k - 1)));
  est.reported = est.ratio_log.back();
  est.method = "sphere-ratio@r=" + std::to_string(b.radius());
  return est;
}

namespace {

PoincareReport poincare_from_increments(std::vector<double> increments, double /*s*/) {
  PoincareReport rep;
  rep.method = "partial sums of exp(-s d); verdict from trailing increment ratios";
  double sum = 0.0;
  for (double inc : increments) {
    sum += inc;
    rep.partial_sums.push_back(sum);
  }
  size_t n = increments.size();
  if (n < 3) {
    rep.verdict = PoincareVerdict::Inconclusive;
    return rep;
  }
  double q = 1.0;
  int used = 0;
  for (size_t i = n - 3; i + 1 < n; ++i) {
    if (increments[i] <= 0.0) { used = -1; break; }
    q *= increments[i + 1] / increments[i];
    ++used;
  }
  if (used > 0) q = std::pow(q, 1.0 / used);
  const double tol = 1e-9;
  if (used < 0 || increments.back() <= 0.0)
    rep.verdict = PoincareVerdict::Converging;
  else if (q < 1.0 - tol)
    rep.verdict = PoincareVerdict::Converging;
  else if (q > 1.0 + tol)
    rep.verdict = PoincareVerdict::Diverging;
  else if (increments.back() > 1e-12 * std::max(1.0, rep.partial_sums.back()))
    rep.verdict = PoincareVerdict::Diverging;  // non-vanishing terms
  else
    rep.verdict = PoincareVerdict::Inconclusive;
  return rep;
}

}  // namespace

PoincareReport poincare_partial(const Ball& b, double s) {
  if (s < 0) throw input_error("poincare: s must be >= 0");
  std::vector<double> inc;
  for (int k = 0; k <= b.radius(); ++k)
    inc.push_back((double)b.sphere_size(k) * std::exp(-s * k));
  return poincare_from_increments(std::move(inc), s);
}

PoincareReport poincare_partial(const Ball& b, double s, std::span<const uint32_t> subset) {
  if (s < 0) throw input_error("poincare: s must be >= 0");
  std::vector<double> counts(b.radius() + 1, 0.0);
  for (uint32_t e : subset) counts[b.depth(e)] += 1.0;
  std::vector<double> inc;
  for (int k = 0; k <= b.radius(); ++k) inc.push_back(counts[k] * std::exp(-s * k));
  return poincare_from_increments(std::move(inc), s);
}

Word lexi_geodesic(uint32_t g, const Ball& b) {
  if (g >= b.size()) throw range_error("lexi_geodesic: element outside ball");
  return b.lexi_geodesic_greedy(g);
}

uint64_t AnnulusSet::size() const {
  uint64_t n = 0;
  for (int k = lo_sphere; k <= hi_sphere; ++k) n += ball->sphere_size(k);
  return n;
}

std::vector<uint32_t> AnnulusSet::members() const {
  std::vector<uint32_t> out;
  out.reserve(size());
  for_each([&](uint32_t e) { out.push_back(e); });
  return out;
}

AnnulusSet annulus(uint32_t g, int n, int delta, const Ball& b) {
  if (g >= b.size()) throw range_error("annulus: element outside ball");
  if (n < 0 || delta < 0) throw input_error("annulus: n, delta must be >= 0");
  int d = b.depth(g);
  int lo = delta == 0 ? d + n : d + n - delta;
  int hi = delta == 0 ? d + n : d + n + delta - 1;
  lo = std::max(lo, 0);
  if (hi > b.radius()) throw range_error("annulus: ball radius too small");
  AnnulusSet a;
  a.base = g;
  a.n = n;
  a.delta = delta;
  a.lo_sphere = lo;
  a.hi_sphere = hi;
  a.ball = &b;
  return a;
}

std::vector<uint32_t> separated_net(std::span<const uint32_t> members, int C, const Ball& b) {
  if (C < 1) throw input_error("separated_net: C must be >= 1");
  std::vector<uint32_t> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<uint32_t> net;
  for (uint32_t m : sorted) {
    bool ok = true;
    for (uint32_t z : net) {
      if (b.pair_distance(m, z) <= C) { ok = false; break; }
    }
    if (ok) net.push_back(m);
  }
  return net;
}

int dead_end_depth(uint32_t g, const Ball& b) {
  int d0 = b.depth(g);
  std::unordered_map<uint32_t, int> seen{{g, 0}};
  std::deque<uint32_t> queue{g};
  int deepest = 0;
  while (!queue.empty()) {
    uint32_t x = queue.front();
    queue.pop_front();
    int dx = seen[x];
    deepest = std::max(deepest, dx);
    for (uint32_t s = 0; s < b.presentation().gens().size(); ++s) {
      uint32_t y = b.mul(x, (Gen)s);
      if (y == Ball::npos) continue;
      if (seen.count(y)) continue;
      if (b.depth(y) > d0) return dx + 1;
      seen.emplace(y, dx + 1);
      queue.push_back(y);
    }
  }
  throw range_error("dead_end_depth undetermined within ball", deepest + 1);
}

std::vector<std::pair<int, int>> dead_end_depths_line(const std::vector<int>& steps, int max_abs) {
  // exact distances on Z with generators {+-steps}: BFS out to a safe margin
  int margin = 0;
  for (int s : steps) margin = std::max(margin, std::abs(s));
  int span = max_abs + margin * (max_abs + 2);
  std::vector<int> dist(2 * span + 1, -1);
  auto at = [&](int x) -> int& { return dist[x + span]; };
  std::deque<int> queue{0};
  at(0) = 0;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (int s : steps)
      for (int d : {s, -s}) {
        int y = x + d;
        if (y < -span || y > span || at(y) >= 0) continue;
        at(y) = at(x) + 1;
        queue.push_back(y);
      }
  }
  std::vector<std::pair<int, int>> out;
  for (int g = -max_abs; g <= max_abs; ++g) {
    // BFS from g until some position is strictly farther from 0 than g
    std::deque<std::pair<int, int>> q{{g, 0}};
    std::vector<bool> seen(2 * span + 1, false);
    seen[g + span] = true;
    int depth = -1;
    while (!q.empty()) {
      auto [x, dx] = q.front();
      q.pop_front();
      for (int s : steps)
        for (int d : {s, -s}) {
          int y = x + d;
          if (y < -span || y > span || seen[y + span]) continue;
          if (at(y) > at(g)) { depth = dx + 1; goto done; }
          seen[y + span] = true;
          q.emplace_back(y, dx + 1);
        }
    }
  done:
    out.emplace_back(g, depth);
  }
  return out;
}

void Ball::save(std::ostream& out) const {
  auto w64 = [&](uint64_t v) { out.write((const char*)&v, 8); };
  out.write("RGBL", 4);
  w64(1);  // format version
  w64(pres_->hash());
  w64((uint64_t)radius_);
  w64((uint64_t)(exact_ ? 1 : 0));
  w64(size());
  w64(bytes_.size());
  out.write((const char*)bytes_.data(), (std::streamsize)bytes_.size());
  out.write((const char*)offsets_.data(), (std::streamsize)(offsets_.size() * 4));
  out.write((const char*)depth_.data(), (std::streamsize)depth_.size());
  out.write((const char*)adj_.data(), (std::streamsize)(adj_.size() * 4));
  out.write((const char*)last_letters_.data(), (std::streamsize)(last_letters_.size() * 8));
  w64(sphere_start_.size());
  out.write((const char*)sphere_start_.data(), (std::streamsize)(sphere_start_.size() * 4));
  w64(ab_.size());
  out.write((const char*)ab_.data(), (std::streamsize)(ab_.size() * 2));
}

std::shared_ptr<Ball> Ball::load(std::istream& in, std::shared_ptr<const Presentation> pres) {
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, "RGBL", 4) != 0) throw input_error("ball cache: bad magic");
  auto r64 = [&]() {
    uint64_t v = 0;
    in.read((char*)&v, 8);
    return v;
  };
  if (r64() != 1) throw input_error("ball cache: unsupported version");
  uint64_t h = r64();
  if (h != pres->hash()) throw input_error("ball cache: presentation hash mismatch");
  auto ball = std::shared_ptr<Ball>(new Ball());
  Ball& b = *ball;
  b.pres_ = pres;
  b.gens_count_ = (uint32_t)pres->gens().size();
  b.tree_ = pres->kind() == PresentationKind::Free;
  b.needs_oracle_ = pres->kind() == PresentationKind::FreeAlias ||
                    pres->kind() == PresentationKind::OneRelatorPower ||
                    pres->kind() == PresentationKind::SmallCancellation;
  b.lateral_ = false;
  for (const auto& r : pres->relators())
    if (r.size() % 2 == 1) b.lateral_ = true;
  b.radius_ = (int)r64();
  b.exact_ = r64() != 0;
  uint64_t n = r64();
  uint64_t nbytes = r64();
  b.bytes_.resize(nbytes);
  in.read((char*)b.bytes_.data(), (std::streamsize)nbytes);
  b.offsets_.resize(n + 1);
  in.read((char*)b.offsets_.data(), (std::streamsize)((n + 1) * 4));
  b.depth_.resize(n);
  in.read((char*)b.depth_.data(), (std::streamsize)n);
  b.adj_.resize(n * b.gens_count_);
  in.read((char*)b.adj_.data(), (std::streamsize)(b.adj_.size() * 4));
  b.last_letters_.resize(n);
  in.read((char*)b.last_letters_.data(), (std::streamsize)(n * 8));
  uint64_t ns = r64();
  b.sphere_start_.resize(ns);
  in.read((char*)b.sphere_start_.data(), (std::streamsize)(ns * 4));
  uint64_t nab = r64();
  b.ab_.resize(nab);
  in.read((char*)b.ab_.data(), (std::streamsize)(nab * 2));
  if (!in) throw input_error("ball cache: truncated file");
  if (b.needs_oracle_) {
    for (uint32_t e = 0; e < n; ++e)
      b.buckets_[b.residue_key(pres->ab_residue(b.ab_of(e)))].push_back(e);
  }
  return ball;
}

}  // namespace relgrowth
