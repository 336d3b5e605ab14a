#include "relgrowth/words.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

namespace relgrowth {

GeneratorSet GeneratorSet::pairs(const std::vector<std::string>& base_names,
                                 const std::vector<std::string>& self_inverse_names) {
  GeneratorSet gs;
  for (const auto& b : base_names) gs.add_pair(b);
  for (const auto& s : self_inverse_names) gs.add_self_inverse(s);
  gs.finish();
  return gs;
}

void GeneratorSet::add_pair(const std::string& base) {
  if (base.empty()) throw input_error("generator name empty");
  std::string inv;
  if (base.size() == 1 && std::islower((unsigned char)base[0]))
    inv = std::string(1, (char)std::toupper((unsigned char)base[0]));
  else
    inv = base + "^-1";
  if (find(base) || find(inv)) throw input_error("duplicate generator name: " + base);
  Gen g = (Gen)names_.size();
  names_.push_back(base);
  names_.push_back(inv);
  inverse_.push_back((Gen)(g + 1));
  inverse_.push_back(g);
  int coord = ab_dim_++;
  base_of_.push_back(coord);
  base_of_.push_back(coord);
  ab_sign_.push_back(1);
  ab_sign_.push_back(-1);
  coord_mod2_.push_back(false);
}

void GeneratorSet::add_self_inverse(const std::string& name) {
  if (name.empty()) throw input_error("generator name empty");
  if (find(name)) throw input_error("duplicate generator name: " + name);
  Gen g = (Gen)names_.size();
  names_.push_back(name);
  inverse_.push_back(g);
  int coord = ab_dim_++;
  base_of_.push_back(coord);
  ab_sign_.push_back(1);
  coord_mod2_.push_back(true);
}

void GeneratorSet::finish() {
  if (names_.empty()) throw input_error("empty generating set");
  if (names_.size() > 64) throw input_error("too many generators (max 64 symbols)");
  order_rank_.resize(names_.size());
  by_rank_.resize(names_.size());
  for (size_t i = 0; i < names_.size(); ++i) {
    order_rank_[i] = (uint8_t)i;  // declaration order, inverse right after base
    by_rank_[i] = (Gen)i;
  }
  single_char_ = true;
  for (const auto& n : names_)
    if (n.size() != 1) single_char_ = false;
}

void GeneratorSet::set_order(const std::vector<std::string>& symbols_in_order) {
  if (symbols_in_order.size() != names_.size())
    throw input_error("order must list every symbol exactly once");
  std::vector<bool> seen(names_.size(), false);
  for (size_t r = 0; r < symbols_in_order.size(); ++r) {
    auto g = find(symbols_in_order[r]);
    if (!g) throw input_error("order lists unknown symbol: " + symbols_in_order[r]);
    if (seen[*g]) throw input_error("order repeats symbol: " + symbols_in_order[r]);
    seen[*g] = true;
    order_rank_[*g] = (uint8_t)r;
    by_rank_[r] = *g;
  }
}

std::optional<Gen> GeneratorSet::find(std::string_view name) const {
  for (size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return (Gen)i;
  return std::nullopt;
}

Word free_reduce(const GeneratorSet& gs, const Word& w) {
  Word out;
  out.letters.reserve(w.size());
  for (Gen g : w.letters) {
    if (g >= gs.size()) throw input_error("unknown symbol index in word");
    if (!out.letters.empty() && gs.inverse(out.letters.back()) == g)
      out.letters.pop_back();
    else
      out.letters.push_back(g);
  }
  out.reduced = true;
  return out;
}

bool is_freely_reduced(const GeneratorSet& gs, const Word& w) {
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (gs.inverse(w.letters[i]) == w.letters[i + 1]) return false;
  return true;
}

Word inverse_word(const GeneratorSet& gs, const Word& w) {
  Word out;
  out.letters.reserve(w.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    out.letters.push_back(gs.inverse(*it));
  out.reduced = w.reduced;
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out;
  out.letters.reserve(a.size() + b.size());
  out.letters = a.letters;
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  return out;
}

Word concat_reduced(const GeneratorSet& gs, const Word& a, const Word& b) {
  return free_reduce(gs, concat(a, b));
}

std::pair<Word, Word> cyclic_reduce(const GeneratorSet& gs, const Word& w) {
  Word r = w.reduced ? w : free_reduce(gs, w);
  size_t i = 0, j = r.size();
  while (j >= i + 2 && gs.inverse(r.letters[i]) == r.letters[j - 1]) {
    ++i;
    --j;
  }
  Word core(std::vector<Gen>(r.letters.begin() + i, r.letters.begin() + j), true);
  Word conj(std::vector<Gen>(r.letters.begin(), r.letters.begin() + i), true);
  return {core, conj};
}

bool is_cyclically_reduced(const GeneratorSet& gs, const Word& w) {
  if (!is_freely_reduced(gs, w)) return false;
  if (w.size() >= 2 && gs.inverse(w.letters.front()) == w.letters.back()) return false;
  return true;
}

Word cyclic_shift(const Word& w, size_t i) {
  Word out;
  size_t n = w.size();
  if (n == 0) return w;
  i %= n;
  out.letters.reserve(n);
  out.letters.insert(out.letters.end(), w.letters.begin() + i, w.letters.end());
  out.letters.insert(out.letters.end(), w.letters.begin(), w.letters.begin() + i);
  out.reduced = w.reduced;
  return out;
}

std::pair<Word, int> root_of(const GeneratorSet& gs, const Word& h) {
  if (h.empty()) throw input_error("root_of: empty word");
  if (!is_cyclically_reduced(gs, h)) throw input_error("root_of: word not cyclically reduced");
  size_t n = h.size();
  for (size_t p = 1; p <= n; ++p) {
    if (n % p) continue;
    bool periodic = true;
    for (size_t i = p; i < n && periodic; ++i)
      if (h.letters[i] != h.letters[i - p]) periodic = false;
    if (periodic) {
      Word u(std::vector<Gen>(h.letters.begin(), h.letters.begin() + p), true);
      return {u, (int)(n / p)};
    }
  }
  return {h, 1};  // unreachable; p = n always periodic
}

int lex_compare(const GeneratorSet& gs, std::span<const Gen> a, std::span<const Gen> b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    uint8_t ra = gs.rank(a[i]), rb = gs.rank(b[i]);
    if (ra != rb) return ra < rb ? -1 : 1;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

std::vector<int> abelianization(const GeneratorSet& gs, const Word& w) {
  std::vector<int> ab(gs.ab_dim(), 0);
  for (Gen g : w.letters) ab[gs.ab_coord(g)] += gs.ab_sign(g);
  for (int c = 0; c < gs.ab_dim(); ++c)
    if (gs.ab_coord_is_mod2(c)) ab[c] = ((ab[c] % 2) + 2) % 2;
  return ab;
}

Word parse_word(const GeneratorSet& gs, std::string_view text) {
  Word w;
  if (gs.single_char_names()) {
    for (char c : text) {
      if (std::isspace((unsigned char)c)) continue;
      auto g = gs.find(std::string_view(&c, 1));
      if (!g) throw input_error(std::string("unknown symbol: ") + c);
      w.letters.push_back(*g);
    }
  } else {
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
      auto g = gs.find(tok);
      if (!g) throw input_error("unknown symbol: " + tok);
      w.letters.push_back(*g);
    }
  }
  return w;
}

std::string spell(const GeneratorSet& gs, std::span<const Gen> w) {
  std::string out;
  bool first = true;
  for (Gen g : w) {
    if (!gs.single_char_names() && !first) out += ' ';
    out += gs.name(g);
    first = false;
  }
  return out;
}

std::string spell(const GeneratorSet& gs, const Word& w) {
  return spell(gs, std::span<const Gen>(w.letters));
}

namespace {

// Longest common contiguous subword of two distinct words, by direct scan.
int longest_common_factor(const Word& a, const Word& b) {
  int best = 0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) {
      size_t l = 0;
      while (i + l < a.size() && j + l < b.size() && a.letters[i + l] == b.letters[j + l]) ++l;
      best = std::max(best, (int)l);
    }
  return best;
}

}  // namespace

SymmetrizedRelators symmetrize_and_measure(const std::vector<Word>& relators,
                                           const GeneratorSet& gs) {
  if (relators.empty()) throw input_error("symmetrize: no relators");
  std::set<std::vector<Gen>> seen;
  SymmetrizedRelators out;
  std::vector<Word> cyclic_classes;  // one canonical rotation per cyclic word
  std::set<std::vector<Gen>> class_seen;
  for (const Word& r0 : relators) {
    Word r = free_reduce(gs, r0);
    if (r.empty()) throw input_error("symmetrize: empty relator");
    if (!is_cyclically_reduced(gs, r)) throw input_error("symmetrize: relator not cyclically reduced");
    for (const Word& base : {r, inverse_word(gs, r)}) {
      Word canonical = base;
      for (size_t i = 0; i < base.size(); ++i) {
        Word s = cyclic_shift(base, i);
        if (seen.insert(s.letters).second) out.words.push_back(s);
        if (lex_compare(gs, s.letters, canonical.letters) < 0) canonical = s;
      }
      if (class_seen.insert(canonical.letters).second) cyclic_classes.push_back(canonical);
    }
  }
  out.min_length = (int)out.words.front().size();
  for (const Word& w : out.words) out.min_length = std::min(out.min_length, (int)w.size());

  out.max_piece = 0;
  for (size_t i = 0; i < out.words.size(); ++i)
    for (size_t j = i + 1; j < out.words.size(); ++j)
      out.max_piece = std::max(out.max_piece, longest_common_factor(out.words[i], out.words[j]));
  out.lambda = (double)out.max_piece / (double)out.min_length;

  // pieces at distinct cyclic occurrences: compare doubled words so that
  // subwords may wrap, skipping the identical occurrence
  out.max_piece_cyclic = 0;
  for (size_t i = 0; i < cyclic_classes.size(); ++i) {
    const auto& wi = cyclic_classes[i].letters;
    for (size_t j = i; j < cyclic_classes.size(); ++j) {
      const auto& wj = cyclic_classes[j].letters;
      const int cap = (int)std::min(wi.size(), wj.size());
      for (size_t p1 = 0; p1 < wi.size(); ++p1)
        for (size_t p2 = 0; p2 < wj.size(); ++p2) {
          if (i == j && p1 == p2) continue;
          int l = 0;
          while (l < cap && wi[(p1 + l) % wi.size()] == wj[(p2 + l) % wj.size()]) ++l;
          out.max_piece_cyclic = std::max(out.max_piece_cyclic, l);
        }
    }
  }
  out.lambda_cyclic = (double)out.max_piece_cyclic / (double)out.min_length;
  return out;
}

SymmetrizedRelators symmetrize_and_measure(const Presentation& p) {
  return symmetrize_and_measure(p.relators(), p.gens());
}

std::shared_ptr<const Presentation> Presentation::free_group(GeneratorSet gens) {
  auto p = std::shared_ptr<Presentation>(new Presentation());
  p->gens_ = std::move(gens);
  p->kind_ = PresentationKind::Free;
  p->finish_ab();
  return p;
}

std::shared_ptr<const Presentation> Presentation::free_with_aliases(
    GeneratorSet gens, std::vector<std::pair<Gen, Word>> alias_defs) {
  auto p = std::shared_ptr<Presentation>(new Presentation());
  p->gens_ = std::move(gens);
  p->kind_ = PresentationKind::FreeAlias;
  p->aliases_ = std::move(alias_defs);
  for (auto& [g, def] : p->aliases_) {
    if (g >= p->gens_.size()) throw input_error("alias: unknown generator");
    def = free_reduce(p->gens_, def);
    if (def.empty()) throw input_error("alias: trivial definition");
    // relator g * def^-1, for the record and for residue computation
    p->relators_.push_back(
        free_reduce(p->gens_, concat(Word({g}, true), inverse_word(p->gens_, def))));
  }
  if (p->aliases_.empty()) throw input_error("free_with_aliases: no aliases");
  p->finish_ab();
  return p;
}

std::shared_ptr<const Presentation> Presentation::one_relator_power(GeneratorSet gens,
                                                                    const Word& u, int n) {
  auto p = std::shared_ptr<Presentation>(new Presentation());
  p->gens_ = std::move(gens);
  Word ur = free_reduce(p->gens_, u);
  if (ur.empty()) throw input_error("one_relator_power: trivial base word");
  auto [core, conj] = cyclic_reduce(p->gens_, ur);
  if (n < 2) throw input_error("one_relator_power: exponent must be >= 2");
  // normalize to a non-power root; <X | (u^m)^n> = <X | u^(mn)>
  auto [root, m] = root_of(p->gens_, core);
  p->kind_ = PresentationKind::OneRelatorPower;
  p->root_ = root;
  p->exponent_ = m * n;
  Word rel;
  for (int i = 0; i < p->exponent_; ++i) rel = concat(rel, p->root_);
  rel.reduced = true;
  p->relators_.push_back(rel);
  p->girth_bound_ = (p->exponent_ - 1) * (int)p->root_.size();
  p->finish_ab();
  return p;
}

std::shared_ptr<const Presentation> Presentation::small_cancellation(GeneratorSet gens,
                                                                     std::vector<Word> relators) {
  auto p = std::shared_ptr<Presentation>(new Presentation());
  p->gens_ = std::move(gens);
  p->kind_ = PresentationKind::SmallCancellation;
  for (auto& r : relators) r = free_reduce(p->gens_, r);
  p->relators_ = std::move(relators);
  p->symm_ = symmetrize_and_measure(p->relators_, p->gens_);
  p->finish_ab();
  return p;
}

std::shared_ptr<const Presentation> Presentation::generic(GeneratorSet gens,
                                                          std::vector<Word> relators) {
  auto p = std::shared_ptr<Presentation>(new Presentation());
  p->gens_ = std::move(gens);
  p->kind_ = PresentationKind::Generic;
  for (auto& r : relators) r = free_reduce(p->gens_, r);
  p->relators_ = std::move(relators);
  p->finish_ab();
  return p;
}

Word Presentation::expand_aliases(const Word& w) const {
  if (aliases_.empty()) return w;
  Word out;
  for (Gen g : w.letters) {
    bool hit = false;
    for (const auto& [alias, def] : aliases_) {
      if (g == alias) {
        out.letters.insert(out.letters.end(), def.letters.begin(), def.letters.end());
        hit = true;
        break;
      }
      if (g == gens_.inverse(alias)) {
        Word inv = inverse_word(gens_, def);
        out.letters.insert(out.letters.end(), inv.letters.begin(), inv.letters.end());
        hit = true;
        break;
      }
    }
    if (!hit) out.letters.push_back(g);
  }
  return free_reduce(gens_, out);
}

int Presentation::min_relator_length() const {
  int m = 0;
  for (const auto& r : relators_)
    m = (m == 0) ? (int)r.size() : std::min(m, (int)r.size());
  return m;
}

void Presentation::finish_ab() {
  relator_ab_.clear();
  for (const auto& r : relators_) relator_ab_.push_back(abelianization(gens_, r));
  ab_gcd_.assign(gens_.ab_dim(), 0);
  ab_trivial_ = true;
  for (const auto& v : relator_ab_)
    for (size_t c = 0; c < v.size(); ++c) {
      ab_gcd_[c] = std::gcd(ab_gcd_[c], (long long)std::abs(v[c]));
      if (v[c] != 0) ab_trivial_ = false;
    }
  if (kind_ == PresentationKind::OneRelatorPower) power_ab_ = relator_ab_[0];
}

std::vector<int> Presentation::ab_residue(std::vector<int> ab) const {
  if (relators_.empty()) return ab;
  if (kind_ == PresentationKind::OneRelatorPower) {
    // single relator lattice Z * power_ab_: reduce along the pivot coordinate
    int pivot = -1;
    for (size_t c = 0; c < power_ab_.size(); ++c)
      if (power_ab_[c] != 0) { pivot = (int)c; break; }
    if (pivot < 0) return ab;  // relator abelianizes to zero: identity filter
    int step = power_ab_[pivot];
    int q = ab[pivot] / step;
    // canonical: pivot residue in [0, |step|)
    if ((ab[pivot] - q * step) * (step > 0 ? 1 : -1) < 0) q -= (step > 0 ? 1 : -1);
    for (size_t c = 0; c < power_ab_.size(); ++c) ab[c] -= q * power_ab_[c];
    return ab;
  }
  // conservative coordinatewise residue: lattice vectors have coordinate c
  // divisible by gcd of the relator coordinates there
  for (size_t c = 0; c < ab.size(); ++c) {
    long long g = ab_gcd_[c];
    if (g > 0) ab[c] = (int)(((ab[c] % g) + g) % g);
  }
  return ab;
}

std::string Presentation::text() const {
  std::string s = "gens:";
  for (size_t i = 0; i < gens_.size(); ++i) {
    s += ' ';
    s += gens_.name((Gen)i);
  }
  s += "\norder:";
  for (size_t i = 0; i < gens_.size(); ++i) {
    s += ' ';
    s += gens_.name(gens_.nth_by_rank(i));
  }
  s += '\n';
  for (const auto& r : relators_) s += "rel: " + spell(gens_, r) + "\n";
  s += "kind: " + std::to_string((int)kind_) + "\n";
  return s;
}

uint64_t Presentation::hash() const {
  // FNV-1a over the canonical text
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace relgrowth
