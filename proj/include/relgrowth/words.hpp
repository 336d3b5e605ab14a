#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relgrowth/errors.hpp"

namespace relgrowth {

using Gen = uint8_t;
inline constexpr Gen kNoGen = 0xFF;

// A finite symmetric generating alphabet: every symbol has a formal inverse
// (a fixed-point-free pairing, or an explicit self-inverse mark) and a total
// order used for all lexicographic comparisons. Default order is declaration
// order with each inverse immediately after its base symbol.
class GeneratorSet {
 public:
  GeneratorSet() = default;

  // Base names get auto-paired inverses: single lowercase letters pair with
  // their uppercase form, otherwise `x` pairs with `x^-1`.
  static GeneratorSet pairs(const std::vector<std::string>& base_names,
                            const std::vector<std::string>& self_inverse_names = {});

  void set_order(const std::vector<std::string>& symbols_in_order);

  size_t size() const { return names_.size(); }
  size_t base_rank() const { return base_of_.empty() ? 0 : ab_dim_; }
  int ab_dim() const { return ab_dim_; }

  Gen inverse(Gen g) const { return inverse_[g]; }
  bool is_self_inverse(Gen g) const { return inverse_[g] == g; }
  const std::string& name(Gen g) const { return names_[g]; }
  std::optional<Gen> find(std::string_view name) const;

  uint8_t rank(Gen g) const { return order_rank_[g]; }
  Gen nth_by_rank(size_t i) const { return by_rank_[i]; }

  // Abelianization coordinate and sign of a symbol. Self-inverse symbols get
  // their own Z/2 coordinate (reduced mod 2 by callers).
  int ab_coord(Gen g) const { return base_of_[g]; }
  int ab_sign(Gen g) const { return ab_sign_[g]; }
  bool ab_coord_is_mod2(int coord) const { return coord_mod2_[coord]; }

  bool single_char_names() const { return single_char_; }

  bool operator==(const GeneratorSet& o) const {
    return names_ == o.names_ && inverse_ == o.inverse_ && order_rank_ == o.order_rank_;
  }

 private:
  void add_pair(const std::string& base);
  void add_self_inverse(const std::string& name);
  void finish();

  std::vector<std::string> names_;
  std::vector<Gen> inverse_;
  std::vector<uint8_t> order_rank_;
  std::vector<Gen> by_rank_;
  std::vector<int> base_of_;
  std::vector<int8_t> ab_sign_;
  std::vector<bool> coord_mod2_;
  int ab_dim_ = 0;
  bool single_char_ = true;
};

// A word over the generating alphabet. `reduced` is a cached flag maintained
// by the reduction routines; length is always letters.size().
struct Word {
  std::vector<Gen> letters;
  bool reduced = false;

  Word() = default;
  explicit Word(std::vector<Gen> l, bool red = false) : letters(std::move(l)), reduced(red) {}

  size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  bool operator==(const Word& o) const { return letters == o.letters; }
};

Word free_reduce(const GeneratorSet& gs, const Word& w);
bool is_freely_reduced(const GeneratorSet& gs, const Word& w);
Word inverse_word(const GeneratorSet& gs, const Word& w);
Word concat(const Word& a, const Word& b);
Word concat_reduced(const GeneratorSet& gs, const Word& a, const Word& b);

// w = conjugator * core * conjugator^-1 with core cyclically reduced.
std::pair<Word, Word> cyclic_reduce(const GeneratorSet& gs, const Word& w);

bool is_cyclically_reduced(const GeneratorSet& gs, const Word& w);
Word cyclic_shift(const Word& w, size_t i);

// Maximal-root decomposition h = u^k, u not a proper power. h must be
// nonempty and cyclically reduced.
std::pair<Word, int> root_of(const GeneratorSet& gs, const Word& h);

// Lexicographic comparison under the generator order; a proper prefix
// precedes its extensions.
int lex_compare(const GeneratorSet& gs, std::span<const Gen> a, std::span<const Gen> b);

std::vector<int> abelianization(const GeneratorSet& gs, const Word& w);

// Parsing/printing: single-char alphabets read words character-wise,
// otherwise symbols are whitespace-separated.
Word parse_word(const GeneratorSet& gs, std::string_view text);
std::string spell(const GeneratorSet& gs, const Word& w);
std::string spell(const GeneratorSet& gs, std::span<const Gen> w);

// All cyclic permutations of the relators and their inverses, deduplicated.
// Two overlap measurements ride along:
//   max_piece / lambda - longest common subword of two distinct member
//     words (the all-pairs scan over the linear words);
//   max_piece_cyclic / lambda_cyclic - longest subword occurring at two
//     distinct positions of the cyclic relators (rotations of a single
//     occurrence do not count). This is the measure behind the C'(1/6)
//     condition: the linear scan always reports length-1 rotation overlaps
//     of a relator with its own shifts, so it cannot gate Dehn's algorithm.
struct SymmetrizedRelators {
  std::vector<Word> words;
  int max_piece = 0;
  int min_length = 0;
  double lambda = 0.0;
  int max_piece_cyclic = 0;
  double lambda_cyclic = 0.0;
};

enum class PresentationKind : uint8_t {
  Free,
  FreeAlias,          // free group presented with redundant generators
  OneRelatorPower,    // <X | u^n>, n >= 2, u not a proper power
  SmallCancellation,  // classical C'(1/6)
  Generic,            // no exact oracle; sub-girth mode only
};

class Presentation {
 public:
  static std::shared_ptr<const Presentation> free_group(GeneratorSet gens);
  // alias_defs: redundant generator -> defining word over the base symbols.
  static std::shared_ptr<const Presentation> free_with_aliases(
      GeneratorSet gens, std::vector<std::pair<Gen, Word>> alias_defs);
  static std::shared_ptr<const Presentation> one_relator_power(GeneratorSet gens, const Word& u,
                                                               int n);
  static std::shared_ptr<const Presentation> small_cancellation(GeneratorSet gens,
                                                                std::vector<Word> relators);
  static std::shared_ptr<const Presentation> generic(GeneratorSet gens,
                                                     std::vector<Word> relators);

  PresentationKind kind() const { return kind_; }
  const GeneratorSet& gens() const { return gens_; }
  const std::vector<Word>& relators() const { return relators_; }

  const Word& power_root() const { return root_; }
  int power_exponent() const { return exponent_; }
  // Lower bound on the length of a nontrivial kernel word (strict: every
  // nontrivial kernel word is strictly longer than this).
  int girth_bound() const { return girth_bound_; }

  const SymmetrizedRelators& symmetrized() const { return symm_; }
  const std::vector<std::pair<Gen, Word>>& aliases() const { return aliases_; }
  Word expand_aliases(const Word& w) const;

  int min_relator_length() const;

  // Canonical residue of an abelianization vector modulo the relator
  // lattice; equal group elements always share a residue (a prefilter, not
  // an equality test).
  std::vector<int> ab_residue(std::vector<int> ab) const;

  // True when every relator abelianizes to zero, i.e. equal group elements
  // have equal raw abelianization vectors.
  bool relators_ab_trivial() const { return ab_trivial_; }

  std::string text() const;   // canonical serialization (see presentation_io)
  uint64_t hash() const;

 private:
  Presentation() = default;
  void finish_ab();

  GeneratorSet gens_;
  std::vector<Word> relators_;
  PresentationKind kind_ = PresentationKind::Free;
  Word root_;
  int exponent_ = 0;
  int girth_bound_ = 0;
  SymmetrizedRelators symm_;
  std::vector<std::pair<Gen, Word>> aliases_;
  std::vector<std::vector<int>> relator_ab_;
  std::vector<long long> ab_gcd_;
  std::vector<int> power_ab_;  // abelianization of the single power relator
  bool ab_trivial_ = true;
};

SymmetrizedRelators symmetrize_and_measure(const std::vector<Word>& relators,
                                           const GeneratorSet& gs);
SymmetrizedRelators symmetrize_and_measure(const Presentation& p);

}  // namespace relgrowth
