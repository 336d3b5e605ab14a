#include <doctest.h>

#include <random>
#include <set>

#include "relgrowth/oracle.hpp"
#include "relgrowth/presentation_io.hpp"
#include "relgrowth/words.hpp"

using namespace relgrowth;

namespace {

GeneratorSet f2_gens() { return GeneratorSet::pairs({"a", "b"}); }

// independent longest-common-factor oracle over explicit letter vectors
int lcf_oracle(const std::vector<Gen>& a, const std::vector<Gen>& b) {
  int best = 0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) {
      int l = 0;
      while (i + l < a.size() && j + l < b.size() && a[i + l] == b[j + l]) ++l;
      best = std::max(best, l);
    }
  return best;
}

}  // namespace

TEST_CASE("free_reduce basics") {
  GeneratorSet gs = f2_gens();
  CHECK(free_reduce(gs, parse_word(gs, "aA")).empty());
  CHECK(free_reduce(gs, parse_word(gs, "abBA")).empty());
  CHECK(spell(gs, free_reduce(gs, parse_word(gs, "abAB"))) == "abAB");
  CHECK_THROWS_AS(parse_word(gs, "axb"), input_error);
}

TEST_CASE("free_reduce properties") {
  GeneratorSet gs = GeneratorSet::pairs({"a", "b", "c"});
  std::mt19937 rng(7);
  std::uniform_int_distribution<size_t> pick(0, gs.size() - 1);
  for (int t = 0; t < 500; ++t) {
    Word w;
    for (int i = 0; i < t % 20; ++i) w.letters.push_back((Gen)pick(rng));
    Word r = free_reduce(gs, w);
    CHECK(r.size() <= w.size());
    CHECK(is_freely_reduced(gs, r));
    CHECK(free_reduce(gs, r) == r);
    CHECK(concat_reduced(gs, w, inverse_word(gs, w)).empty());
  }
}

TEST_CASE("cyclic_reduce") {
  GeneratorSet gs = f2_gens();
  auto [core1, conj1] = cyclic_reduce(gs, parse_word(gs, "abA"));
  CHECK(spell(gs, core1) == "b");
  CHECK(spell(gs, conj1) == "a");
  auto [core2, conj2] = cyclic_reduce(gs, parse_word(gs, "abAB"));
  CHECK(spell(gs, core2) == "abAB");
  CHECK(conj2.empty());
  auto [core3, conj3] = cyclic_reduce(gs, Word{});
  CHECK(core3.empty());
  CHECK(conj3.empty());
}

TEST_CASE("root_of") {
  GeneratorSet gs = f2_gens();
  auto [u1, k1] = root_of(gs, parse_word(gs, "abab"));
  CHECK(spell(gs, u1) == "ab");
  CHECK(k1 == 2);
  auto [u2, k2] = root_of(gs, parse_word(gs, "abAB"));
  CHECK(spell(gs, u2) == "abAB");
  CHECK(k2 == 1);
  auto [u3, k3] = root_of(gs, parse_word(gs, "aabaab"));
  CHECK(spell(gs, u3) == "aab");
  CHECK(k3 == 2);
  CHECK_THROWS_AS(root_of(gs, Word{}), input_error);
}

TEST_CASE("symmetrize_and_measure") {
  GeneratorSet gs = f2_gens();

  SUBCASE("a^3: the a-run and A-run share nothing") {
    auto symm = symmetrize_and_measure({parse_word(gs, "aaa")}, gs);
    CHECK(symm.words.size() == 2);  // aaa and AAA
    CHECK(symm.max_piece == 0);
    CHECK(symm.max_piece_cyclic == 3);  // a^3 overlaps its own rotation fully
  }
  SUBCASE("(abAB)^2 against the independent scan") {
    Word rel = parse_word(gs, "abABabAB");
    auto symm = symmetrize_and_measure({rel}, gs);
    int oracle = 0;
    for (size_t i = 0; i < symm.words.size(); ++i)
      for (size_t j = i + 1; j < symm.words.size(); ++j)
        oracle = std::max(oracle, lcf_oracle(symm.words[i].letters, symm.words[j].letters));
    CHECK(symm.max_piece == oracle);
    CHECK(symm.max_piece == 7);  // period-4 self-overlap of length 2*4-1
  }
  SUBCASE("(ab)^3 fails C'(1/6)") {
    auto symm = symmetrize_and_measure({parse_word(gs, "ababab")}, gs);
    CHECK(symm.lambda >= 0.5);
  }
  SUBCASE("power relators force long pieces") {
    // max_piece >= (n-1)|u| - |u| for non-power u, n >= 3 (brute force)
    std::vector<std::string> roots = {"ab", "aab", "abAB", "aabAB"};
    for (const auto& root : roots) {
      Word u = parse_word(gs, root);
      for (int n = 3; n <= 6; ++n) {
        Word rel;
        for (int i = 0; i < n; ++i) rel = concat(rel, u);
        auto symm = symmetrize_and_measure({free_reduce(gs, rel)}, gs);
        CHECK(symm.max_piece >= (n - 2) * (int)u.size());
      }
    }
  }
  SUBCASE("empty relator set is an input error") {
    CHECK_THROWS_AS(symmetrize_and_measure(std::vector<Word>{}, gs), input_error);
  }
}

TEST_CASE("word_problem: free and one-relator-power") {
  GeneratorSet gs = f2_gens();
  auto free2 = Presentation::free_group(gs);
  CHECK(word_problem(*free2, parse_word(gs, "aA")));
  CHECK(!word_problem(*free2, parse_word(gs, "ab")));

  auto p = Presentation::one_relator_power(gs, parse_word(gs, "abAB"), 3);
  CHECK(p->power_exponent() == 3);
  CHECK(p->girth_bound() == 8);

  Word rel = parse_word(gs, "abABabABabAB");
  CHECK(word_problem(*p, rel));
  CHECK(!word_problem(*p, parse_word(gs, "a")));

  // spelling trace strictly decreases on a conjugate of the relator
  Word conj = concat_reduced(gs, concat_reduced(gs, parse_word(gs, "b"), rel),
                             parse_word(gs, "B"));
  WordProblemTrace trace;
  CHECK(word_problem(*p, conj, &trace));
  for (size_t i = 1; i < trace.lengths.size(); ++i)
    CHECK(trace.lengths[i] < trace.lengths[i - 1]);

  // conjugation invariance over random short conjugators
  std::mt19937 rng(99);
  std::uniform_int_distribution<size_t> pick(0, gs.size() - 1);
  for (int t = 0; t < 60; ++t) {
    Word c;
    for (int i = 0; i < (int)(t % 7); ++i) c.letters.push_back((Gen)pick(rng));
    for (const char* wtext : {"abABabABabAB", "a", "abAB", "bb"}) {
      Word w = parse_word(gs, wtext);
      Word cw = concat_reduced(gs, concat_reduced(gs, c, w), inverse_word(gs, c));
      CHECK(word_problem(*p, w) == word_problem(*p, cw));
    }
  }
}

TEST_CASE("word_problem: proper power root normalization") {
  GeneratorSet gs = f2_gens();
  // (ab)^2 squared: root ab, exponent 4
  auto p = Presentation::one_relator_power(gs, parse_word(gs, "abab"), 2);
  CHECK(spell(gs, p->power_root()) == "ab");
  CHECK(p->power_exponent() == 4);
  CHECK(p->girth_bound() == 6);
  CHECK(word_problem(*p, parse_word(gs, "abababab")));
  CHECK(!word_problem(*p, parse_word(gs, "abab")));
}

TEST_CASE("word_problem: Dehn on the genus-2 surface group") {
  GeneratorSet gs = GeneratorSet::pairs({"a", "b", "c", "d"});
  Word rel = parse_word(gs, "abABcdCD");
  auto p = Presentation::small_cancellation(gs, {rel});
  // the classical piece measure: single-letter pieces, C'(1/8)
  CHECK(p->symmetrized().max_piece_cyclic == 1);
  CHECK(p->symmetrized().lambda_cyclic < 1.0 / 6.0);
  CHECK(word_problem(*p, rel));
  CHECK(!word_problem(*p, parse_word(gs, "ab")));
  CHECK(word_problem(*p, concat_reduced(gs, concat_reduced(gs, parse_word(gs, "ca"), rel),
                                        inverse_word(gs, parse_word(gs, "ca")))));
  CHECK(word_problem(*p, inverse_word(gs, rel)));
}

TEST_CASE("word_problem: unsupported generic oracle") {
  GeneratorSet gs = f2_gens();
  auto z2 = Presentation::generic(gs, {parse_word(gs, "abAB")});
  CHECK_THROWS_AS(word_problem(*z2, parse_word(gs, "abAB")), unsupported_oracle_error);
}

TEST_CASE("free alias oracle") {
  GeneratorSet gs = GeneratorSet::pairs({"a", "b", "c"});
  Gen c = *gs.find("c");
  auto p = Presentation::free_with_aliases(gs, {{c, parse_word(gs, "ab")}});
  CHECK(word_problem(*p, concat_reduced(gs, parse_word(gs, "c"),
                                        inverse_word(gs, parse_word(gs, "ab")))));
  CHECK(!word_problem(*p, parse_word(gs, "c")));
}

TEST_CASE("presentation text format") {
  auto p = parse_presentation_text("gens: a b\nrel: (abAB)^3\n");
  CHECK(p->kind() == PresentationKind::OneRelatorPower);
  CHECK(p->power_exponent() == 3);
  CHECK(spell(p->gens(), p->power_root()) == "abAB");

  auto free3 = parse_presentation_text("gens: a b c\n");
  CHECK(free3->kind() == PresentationKind::Free);
  CHECK(free3->gens().size() == 6);

  // ^n applies to the whole preceding word without parentheses
  auto q = parse_presentation_text("gens: a b\nrel: abAB^3\n");
  CHECK(q->kind() == PresentationKind::OneRelatorPower);
  CHECK(q->power_exponent() == 3);

  auto surf = parse_presentation_text("gens: a b c d\nrel: abABcdCD\n");
  CHECK(surf->kind() == PresentationKind::SmallCancellation);

  auto z2 = parse_presentation_text("gens: a b\nrel: abAB\n");
  CHECK(z2->kind() == PresentationKind::Generic);

  auto ordered = parse_presentation_text("gens: a b\norder: B b A a\n");
  CHECK(ordered->gens().rank(*ordered->gens().find("B")) == 0);
  CHECK_THROWS_AS(parse_presentation_text("gens: a b\norder: a b\n"), input_error);
  CHECK_THROWS_AS(parse_presentation_text("zzz: 1\n"), input_error);
}

TEST_CASE("lexicographic order") {
  GeneratorSet gs = f2_gens();
  // a < A < b < B by declaration
  Word ab = parse_word(gs, "ab"), aB = parse_word(gs, "aB"), a = parse_word(gs, "a");
  CHECK(lex_compare(gs, ab.letters, aB.letters) < 0);
  CHECK(lex_compare(gs, a.letters, ab.letters) < 0);
  CHECK(lex_compare(gs, ab.letters, ab.letters) == 0);
}

TEST_CASE("self-inverse generators") {
  GeneratorSet gs = GeneratorSet::pairs({"a"}, {"t"});
  Gen t = *gs.find("t");
  CHECK(gs.is_self_inverse(t));
  CHECK(free_reduce(gs, Word({t, t})).empty());
  CHECK(free_reduce(gs, Word({t, *gs.find("a"), t})).size() == 3);
}
