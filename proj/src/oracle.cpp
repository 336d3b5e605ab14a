#include "relgrowth/oracle.hpp"

#include <algorithm>
#include <cassert>

namespace relgrowth {

namespace {

// One spelling pass: find in w a factor of the periodic word U = root^(e+1)
// (or its inverse) of length > threshold, replace it by the inverse of the
// complement inside the containing relator instance, and freely reduce.
// Returns false when no such factor exists.
bool spelling_step(const GeneratorSet& gs, Word& w, const Word& root, int exponent) {
  const int period = (int)root.size();
  const int rel_len = exponent * period;
  const int threshold = (exponent - 1) * period;
  if ((int)w.size() <= threshold) return false;

  for (const bool inverted : {false, true}) {
    Word u = inverted ? inverse_word(gs, root) : root;
    // U = u repeated (exponent+1) times; factors of cyclic shifts of u^exponent
    // of length <= rel_len are exactly factors of U starting at offset < period.
    std::vector<Gen> U;
    U.reserve((size_t)(exponent + 1) * period);
    for (int i = 0; i <= exponent; ++i)
      U.insert(U.end(), u.letters.begin(), u.letters.end());

    int best_len = 0, best_pos = -1, best_off = -1;
    for (int pos = 0; pos + threshold < (int)w.size(); ++pos) {
      for (int off = 0; off < period; ++off) {
        int l = 0;
        while (pos + l < (int)w.size() && off + l < (int)U.size() && l < rel_len &&
               w.letters[pos + l] == U[off + l])
          ++l;
        if (l > best_len) {
          best_len = l;
          best_pos = pos;
          best_off = off;
        }
      }
      if (best_len == rel_len) break;
    }
    if (best_len > threshold) {
      // relator instance r = U[best_off .. best_off+rel_len) is trivial;
      // factor v = first best_len letters of r, so v = complement^-1.
      std::vector<Gen> replacement;
      replacement.reserve(rel_len - best_len);
      for (int i = best_off + rel_len - 1; i >= best_off + best_len; --i)
        replacement.push_back(gs.inverse(U[i]));
      Word next;
      next.letters.reserve(w.size() - best_len + replacement.size());
      next.letters.insert(next.letters.end(), w.letters.begin(), w.letters.begin() + best_pos);
      next.letters.insert(next.letters.end(), replacement.begin(), replacement.end());
      next.letters.insert(next.letters.end(), w.letters.begin() + best_pos + best_len,
                          w.letters.end());
      w = free_reduce(gs, next);
      return true;
    }
  }
  return false;
}

// One Dehn pass: find a factor of w matching more than half of a symmetrized
// relator (all rotations and inverses are members, so factors are prefixes),
// replace by the inverse of the complement, freely reduce.
bool dehn_step(const GeneratorSet& gs, Word& w, const SymmetrizedRelators& symm) {
  for (size_t pos = 0; pos < w.size(); ++pos) {
    for (const Word& r : symm.words) {
      size_t l = 0;
      while (pos + l < w.size() && l < r.size() && w.letters[pos + l] == r.letters[l]) ++l;
      if (2 * l > r.size()) {
        std::vector<Gen> replacement;
        replacement.reserve(r.size() - l);
        for (size_t i = r.size(); i > l; --i) replacement.push_back(gs.inverse(r.letters[i - 1]));
        Word next;
        next.letters.insert(next.letters.end(), w.letters.begin(), w.letters.begin() + pos);
        next.letters.insert(next.letters.end(), replacement.begin(), replacement.end());
        next.letters.insert(next.letters.end(), w.letters.begin() + pos + l, w.letters.end());
        w = free_reduce(gs, next);
        return true;
      }
    }
  }
  return false;
}

}  // namespace

bool word_problem(const Presentation& p, const Word& w0, WordProblemTrace* trace) {
  const GeneratorSet& gs = p.gens();
  Word w = w0.reduced ? w0 : free_reduce(gs, w0);
  if (trace) trace->lengths.assign(1, (int)w.size());

  switch (p.kind()) {
    case PresentationKind::Free:
      return w.empty();

    case PresentationKind::FreeAlias: {
      Word e = p.expand_aliases(w);
      if (trace) trace->lengths.push_back((int)e.size());
      return e.empty();
    }

    case PresentationKind::OneRelatorPower: {
      while (spelling_step(gs, w, p.power_root(), p.power_exponent())) {
        if (trace) {
          assert(trace->lengths.empty() || (int)w.size() < trace->lengths.back());
          trace->lengths.push_back((int)w.size());
        }
      }
      return w.empty();
    }

    case PresentationKind::SmallCancellation: {
      if (p.symmetrized().lambda_cyclic >= 1.0 / 6.0)
        throw unsupported_oracle_error("Dehn's algorithm requires C'(1/6), lambda = " +
                                       std::to_string(p.symmetrized().lambda_cyclic));
      while (dehn_step(gs, w, p.symmetrized())) {
        if (trace) trace->lengths.push_back((int)w.size());
      }
      return w.empty();
    }

    case PresentationKind::Generic:
      throw unsupported_oracle_error("no exact word problem for generic presentations");
  }
  return false;
}

bool elements_equal(const Presentation& p, const Word& a, const Word& b) {
  return word_problem(p, concat_reduced(p.gens(), a, inverse_word(p.gens(), b)));
}

}  // namespace relgrowth
