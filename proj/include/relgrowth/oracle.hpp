#pragma once

#include <vector>

#include "relgrowth/words.hpp"

namespace relgrowth {

// Word lengths after each rewriting step; strictly decreasing for the
// spelling and Dehn procedures (the termination certificate).
struct WordProblemTrace {
  std::vector<int> lengths;
};

// Exact triviality test for the supported presentation kinds:
//   Free            - freely reduced empty word.
//   FreeAlias       - expand redundant generators, freely reduce.
//   OneRelatorPower - spelling reduction: any factor of a cyclic shift of
//                     u^(+-n) longer than (n-1)|u| is replaced by the
//                     strictly shorter complement.
//   SmallCancellation - Dehn's algorithm, valid under C'(1/6).
// Generic kind has no oracle and throws unsupported_oracle_error.
bool word_problem(const Presentation& p, const Word& w, WordProblemTrace* trace = nullptr);

bool elements_equal(const Presentation& p, const Word& a, const Word& b);

}  // namespace relgrowth
