#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "relgrowth/words.hpp"

namespace relgrowth {

// Line-oriented presentation text format (UTF-8):
//   gens: a b           generators; inverses auto-named A B
//   rel: abAB^3         relator; ^n raises the whole (or parenthesized)
//                       preceding word to the n-th power
//   order: a A b B      optional explicit total symbol order
// Blank lines and lines starting with '#' are ignored. The presentation
// kind is inferred: no relators -> free; a single relator that is a proper
// power u^n (n >= 2) -> one-relator-power; relators meeting C'(1/6) ->
// small-cancellation; anything else -> generic (sub-girth mode only).
std::shared_ptr<const Presentation> parse_presentation(std::istream& in);
std::shared_ptr<const Presentation> parse_presentation_text(const std::string& text);
std::shared_ptr<const Presentation> load_presentation_file(const std::string& path);

}  // namespace relgrowth
