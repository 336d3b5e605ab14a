#include "relgrowth/presentation_io.hpp"

#include <fstream>
#include <sstream>

#include "relgrowth/errors.hpp"

namespace relgrowth {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

// word[^n] with the power applied to the parenthesized or whole preceding word
Word parse_relator(const GeneratorSet& gs, const std::string& text) {
  std::string body = trim(text);
  int power = 1;
  auto caret = body.rfind('^');
  if (caret != std::string::npos) {
    power = std::stoi(body.substr(caret + 1));
    body = trim(body.substr(0, caret));
  }
  if (!body.empty() && body.front() == '(' && body.back() == ')')
    body = body.substr(1, body.size() - 2);
  if (power < 1) throw input_error("relator power must be >= 1: " + text);
  Word base = parse_word(gs, body);
  Word rel;
  for (int i = 0; i < power; ++i) rel = concat(rel, base);
  return rel;
}

}  // namespace

std::shared_ptr<const Presentation> parse_presentation(std::istream& in) {
  std::vector<std::string> gen_names;
  std::vector<std::string> self_inv;
  std::vector<std::string> order;
  std::vector<std::string> relator_texts;

  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw input_error("bad presentation line: " + line);
    std::string key = trim(line.substr(0, colon));
    std::string val = trim(line.substr(colon + 1));
    if (key == "gens")
      gen_names = split_ws(val);
    else if (key == "selfinv")
      self_inv = split_ws(val);
    else if (key == "order")
      order = split_ws(val);
    else if (key == "rel")
      relator_texts.push_back(val);
    else if (key == "kind")
      ;  // ignored on input; kind is inferred
    else
      throw input_error("unknown presentation key: " + key);
  }
  if (gen_names.empty()) throw input_error("presentation has no gens: line");

  GeneratorSet gs = GeneratorSet::pairs(gen_names, self_inv);
  if (!order.empty()) gs.set_order(order);

  std::vector<Word> relators;
  for (const auto& t : relator_texts) relators.push_back(free_reduce(gs, parse_relator(gs, t)));

  if (relators.empty()) return Presentation::free_group(gs);

  if (relators.size() == 1) {
    auto [core, conj] = cyclic_reduce(gs, relators[0]);
    if (!core.empty()) {
      auto [root, k] = root_of(gs, core);
      if (k >= 2) return Presentation::one_relator_power(gs, root, k);
    }
  }
  auto symm = symmetrize_and_measure(relators, gs);
  if (symm.lambda_cyclic < 1.0 / 6.0) return Presentation::small_cancellation(gs, relators);
  return Presentation::generic(gs, relators);
}

std::shared_ptr<const Presentation> parse_presentation_text(const std::string& text) {
  std::istringstream in(text);
  return parse_presentation(in);
}

std::shared_ptr<const Presentation> load_presentation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open presentation file: " + path);
  return parse_presentation(in);
}

}  // namespace relgrowth
