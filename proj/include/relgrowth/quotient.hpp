#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "relgrowth/ball.hpp"

namespace relgrowth {

// F/<<h^n>>: a one-relator-power quotient of a free base. The relator is
// normalized through the root of h, so h = u^m yields exponent m*n on u.
struct PowerQuotient {
  std::shared_ptr<const Presentation> base;
  Word h;
  int n = 0;
  std::shared_ptr<const Presentation> quotient;
  Word root;
  int exponent = 0;     // exponent on the root
  int girth_bound = 0;  // (exponent-1)*|root|: kernel words are strictly longer
};

PowerQuotient make_power_quotient(std::shared_ptr<const Presentation> base, const Word& h, int n);

// Does the lexi-geodesic of g eps-contain an f-subword: some element t with
// d(t, w_g) <= eps and d(t f, w_g) <= eps (closed balls; eps = 0 places
// both endpoints on the geodesic itself).
bool epsilon_contains(uint32_t g, const Word& f, int eps, const Ball& b);

// W = E(h, L): powers of the root of h longer than L, up to sign.
struct ContainmentFilter {
  Word root;
  int L = 0;
  int eps = 0;
};

// Elements of the ball whose lexi-geodesics eps-contain no member of W.
std::vector<uint32_t> language_filter(const Ball& b, const ContainmentFilter& filter);

struct InjectivityReport {
  size_t checked_pairs = 0;
  std::vector<std::pair<uint32_t, uint32_t>> collisions;
  bool injective() const { return collisions.empty(); }
};

// Pairwise injectivity of the quotient map on `kept`, decided by the
// spelling oracle on difference words.
InjectivityReport injectivity_check(std::span<const uint32_t> kept, const PowerQuotient& q,
                                    const Ball& base_ball, int threads = 1);

struct ExperimentLeg {
  int n = 0;
  int exponent = 0;
  int girth_bound = 0;
  std::vector<uint64_t> spheres;
  int collapse_radius = -1;  // first radius with a smaller sphere; -1 = none
  double estimate = 0.0;     // sphere-ratio estimate at the top radius
  bool equals_free_ball = false;
  std::string error;  // set when this leg failed (budget etc.)
};

struct ExperimentResult {
  Word h;
  int radius = 0;
  std::vector<uint64_t> free_spheres;
  double free_estimate = 0.0;
  std::vector<ExperimentLeg> per_n;
  bool estimates_nondecreasing = false;
};

// Growth of F/<<h^n>> across n: per-n quotient balls, collapse radii and
// sphere-ratio estimates, with the free-group reference column.
ExperimentResult theorem_a_experiment(std::shared_ptr<const Presentation> base, const Word& h,
                                      const std::vector<int>& n_list, int radius,
                                      int threads = 1);

}  // namespace relgrowth
