#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relgrowth/peripheral.hpp"
#include "relgrowth/rational.hpp"

namespace relgrowth {

// Exact boundary model for the free group F_k: boundary points are infinite
// reduced words, Borel sets are finite unions of cylinders [w] (rays
// extending the reduced prefix w), and the Patterson-Sullivan measure at
// the identity gives [w] the exact mass (1/2k) (2k-1)^(-(|w|-1)).
//
// Geodesic uniqueness in the tree collapses the SOME/ANY distinction
// between shadows and strong shadows; every decomposition records that.
//
// F_k is of divergent type (the Poincare series diverges at the critical
// exponent), so the unmodified limit construction applies and Patterson's
// auxiliary slow-growth correction function is not needed here.

Rational cylinder_mass(const Word& prefix, int k);

// Mass of [prefix] for the conformal measure based at the vertex with
// canonical word `base` (the translate g_* mu_1).
Rational cylinder_mass_from(const Word& base, const Word& prefix, int k,
                            const GeneratorSet& gs);

enum class ShadowKind { Full, Strong, Partial };

struct ShadowDecomposition {
  uint32_t target = 0;
  int r = 0, eps = 0, R = 0;
  ShadowKind kind = ShadowKind::Full;
  std::vector<Word> cylinders;  // pairwise disjoint
  Rational mass;
  int horizon = 0;          // decision horizon used
  int deepest_prefix = 0;   // longest prefix actually explored
};

// Exact finite cylinder decomposition of the (partial) shadow of g. For
// partial shadows a PeripheralContext over the same ball is required.
ShadowDecomposition shadow_decompose(uint32_t g, int r, const Ball& b, ShadowKind kind,
                                     int eps = 0, int R = 0,
                                     const PeripheralContext* ctx = nullptr,
                                     int horizon_slack = 0);

// Exact Busemann cocycle B_xi(x, y) on the tree, xi given by a reduced
// prefix long enough to pin both ray projections.
long busemann(const Word& x, const Word& y, const Word& xi_prefix, int k,
              const GeneratorSet& gs);

struct ShadowRow {
  uint32_t g = 0;
  int d = 0;
  Rational mass;
  Rational ratio;  // mass * (2k-1)^d
};

struct ShadowLemmaReport {
  int r = 0;
  size_t count = 0;
  Rational min_ratio;
  Rational max_ratio;
  std::optional<Rational> constant_ratio;  // set when the ratio is constant
};

// mu_1(Pi_r(g)) * e^(gamma d(1,g)) over all g != 1 with headroom in the
// ball, with gamma = ln(2k-1); exact rationals throughout. Per-element rows
// are collected into `rows` when given.
ShadowLemmaReport verify_shadow_lemma(const Ball& b, int r, int k, int max_depth,
                                      std::vector<ShadowRow>* rows = nullptr);

struct PartialShadowLemmaReport {
  int r = 0, eps = 0, R = 0;
  size_t count = 0;
  Rational min_ratio;
  Rational max_ratio;
  bool horizon_stable = false;  // identical masses at horizon +1 and +2
};

PartialShadowLemmaReport verify_partial_shadow_lemma(const Ball& b, const PeripheralContext& ctx,
                                                     int r, int eps, int R, int k, int max_depth,
                                                     std::vector<ShadowRow>* rows = nullptr);

struct ConformalityCase {
  Word prefix;
  long busemann_value = 0;
  Rational ratio;      // mu_1(C) / mu_g(C)
  Rational expected;   // (2k-1)^(-B)
  bool exact = false;
};

struct ConformalityReport {
  uint32_t g = 0;
  std::vector<ConformalityCase> cases;
  bool all_exact = true;
};

// Checks mu_1(C)/mu_g(C) = (2k-1)^(-B_xi(1,g)) exactly on every cylinder
// with constant Busemann value, splitting finer where it is not constant.
ConformalityReport verify_conformality(const Ball& b, uint32_t g, int k, int max_prefix_len);

// Finite Patterson sum approximation of mu_1^s([prefix]) over B(1, N).
double patterson_estimate(const Word& prefix, int k, double s, int N, const Ball& b);

}  // namespace relgrowth
