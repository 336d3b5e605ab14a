#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "relgrowth/peripheral.hpp"

namespace relgrowth {

// Membership in the partial cone Omega_{r,eps,R}(g): some geodesic [1,h]
// meets B(g,r) and either d(1,h) <= d(1,g) + 2R or that geodesic carries an
// (eps,R)-transition point within 2R of g.
bool in_partial_cone(uint32_t h, uint32_t g, int r, int eps, int R, const PeripheralContext& ctx);

// Omega_{r,eps,R}(g) intersected with the annulus A(g, n, Delta).
std::vector<uint32_t> partial_cone_members(uint32_t g, int r, int eps, int R,
                                           const PeripheralContext& ctx, int n, int delta);

// The type-determining data of a partial cone, translated to the basepoint:
// level_data = g^-1 (B(g, 2R+1) intersect Omega_{eps,R}(g)), and f_data = the
// elements f in B(1, 2C+1) with d(1, gf) <= d(1, g). Two elements sharing
// the pair have the same partial cone; the pair may be strictly finer than
// the cone type itself.
struct PartialConeType {
  std::vector<uint32_t> level_data;
  std::vector<uint32_t> f_data;
  std::string key() const;        // certificate key: (level_data, f_data)
  std::string cone_key() const;   // the translated cone at the 2R+1 horizon
};

PartialConeType partial_cone_type(uint32_t g, int eps, int R, const PeripheralContext& ctx, int C);

struct TypeCensus {
  int eps = 0, R = 0, C = 0;
  int first_sphere = 0;
  std::vector<size_t> types_per_sphere;        // distinct translated cones per sphere
  std::vector<size_t> certificates_per_sphere; // distinct (level, F) pairs per sphere
  std::vector<size_t> cumulative_types;        // distinct cones up to each sphere
  bool stabilized = false;  // cone count equal on the last two spheres
};

TypeCensus enumerate_types(const PeripheralContext& ctx, int eps, int R, int C, int first_sphere,
                           int last_sphere, int threads = 1);

struct CompanionCone {
  uint32_t companion = Ball::npos;
  std::vector<size_t> counts;  // #Omega_{eps,R}(g', n, delta) for n = 1..horizon
  double score = 0.0;          // min_n counts[n] * exp(-n * gamma_hat)
};

// Element g' within search_r of g whose partial-cone annuli stay uniformly
// large; g' = 1 whenever g = 1, and g' = g when search_r = 0.
CompanionCone companion_cone(uint32_t g, int search_r, int eps, int R, int delta,
                             const PeripheralContext& ctx, int horizon);

}  // namespace relgrowth
