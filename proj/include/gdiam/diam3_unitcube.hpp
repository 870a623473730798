#pragma once

#include "gdiam/cutting.hpp"
#include "gdiam/diam2_unitcube.hpp"
#include "gdiam/geom.hpp"
#include "gdiam/pseudoline.hpp"
#include "gdiam/range_index.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace gdiam {

// (rel1, rel2, rel3) of a chain p rel1 q rel2 r rel3 s. In this module the
// relations are closed: LT reads <=, GT reads >=.
using Rels3 = std::array<GeneralizedDominance, 3>;

bool closed_holds(const GeneralizedDominance& g, const Pt3& a, const Pt3& b);

// Axis on which (P,Q), (Q,R) and (R,S) are separated, a permutation of 0,1,2.
// The point order follows axis qr ("y" of the pseudoline view).
struct ChainAxes {
  int pq = 0, qr = 1, rs = 2;
};

// The chain of derived relations for separations (x, y, z); ANY reads as LT,
// which is harmless because an ANY on a free axis rules out the crossing pattern.
struct StarOrder {
  Rel z1 = Rel::LT;  // between q and q'
  Rel x2 = Rel::LT;  // between r and r'
  Rel y = Rel::LT;   // between s and s'; LT orders S by increasing y
};

// Table lookup over (rel1 y, rel1 z, rel2 z, rel2 x, rel3 x, rel3 y) after
// mapping axes by `axes`.
StarOrder star_order(const Rels3& rels, const ChainAxes& axes = {});

// P by increasing coordinate `axis`, ties by index.
std::vector<int> star_point_order(std::span<const Pt3> P, int axis);
// S by coordinate `axis` in the direction of star_order(...).y, ties by index in the same direction.
std::vector<int> star_set_order(std::span<const Pt3> S, const Rels3& rels, const ChainAxes& axes = {});

// N3 sets {p : p rel1 q rel2 r rel3 s for some q, r} as intervals over P's order,
// one per s in S's order. P must be sorted by y; (P,Q) x-separated, (Q,R)
// y-separated, (R,S) z-separated. Staged bitset scans, O(|P|(|Q|+|R|+|S|)) words.
std::vector<IntervalRepr> neighborhood_intervals(std::span<const Pt3> P, std::span<const Pt3> Q,
                                                 std::span<const Pt3> R, std::span<const Pt3> S, const Rels3& rels);

// Brute force over (q, r); reference for the structured versions.
bool chain_exists(const Pt3& p, const Pt3& s, std::span<const Pt3> Q, std::span<const Pt3> R, const Rels3& rels);

// One consecutive pair (0 = P/Q, 1 = Q/R, 2 = R/S) separated on at least two
// axes. A chain exists iff phi(p) <= psi(s). Range max/min queries; an ANY on
// the free axis becomes a constant channel instead of a shifted coordinate.
ScalarMaps scalar_chain_maps(std::span<const Pt3> P, std::span<const Pt3> Q, std::span<const Pt3> R,
                             std::span<const Pt3> S, const Rels3& rels, int pair);

// gamma = [lo, hi) per axis inside [0,1)^3. shadow(gamma) is the union of the
// three slabs through gamma.
struct ShadowBox {
  Pt3 lo{0, 0, 0}, hi{1, 1, 1};

  // -1 below the slab, 0 inside, +1 above.
  int side(int axis, double v) const { return v < lo[axis] ? -1 : (v < hi[axis] ? 0 : 1); }
  bool contains(const Pt3& f) const { return side(0, f[0]) == 0 && side(1, f[1]) == 0 && side(2, f[2]) == 0; }
  bool in_shadow(const Pt3& f) const { return side(0, f[0]) == 0 || side(1, f[1]) == 0 || side(2, f[2]) == 0; }
  // Wraps each coordinate into [0,1) first.
  bool in_shadow_mod1(const Pt3& p) const;
};

struct Diam3Options {
  int g = 0;  // grid slabs per axis inside a unit cell; 0 picks max(2, round(n^(1/13)))
  std::uint64_t seed = 1;
  CuttingParams cutting;
  // Check the order condition on every interval-based system (tests).
  bool verify_systems = false;
};

struct Diam3Stats {
  std::uint64_t unit_cells = 0;
  std::uint64_t grid_cells = 0;
  std::uint64_t interval_systems = 0;
  std::uint64_t scalar_systems = 0;
  std::uint64_t empty_systems = 0;
  std::uint64_t max_levels = 0;
  std::uint64_t outside_pairs = 0;    // |L_gamma| summed
  std::uint64_t in_shadow_pairs = 0;  // |L'_gamma| summed
  std::uint64_t early_aborts = 0;
  CuttingStats cutting;

  void absorb(const CuttingStats& c);
};

struct ShadowCaseResult {
  std::vector<std::pair<int, int>> pairs;  // (P index, S index), sorted
  bool truncated = false;
  Diam3Stats stats;
};

// Pairs (p, s) without a chain p-q-r-s in which q, r, s are not all in
// shadow(gamma) modulo 1. P: centers in one unit cell, inside gamma modulo 1.
ShadowCaseResult shadow_case_solve(std::span<const Pt3> P, std::span<const Pt3> Q, std::span<const Pt3> R,
                                   std::span<const Pt3> S, const ShadowBox& gamma, const Diam3Options& opt = {});

struct Diam3Result {
  bool ok = true;
  std::optional<std::pair<int, int>> witness;  // (p index, s index) without a chain
  Diam3Stats stats;
};

// Every (p, s) in P x S has q in Q, r in R with cube(p)-cube(q)-cube(r)-cube(s)
// consecutive intersections.
Diam3Result diam3_unit_cubes(std::span<const Pt3> P, std::span<const Pt3> Q, std::span<const Pt3> R,
                             std::span<const Pt3> S, const Diam3Options& opt = {});

int default_grid_slabs(std::size_t n);

}  // namespace gdiam
