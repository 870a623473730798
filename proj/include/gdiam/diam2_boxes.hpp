#pragma once

#include "gdiam/geom.hpp"
#include "gdiam/range_index.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace gdiam {

// Closed axis box in 3D; rectangles are embedded as x by {0} by y.
struct Box3 {
  Pt3 lo, hi;
};

Box3 to_box3(const AxisBoxD<double>& b);  // 2D rectangles use the embedding above
bool box3_intersect(const Box3& a, const Box3& b);

using Code6 = std::array<double, 6>;

// phi(q) = (x-, -x+, y-, -y+, z-, -z+), psi(p) = (x+, -x-, y+, -y-, z+, -z-).
// Closed boxes p, q meet iff phi(q) <= psi(p) componentwise.
Code6 box_phi(const Box3& b);
Code6 box_psi(const Box3& b);

enum class CodeSide { Phi, Psi };

// 6 entries for 3D boxes, 4 for rectangles.
std::vector<double> box_code(const AxisBoxD<double>& b, CodeSide side);

// I and its complement, as positions 0..5 of a Code6.
struct ProjectionIndex {
  std::vector<int> I, Ic;
};

// The 20 three-element subsets of {0..5}; for rectangles (dim 2) the 6
// two-element subsets of the live positions {0,1,4,5}, with position 2 (always
// a tie) padding Ic to three entries.
std::vector<ProjectionIndex> projection_indices(int dim);

// pi_I(a) <= pi_I(b) componentwise.
bool projected_leq(const Code6& a, const Code6& b, const std::vector<int>& I);

struct NonuniformGrid {
  // planes[a] has g + 1 nondecreasing entries; the first and last are the
  // extreme endpoints on axis a.
  std::array<std::vector<double>, 3> planes;
  int g = 1;
};

// Equal-frequency planes over the endpoint multiset of every box.
NonuniformGrid build_nonuniform_grid(std::span<const Box3> boxes, int g);

struct GridBox {
  // Plane indices per axis, lo[a] <= hi[a] unless empty.
  std::array<int, 3> lo{}, hi{};
  bool empty = true;
  bool bottomless = false;  // z side extends to -inf

  Box3 geometry(const NonuniformGrid& grid) const;
  bool operator==(const GridBox&) const = default;
};

GridBox inscribe_grid_box(const Box3& p, const NonuniformGrid& grid);
GridBox bottomless_of(const GridBox& b);

// Cell lo <= v < hi per axis.
struct StairCell {
  Pt3 lo, hi;
  bool contains(const Pt3& v) const;
};

// Complement of the union of closed orthants {v : apex <= v}, as disjoint
// half-open cells, by an x sweep that maintains the (y, z) staircase.
struct Staircase3 {
  std::vector<Pt3> apexes;
  std::vector<StairCell> cells;

  bool in_union(const Pt3& v) const;  // some apex <= v
};

Staircase3 staircase_complement_decompose(std::vector<Pt3> apexes);

// Weight of each r: the largest z+ of a q in Q meeting both r and `down`, or
// -inf. With down the bottomless extension of a grid box h, R(h) is exactly
// {r : weight >= z-(h)}.
std::vector<double> weighted_r_down(std::span<const Box3> Q, std::span<const Box3> R, const Box3& down);
// Direct R(h): r meeting some q that meets h.
std::vector<char> r_of_box(std::span<const Box3> Q, std::span<const Box3> R, const Box3& h);

struct Diam2BoxOptions {
  int g = 0;  // 0: n^(1/6) boxes, n^(1/4) rectangles, n^(1/5) cubes
  // Weighted bottomless grid boxes stand in for the full grid boxes; off for cubes.
  bool bottomless = true;
};

struct Diam2BoxStats {
  int g = 0;
  std::uint64_t grid_boxes = 0;   // distinct p-hat (or p-hat-down) over all orientations
  std::uint64_t empty_hats = 0;   // p with empty p-hat
  std::uint64_t l_total = 0;      // sum of |L(p)|
  std::uint64_t l_max = 0;
  std::uint64_t stair_cells = 0;
  std::uint64_t range_queries = 0;
};

struct Diam2BoxResult {
  bool ok = true;
  std::optional<std::pair<int, int>> witness;  // (p, r) disjoint and without a common Q neighbor
  Diam2BoxStats stats;
};

// Every (p, r) in P x R with pi_I(psi(p)) <= pi_I(psi(r)) meets directly or has
// a common Q neighbor.
Diam2BoxResult solve_projection_case(std::span<const Box3> P, std::span<const Box3> Q, std::span<const Box3> R,
                                     const ProjectionIndex& I, const Diam2BoxOptions& opt = {});

// Every (p, r) in P x R meets directly or has a common Q neighbor.
Diam2BoxResult diam2_boxes(std::span<const Box3> P, std::span<const Box3> Q, std::span<const Box3> R,
                           const Diam2BoxOptions& opt = {});
Diam2BoxResult diam2_rectangles(std::span<const Box3> P, std::span<const Box3> Q, std::span<const Box3> R,
                                const Diam2BoxOptions& opt = {});
Diam2BoxResult diam2_cubes3d(std::span<const Box3> P, std::span<const Box3> Q, std::span<const Box3> R,
                             const Diam2BoxOptions& opt = {});

// Convenience: convert and dispatch on dimension (2 = rectangles).
Diam2BoxResult diam2_boxes(const std::vector<AxisBoxD<double>>& P, const std::vector<AxisBoxD<double>>& Q,
                           const std::vector<AxisBoxD<double>>& R, const Diam2BoxOptions& opt = {});

int default_box_grid(std::size_t n, int kind);  // kind: 0 boxes, 1 rectangles, 2 cubes

}  // namespace gdiam
