#pragma once

#include "gdiam/geom.hpp"
#include "gdiam/range_index.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace gdiam {

using Cell3 = std::array<std::int64_t, 3>;

// Strict: relations are < / >, a connection is phi < psi.
// Closed: relations are <= / >= (touching cubes), a connection is phi <= psi.
enum class Closure { Strict, Closed };

struct ScalarMaps {
  std::vector<double> phi;  // one per P point
  std::vector<double> psi;  // one per R point
};

// Row-major vectors; coordinate j of phi and of psi belong to the same subsystem.
// A pair is connected iff phi(p) does not dominate psi(r), i.e. some coordinate
// satisfies the connection test of the closure.
struct VectorMaps {
  int width = 0;
  Closure closure = Closure::Strict;
  std::vector<double> phi, psi;
  std::vector<char> active;  // per coordinate; inactive ones can never connect

  std::size_t p_count() const { return width ? phi.size() / width : 0; }
  std::size_t r_count() const { return width ? psi.size() / width : 0; }
  std::span<const double> phi_row(std::size_t i) const { return {phi.data() + i * width, static_cast<std::size_t>(width)}; }
  std::span<const double> psi_row(std::size_t i) const { return {psi.data() + i * width, static_cast<std::size_t>(width)}; }
  bool connected(std::size_t p, std::size_t r) const;
};

// q in Q, restricted to (mu_x,inf)x(mu_y,inf)xR, with p rel1 q and q rel2 r
// iff phi(p) < psi(r). P must lie in (-inf,mu_x)x(-inf,mu_y)xR. Relations are strict.
ScalarMaps map_separated_pair(std::span<const Pt3> P, std::span<const Pt3> R, const RangeMaxIndex& Q,
                              const GeneralizedDominance& rel1, const GeneralizedDominance& rel2, double mu_x,
                              double mu_y);

// P strictly below mu and R strictly above mu on all axes.
// Some q in Q with p rel1 q rel2 r iff phi(p) does not dominate psi(r). Width 6.
VectorMaps map_octant_six(std::span<const Pt3> P, std::span<const Pt3> R, const RangeMaxIndex& Q,
                          const GeneralizedDominance& rel1, const GeneralizedDominance& rel2, const Pt3& mu);

// Unit-cube centers of Q bucketed by grid cell. Each cell keeps an index over
// coordinates relative to the cell corner; a global index serves emptiness tests.
class CubeQIndex {
 public:
  explicit CubeQIndex(std::span<const Pt3> Q);
  const RangeMaxIndex* cell(const Cell3& c) const;
  const RangeMaxIndex& global() const { return global_; }
  // Some q whose cube meets both cube(a) and cube(b).
  bool common_neighbor(const Pt3& a, const Pt3& b) const;

 private:
  std::map<Cell3, RangeMaxIndex> cells_;
  RangeMaxIndex global_;
};

Cell3 cell_of(const Pt3& p);

// Slots per alpha_Q offset (27) times the six octant subsystems.
inline constexpr int kCubeMapWidth = 27 * 6;

// P in alphaP + (0,mu), R in alphaR + (mu,1) when every sigma is +1; a sigma of
// -1 swaps the sides on that axis. Points are actual centers. Closed relations.
// Some q meets both cube(p) and cube(r) iff phi(p) does not dominate psi(r).
VectorMaps map_unitcube_cells(std::span<const Pt3> P, std::span<const Pt3> R, const CubeQIndex& Q,
                              const Cell3& alphaP, const Cell3& alphaR, const Pt3& mu,
                              const std::array<int, 3>& sigma = {1, 1, 1});

enum class DominanceMethod { Scan, Tree };

// Some (p, r) that is not connected by the maps and passes the filter.
// Returns the pair when found.
std::optional<std::pair<int, int>> find_dominance_pair(const VectorMaps& maps,
                                                       const std::function<bool(int, int)>& counts,
                                                       DominanceMethod method = DominanceMethod::Tree);

bool dominance_pair_exists(const VectorMaps& maps, const std::function<bool(int, int)>& counts,
                           DominanceMethod method = DominanceMethod::Tree);

struct Diam2CubeOptions {
  DominanceMethod method = DominanceMethod::Tree;
  // Subproblems with |P|*|R| at or below this are checked pair by pair.
  std::size_t direct_pairs = 4096;
  // Before splitting, drop points whose cube shares one q with every cube on
  // the other side. Exact; off only for measuring the bare recursion.
  bool retire_covered = true;
};

struct Diam2CubeStats {
  std::uint64_t separated_calls = 0;
  std::uint64_t direct_pairs = 0;
  std::uint64_t recursion_nodes = 0;
  std::uint64_t point_visits = 0;  // sum of |P|+|R| over recursion nodes
};

struct Diam2Result {
  bool ok = true;
  std::optional<std::pair<int, int>> witness;  // (p index, r index)
  Diam2CubeStats stats;
};

// P in alphaP+[0,1)^3, R in alphaR+[0,1)^3.
Diam2Result solve_cell_pair(std::span<const Pt3> P, const CubeQIndex& Q, std::span<const Pt3> R,
                            const Cell3& alphaP, const Cell3& alphaR, const Diam2CubeOptions& opt = {});

// Every (p, r) meets directly or has a q meeting both.
Diam2Result diam2_unit_cubes(std::span<const Pt3> P, std::span<const Pt3> Q, std::span<const Pt3> R,
                             const Diam2CubeOptions& opt = {});

}  // namespace gdiam
