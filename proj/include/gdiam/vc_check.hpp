#pragma once

#include "gdiam/geom.hpp"
#include "gdiam/instance.hpp"
#include "gdiam/range_index.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gdiam {

// Subsets of {0..ground-1} as bitsets.
struct TraceFamily {
  int ground = 0;
  std::vector<std::vector<std::uint64_t>> sets;

  explicit TraceFamily(int n = 0) : ground(n) {}
  void add(const std::vector<int>& members);
  bool contains(std::size_t set, int elem) const { return (sets[set][elem >> 6] >> (elem & 63)) & 1; }
  std::vector<int> members(std::size_t set) const;
  std::size_t words() const { return (static_cast<std::size_t>(ground) + 63) / 64; }
};

// Number of distinct S ∩ F over F in the family. Throws std::out_of_range
// for indices outside the ground set.
std::size_t trace_count(const TraceFamily& fam, const std::vector<int>& subset);

struct ShatterSearch {
  std::optional<std::vector<int>> subset;
  bool exhaustive = false;  // only then does an empty result prove absence
  std::uint64_t nodes = 0;
};

// A shattered k-subset. Exhaustive (backtracking over shattered prefixes)
// when C(ground, k) <= exhaustive_limit, otherwise `budget` random trials.
// Throws std::invalid_argument for k > 20.
ShatterSearch find_shattered_subset(const TraceFamily& fam, int k, std::uint64_t budget = 100000,
                                    std::uint64_t seed = 1, std::uint64_t exhaustive_limit = 2000000);

// {N^2[r]} over P for p <1 q <2 r (strict relations).
TraceFamily neighborhood_family(std::span<const Pt3> P, std::span<const Pt3> Q, std::span<const Pt3> R,
                                const GeneralizedDominance& r1, const GeneralizedDominance& r2);
// {N^3[s]} over P for p <1 q <2 r <3 s.
TraceFamily neighborhood_family(std::span<const Pt3> P, std::span<const Pt3> Q, std::span<const Pt3> R,
                                std::span<const Pt3> S, const GeneralizedDominance& r1,
                                const GeneralizedDominance& r2, const GeneralizedDominance& r3);
// Objects: groups.front() is the ground set, groups.back() indexes the sets,
// consecutive groups are linked by intersection (hops = groups.size() - 1).
TraceFamily neighborhood_family(const std::vector<std::vector<GeomObject<Rat>>>& groups);

// Rectangles s_a per set, p_ab per membership and q_b per ground element,
// in groups "S", "P", "Q". The distance-2 ball of s_a restricted to the q's
// is exactly set a.
Instance rect_unbounded_vc_instance(const TraceFamily& system);

TraceFamily power_set_system(int k);

// Sign pattern per axis: +1 (0, inf), -1 (-inf, 0), 0 all of R.
using SignBox = std::array<int, 3>;
bool in_sign_box(const Pt3& p, const SignBox& b);
std::vector<Pt3> filter_sign_box(std::span<const Pt3> pts, const SignBox& b);

// For P in (-inf,0)^3 and R in (0,inf)^3: the 6 regions for Q whose
// subsystems cover N^2[r].
std::vector<SignBox> diam2_cover_regions();
// For P in (-inf,0)^3 and S in (0,inf)^3: the 15 (Q region, R region) pairs.
std::vector<std::pair<SignBox, SignBox>> diam3_cover_regions();

enum class VcCase { Diam2Vc1, Diam3Vc1, Diam3Vc2, RectUnbounded };
const char* vc_case_name(VcCase c);
VcCase parse_vc_case(const std::string& s);

// One random configuration satisfying the separation hypotheses of a case.
struct VcConfig {
  std::vector<Pt3> P, Q, R, S;  // S empty for Diam2Vc1
  GeneralizedDominance r1, r2, r3;
  int forbidden_k = 2;  // no shattered set of this size may exist
  std::string hypothesis;
  // Sampling box per group (P, Q, R, S) and axis; keeps the separations.
  std::array<std::array<double, 3>, 4> lo{}, hi{};
  bool lattice = false;  // coordinates on the 1/8 grid
};
VcConfig random_vc_config(VcCase c, std::uint64_t seed, int max_points = 30);
TraceFamily family_of(const VcConfig& cfg);

struct VcReport {
  int trials = 0;
  int violations = 0;
  int nontrivial = 0;  // families shattering a set of size forbidden_k - 1
  bool exhaustive = true;
  std::string witness;  // first violation
  bool ok() const { return violations == 0 && exhaustive; }
};

// Falsification suite; for RectUnbounded, trials is the largest k checked.
VcReport run_vc_case(VcCase c, int trials, std::uint64_t seed);

// Largest number of traces on a size-k subset of the ground set (exhaustive).
std::size_t max_trace_count(const TraceFamily& fam, int k);

// Hill climbing on small configurations: moves one point inside its sampling
// box or changes one relation, keeping moves that do not lower the best trace
// count on forbidden_k-subsets. Reaching 2^forbidden_k is a violation.
VcReport adversarial_vc_case(VcCase c, int restarts, int steps, std::uint64_t seed, int points = 8);

}  // namespace gdiam
