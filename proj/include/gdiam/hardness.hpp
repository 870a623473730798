#pragma once

#include "gdiam/instance.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gdiam {

// tripartite: layered A-B-C graph, edges only A x B and B x C.
// fourpartite / tripartite_simple: edges between any two distinct parts.
// hypergraph6: 3-uniform, each triple from three distinct parts of six.
enum class SourceKind { Tripartite, Fourpartite, TripartiteSimple, Hypergraph6 };

const char* source_kind_name(SourceKind k);
SourceKind parse_source_kind(const std::string& s);

struct SourceGraph {
  SourceKind kind = SourceKind::Tripartite;
  std::vector<int> part_sizes;
  // Global vertex ids (parts concatenated), sorted within each edge.
  std::vector<std::vector<int>> edges;

  int vertex_count() const;
  int part_of(int v) const;
  int local_index(int v) const;
  int global_id(int part, int idx) const;

  // Throws std::invalid_argument on arity, range, partition or duplicate errors.
  void validate() const;
};

// Text format: "<kind> <size> <size> ...", then one edge per line as global ids.
std::string format_source_graph(const SourceGraph& g);
SourceGraph parse_source_graph(const std::string& text);
SourceGraph load_source_graph(const std::string& path);
void save_source_graph(const SourceGraph& g, const std::string& path);

// Random graphs; every edge (or triple) is kept independently with probability p.
SourceGraph random_source_graph(SourceKind kind, const std::vector<int>& part_sizes, double p, std::uint64_t seed);

enum class Target { Balls3d, Hypercubes4d, Cubes3d, Rects2d, Hypercubes10d, Hypercubes6d, Hypercubes4dDiam2, Balls7d };

const char* target_name(Target t);
Target parse_target(const std::string& s);
SourceKind source_kind_for(Target t);
// 3 for the tripartite targets, 2 for the clique targets.
int target_threshold(Target t);

struct ReductionParams {
  Rat epsilon;
  Rat sin_delta = 0, cos_delta = 1;  // rational point on the unit circle
  // Coordinate assigned to each vertex, per part.
  std::vector<std::vector<Rat>> values;
  // Second circle coordinate sqrt(1 - v^2) for parts placed on the unit circle.
  std::vector<std::vector<Rat>> circle_w;
  // One extra isolated vertex per far-side part (clique targets only).
  bool pad_isolated = true;
  // Skip the range and gap checks, for building deliberately broken instances.
  bool unchecked = false;
};

// Constants use n' = the next power of two >= max(n, 16), n = vertex count:
// balls3d eps = 1/(16 n'^4), delta from the circle parameter 1/(32 n'^3);
// balls7d eps = 1/(16 n'^3). Cube and rectangle values are dyadic.
ReductionParams default_params(const SourceGraph& g, Target t);

// Throws std::invalid_argument when a value leaves its range or two values in
// one part coincide.
void check_params(const SourceGraph& g, Target t, const ReductionParams& p);

// Groups B1..B4 (s_a, p_ab, q_bc, t_c). Labels hold (part, index) pairs.
Instance reduce_tripartite(const SourceGraph& g, Target t, const ReductionParams& p);
Instance reduce_tripartite(const SourceGraph& g, Target t);

// Groups S, T, P and the single extra object Z.
Instance reduce_hyperclique_10d(const SourceGraph& h, const ReductionParams& p);
Instance reduce_hyperclique_10d(const SourceGraph& h);
Instance reduce_clique_variants(const SourceGraph& g, Target t, const ReductionParams& p);
Instance reduce_clique_variants(const SourceGraph& g, Target t);

// Dispatches on the target.
Instance reduce(const SourceGraph& g, Target t, const ReductionParams& p);
Instance reduce(const SourceGraph& g, Target t);

// The source graph the clique reductions actually encode, i.e. with the
// padding vertices when enabled.
SourceGraph padded_source(const SourceGraph& g, Target t, bool pad);

enum class Observation { Ball3D, Cube4D, Cube10D, Cube6D };
const char* observation_name(Observation o);
Observation parse_observation(const std::string& s);

struct ObservationReport {
  bool ok = true;
  int item = 0;  // failing item number, 1-based
  std::string message;
  std::size_t checks = 0;
};

// Ball3D and Cube4D: items 1-5 on groups B1..B4 (any tripartite target).
// Cube10D and Cube6D: items 1-4 on groups S, T, P, Z (any clique target).
// Throws std::invalid_argument if labels are missing.
ObservationReport verify_observations(const Instance& inst, Observation which);

// Source-side predicates.
bool every_ac_pair_within_two(const SourceGraph& g);  // BFS on G
bool has_triangle(const SourceGraph& g);
bool has_four_clique(const SourceGraph& g);
bool has_six_hyperclique(const SourceGraph& h);

// The statement the reduction encodes: for tripartite targets "every (a, c)
// is joined through B", for clique targets "no clique".
bool source_predicate(const SourceGraph& g, Target t);

// Exact intersection graph of the instance has diameter <= threshold.
bool instance_diameter_at_most(const Instance& inst, int threshold);

struct EquivalenceCheck {
  bool source = false;
  bool geometric = false;
  bool agree() const { return source == geometric; }
};

EquivalenceCheck check_equivalence(const SourceGraph& g, Target t, const ReductionParams& p);
EquivalenceCheck check_equivalence(const SourceGraph& g, Target t);

}  // namespace gdiam
