#pragma once

#include "gdiam/instance.hpp"

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace gdiam {

struct IntersectionGraph {
  int n = 0;
  std::vector<std::vector<int>> adj;  // sorted, symmetric, no self-loops
  std::vector<int> part;              // optional part label per vertex

  std::size_t edge_count() const;
};

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

// Hop distances from one source; kUnreachable marks other components.
struct DistanceMatrixSlice {
  int source = 0;
  std::vector<int> dist;
};

// Unit cubes are bucketed on the unit grid; other kinds are compared pairwise.
template <class T>
IntersectionGraph build_intersection_graph(const std::vector<GeomObject<T>>& objects);

IntersectionGraph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges);

DistanceMatrixSlice bfs_distances(const IntersectionGraph& g, int source);

// Connected and every eccentricity at most delta.
bool diameter_at_most(const IntersectionGraph& g, int delta);

struct PathCheckResult {
  bool ok = true;
  std::vector<std::pair<int, int>> violations;  // (first-group index, last-group index)
  std::size_t violation_count = 0;               // total, even beyond the cap
};

// hops = 2, groups {P, Q, R}: every (p, r) meets directly or through a common q.
// hops = 3, groups {P, Q, R, S}: every (p, s) has a chain p-q-r-s.
template <class T>
PathCheckResult multipartite_common_path_check(const std::vector<std::vector<GeomObject<T>>>& groups, int hops,
                                               std::size_t cap = 1024);

// Convenience for 3D unit-cube centers.
PathCheckResult cube_path_check(const std::vector<std::vector<std::array<double, 3>>>& groups, int hops,
                                std::size_t cap = 1024);

}  // namespace gdiam
