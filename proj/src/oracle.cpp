#include "gdiam/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

namespace gdiam {

std::size_t IntersectionGraph::edge_count() const {
  std::size_t m = 0;
  for (const auto& a : adj) m += a.size();
  return m / 2;
}

namespace {

std::int64_t floor_coord(double v) { return static_cast<std::int64_t>(std::floor(v)); }

std::int64_t floor_coord(const Rat& v) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return q.get_si();
}

// Dynamic bitset sized once; enough for oracle-scale work.
struct Bits {
  std::vector<std::uint64_t> w;
  explicit Bits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
  void set(std::size_t i) { w[i >> 6] |= std::uint64_t(1) << (i & 63); }
  bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  void or_with(const Bits& o) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] |= o.w[i];
  }
  bool intersects(const Bits& o) const {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] & o.w[i]) return true;
    return false;
  }
};

template <class T>
std::vector<Bits> cross_adjacency(const std::vector<GeomObject<T>>& a, const std::vector<GeomObject<T>>& b) {
  std::vector<Bits> out(a.size(), Bits(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (objects_intersect(a[i], b[j])) out[i].set(j);
  return out;
}

}  // namespace

template <class T>
IntersectionGraph build_intersection_graph(const std::vector<GeomObject<T>>& objects) {
  IntersectionGraph g;
  g.n = static_cast<int>(objects.size());
  g.adj.assign(g.n, {});
  if (objects.empty()) return g;
  const auto kind = objects[0].index();
  const int dim = object_dim(objects[0]);
  for (const auto& o : objects) {
    if (o.index() != kind) throw std::invalid_argument("mixed object kinds");
    require_same_dim(object_dim(o), dim);
  }
  if (kind == 0) {
    std::map<std::vector<std::int64_t>, std::vector<int>> cells;
    for (int i = 0; i < g.n; ++i) {
      const auto& c = std::get<0>(objects[i]).center;
      std::vector<std::int64_t> key(dim);
      for (int a = 0; a < dim; ++a) key[a] = floor_coord(c[a]);
      cells[key].push_back(i);
    }
    // Pairs of occupied cells at L-infinity distance <= 1.
    std::vector<const std::pair<const std::vector<std::int64_t>, std::vector<int>>*> occ;
    for (const auto& kv : cells) occ.push_back(&kv);
    for (std::size_t x = 0; x < occ.size(); ++x) {
      for (std::size_t y = x; y < occ.size(); ++y) {
        bool near = true;
        for (int a = 0; a < dim && near; ++a) near = std::llabs(occ[x]->first[a] - occ[y]->first[a]) <= 1;
        if (!near) continue;
        const auto& A = occ[x]->second;
        const auto& B = occ[y]->second;
        for (std::size_t i = 0; i < A.size(); ++i)
          for (std::size_t j = (x == y ? i + 1 : 0); j < B.size(); ++j)
            if (objects_intersect(objects[A[i]], objects[B[j]])) {
              g.adj[A[i]].push_back(B[j]);
              g.adj[B[j]].push_back(A[i]);
            }
      }
    }
  } else {
    for (int i = 0; i < g.n; ++i)
      for (int j = i + 1; j < g.n; ++j)
        if (objects_intersect(objects[i], objects[j])) {
          g.adj[i].push_back(j);
          g.adj[j].push_back(i);
        }
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

IntersectionGraph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  IntersectionGraph g;
  g.n = n;
  g.adj.assign(n, {});
  for (auto [u, v] : edges) {
    if (u == v) continue;
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& a : g.adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return g;
}

DistanceMatrixSlice bfs_distances(const IntersectionGraph& g, int source) {
  DistanceMatrixSlice s;
  s.source = source;
  s.dist.assign(g.n, kUnreachable);
  std::vector<int> frontier{source};
  s.dist[source] = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    int u = frontier[head];
    for (int v : g.adj[u])
      if (s.dist[v] == kUnreachable) {
        s.dist[v] = s.dist[u] + 1;
        frontier.push_back(v);
      }
  }
  return s;
}

bool diameter_at_most(const IntersectionGraph& g, int delta) {
  if (delta < 0) throw std::invalid_argument("delta must be non-negative");
  for (int v = 0; v < g.n; ++v) {
    auto s = bfs_distances(g, v);
    for (int d : s.dist)
      if (d > delta) return false;
  }
  return true;
}

template <class T>
PathCheckResult multipartite_common_path_check(const std::vector<std::vector<GeomObject<T>>>& groups, int hops,
                                               std::size_t cap) {
  PathCheckResult res;
  auto record = [&](int i, int j) {
    res.ok = false;
    ++res.violation_count;
    if (res.violations.size() < cap) res.violations.emplace_back(i, j);
  };
  if (hops == 2) {
    if (groups.size() != 3) throw std::invalid_argument("hops=2 needs groups P, Q, R");
    const auto& P = groups[0];
    const auto& Q = groups[1];
    const auto& R = groups[2];
    auto pq = cross_adjacency(P, Q);
    auto rq = cross_adjacency(R, Q);
    for (std::size_t i = 0; i < P.size(); ++i)
      for (std::size_t j = 0; j < R.size(); ++j)
        if (!objects_intersect(P[i], R[j]) && !pq[i].intersects(rq[j])) record(int(i), int(j));
  } else if (hops == 3) {
    if (groups.size() != 4) throw std::invalid_argument("hops=3 needs groups P, Q, R, S");
    const auto& P = groups[0];
    const auto& Q = groups[1];
    const auto& R = groups[2];
    const auto& S = groups[3];
    auto pq = cross_adjacency(P, Q);
    auto qr = cross_adjacency(Q, R);
    auto sr = cross_adjacency(S, R);
    for (std::size_t i = 0; i < P.size(); ++i) {
      Bits reach(R.size());
      for (std::size_t q = 0; q < Q.size(); ++q)
        if (pq[i].test(q)) reach.or_with(qr[q]);
      for (std::size_t j = 0; j < S.size(); ++j)
        if (!reach.intersects(sr[j])) record(int(i), int(j));
    }
  } else {
    throw std::invalid_argument("hops must be 2 or 3");
  }
  return res;
}

PathCheckResult cube_path_check(const std::vector<std::vector<std::array<double, 3>>>& groups, int hops,
                                std::size_t cap) {
  std::vector<std::vector<GeomObject<double>>> g;
  for (const auto& grp : groups) {
    std::vector<GeomObject<double>> objs;
    for (const auto& c : grp) objs.emplace_back(UnitCubeObj<double>{PointD<double>({c[0], c[1], c[2]})});
    g.push_back(std::move(objs));
  }
  return multipartite_common_path_check(g, hops, cap);
}

template IntersectionGraph build_intersection_graph<double>(const std::vector<GeomObject<double>>&);
template IntersectionGraph build_intersection_graph<Rat>(const std::vector<GeomObject<Rat>>&);
template PathCheckResult multipartite_common_path_check<double>(const std::vector<std::vector<GeomObject<double>>>&,
                                                                int, std::size_t);
template PathCheckResult multipartite_common_path_check<Rat>(const std::vector<std::vector<GeomObject<Rat>>>&, int,
                                                             std::size_t);

}  // namespace gdiam
