#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace gdiam {

// Static k-d tree over D-dimensional points with one weight per point. The
// tree shape is fixed at construction; set_weights() refreshes the per-node
// extremes in O(n), so one tree can serve many weightings of the same points.
// All query boxes are closed.
template <int D>
class KdIndex {
 public:
  using Point = std::array<double, D>;
  static constexpr double kInfW = std::numeric_limits<double>::infinity();

  KdIndex() = default;
  explicit KdIndex(std::vector<Point> pts) : pts_(std::move(pts)), ids_(pts_.size()) {
    std::iota(ids_.begin(), ids_.end(), 0);
    if (!pts_.empty()) root_ = build(0, static_cast<int>(pts_.size()), 0);
    w_.assign(pts_.size(), 0.0);
    set_weights(w_);
  }

  std::size_t size() const { return pts_.size(); }
  const Point& point(int id) const { return pts_[id]; }
  double weight(int id) const { return w_[slot_[id]]; }

  // weights[id] for each original point id.
  void set_weights(const std::vector<double>& weights) {
    if (slot_.empty()) {
      slot_.resize(ids_.size());
      for (std::size_t s = 0; s < ids_.size(); ++s) slot_[ids_[s]] = static_cast<int>(s);
    }
    for (std::size_t s = 0; s < ids_.size(); ++s) w_[s] = weights[ids_[s]];
    // Children are built after their parent, so a reverse sweep sees them first.
    for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
      auto& nd = nodes_[i];
      if (nd.left >= 0) {
        nd.wmin = std::min(nodes_[nd.left].wmin, nodes_[nd.right].wmin);
        nd.wmax = std::max(nodes_[nd.left].wmax, nodes_[nd.right].wmax);
        continue;
      }
      double lo = kInfW, hi = -kInfW;
      for (int s = nd.begin; s < nd.end; ++s) lo = std::min(lo, w_[s]), hi = std::max(hi, w_[s]);
      nd.wmin = lo;
      nd.wmax = hi;
    }
  }

  // Largest weight inside [lo, hi]; -inf if none.
  double max_weight(const Point& lo, const Point& hi) const {
    double best = -kInfW;
    if (root_ >= 0) max_rec(root_, lo, hi, best);
    return best;
  }

  // Some id inside [lo, hi] whose weight is < stop, or -1.
  int find_weight_below(const Point& lo, const Point& hi, double stop) const {
    return root_ >= 0 ? below_rec(root_, lo, hi, stop) : -1;
  }

  template <class Fn>
  void report(const Point& lo, const Point& hi, Fn fn) const {
    if (root_ >= 0) report_rec(root_, lo, hi, fn);
  }

  std::uint64_t visits() const { return visits_; }

 private:
  struct Node {
    Point lo, hi;
    int begin, end;
    int left = -1, right = -1;
    double wmin = 0, wmax = 0;
  };
  static constexpr int kLeaf = 8;

  int build(int begin, int end, int depth) {
    Node nd;
    nd.begin = begin;
    nd.end = end;
    nd.lo.fill(kInfW);
    nd.hi.fill(-kInfW);
    for (int s = begin; s < end; ++s)
      for (int a = 0; a < D; ++a) {
        nd.lo[a] = std::min(nd.lo[a], pts_[ids_[s]][a]);
        nd.hi[a] = std::max(nd.hi[a], pts_[ids_[s]][a]);
      }
    int idx = static_cast<int>(nodes_.size());
    nodes_.push_back(nd);
    if (end - begin > kLeaf) {
      // Split the widest axis; deterministic for equal inputs.
      int axis = 0;
      for (int a = 1; a < D; ++a)
        if (nd.hi[a] - nd.lo[a] > nd.hi[axis] - nd.lo[axis]) axis = a;
      int mid = begin + (end - begin) / 2;
      std::nth_element(ids_.begin() + begin, ids_.begin() + mid, ids_.begin() + end, [&](int x, int y) {
        return pts_[x][axis] < pts_[y][axis] || (pts_[x][axis] == pts_[y][axis] && x < y);
      });
      int l = build(begin, mid, depth + 1);
      int r = build(mid, end, depth + 1);
      nodes_[idx].left = l;
      nodes_[idx].right = r;
    }
    return idx;
  }

  static bool disjoint(const Node& nd, const Point& lo, const Point& hi) {
    for (int a = 0; a < D; ++a)
      if (nd.hi[a] < lo[a] || nd.lo[a] > hi[a]) return true;
    return false;
  }
  static bool inside(const Node& nd, const Point& lo, const Point& hi) {
    for (int a = 0; a < D; ++a)
      if (nd.lo[a] < lo[a] || nd.hi[a] > hi[a]) return false;
    return true;
  }
  static bool in_box(const Point& p, const Point& lo, const Point& hi) {
    for (int a = 0; a < D; ++a)
      if (p[a] < lo[a] || p[a] > hi[a]) return false;
    return true;
  }

  void max_rec(int i, const Point& lo, const Point& hi, double& best) const {
    ++visits_;
    const Node& nd = nodes_[i];
    if (nd.wmax <= best || disjoint(nd, lo, hi)) return;
    if (inside(nd, lo, hi)) {
      best = nd.wmax;
      return;
    }
    if (nd.left < 0) {
      for (int s = nd.begin; s < nd.end; ++s)
        if (w_[s] > best && in_box(pts_[ids_[s]], lo, hi)) best = w_[s];
      return;
    }
    max_rec(nd.left, lo, hi, best);
    max_rec(nd.right, lo, hi, best);
  }

  int below_rec(int i, const Point& lo, const Point& hi, double stop) const {
    ++visits_;
    const Node& nd = nodes_[i];
    if (!(nd.wmin < stop) || disjoint(nd, lo, hi)) return -1;
    if (nd.left < 0) {
      for (int s = nd.begin; s < nd.end; ++s)
        if (w_[s] < stop && in_box(pts_[ids_[s]], lo, hi)) return ids_[s];
      return -1;
    }
    int r = below_rec(nd.left, lo, hi, stop);
    return r >= 0 ? r : below_rec(nd.right, lo, hi, stop);
  }

  template <class Fn>
  void report_rec(int i, const Point& lo, const Point& hi, Fn& fn) const {
    ++visits_;
    const Node& nd = nodes_[i];
    if (disjoint(nd, lo, hi)) return;
    if (nd.left < 0) {
      for (int s = nd.begin; s < nd.end; ++s)
        if (in_box(pts_[ids_[s]], lo, hi)) fn(ids_[s]);
      return;
    }
    report_rec(nd.left, lo, hi, fn);
    report_rec(nd.right, lo, hi, fn);
  }

  std::vector<Point> pts_;
  std::vector<int> ids_;   // slot -> id
  std::vector<int> slot_;  // id -> slot
  std::vector<double> w_;  // by slot
  std::vector<Node> nodes_;
  int root_ = -1;
  mutable std::uint64_t visits_ = 0;
};

}  // namespace gdiam
