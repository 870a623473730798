#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace gdiam {

using Pt3 = std::array<double, 3>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed query box; use std::nextafter to express open sides.
struct QueryBox {
  Pt3 lo{-kInf, -kInf, -kInf};
  Pt3 hi{kInf, kInf, kInf};

  bool empty() const { return lo[0] > hi[0] || lo[1] > hi[1] || lo[2] > hi[2]; }
  bool contains(const Pt3& p) const {
    return lo[0] <= p[0] && p[0] <= hi[0] && lo[1] <= p[1] && p[1] <= hi[1] && lo[2] <= p[2] && p[2] <= hi[2];
  }
};

// Static k-d tree over 3D points with weight channels. Each node keeps its
// bounding box and per-channel extremes, so max/min queries prune by bound.
class RangeMaxIndex {
 public:
  RangeMaxIndex() = default;
  // channels[c][i] is the weight of point i in channel c.
  RangeMaxIndex(std::vector<Pt3> points, std::vector<std::vector<double>> channels);
  // Channels 0..2 are the coordinates themselves.
  static RangeMaxIndex coordinate_weighted(std::vector<Pt3> points);

  std::size_t size() const { return pts_.size(); }
  int channels() const { return nch_; }

  double max_weight(const QueryBox& box, int channel) const;  // -inf if empty
  double min_weight(const QueryBox& box, int channel) const;  // +inf if empty
  // Stop as soon as the running answer reaches stop; the result is then some
  // value >= stop (<= stop for the min form) rather than the extreme.
  double max_weight_until(const QueryBox& box, int channel, double stop) const;
  double min_weight_until(const QueryBox& box, int channel, double stop) const;
  bool any_in(const QueryBox& box) const;

  // Node visits since construction; used by instrumentation tests.
  std::uint64_t visits() const { return visits_; }

 private:
  struct Node {
    Pt3 lo, hi;
    int begin, end;
    int left = -1, right = -1;
  };

  int build(int begin, int end, int depth);
  void max_rec(int node, const QueryBox& box, int c, double stop, double& best) const;
  void min_rec(int node, const QueryBox& box, int c, double stop, double& best) const;
  bool any_rec(int node, const QueryBox& box) const;
  double w(int c, int i) const { return wts_[static_cast<std::size_t>(i) * nch_ + c]; }
  double nmax(int node, int c) const { return ext_[(static_cast<std::size_t>(node) * nch_ + c) * 2 + 1]; }
  double nmin(int node, int c) const { return ext_[(static_cast<std::size_t>(node) * nch_ + c) * 2]; }

  std::vector<Pt3> pts_;
  std::vector<double> wts_;  // point-major
  std::vector<Node> nodes_;
  std::vector<double> ext_;  // per node, per channel: min, max
  int nch_ = 0;
  int root_ = -1;
  mutable std::uint64_t visits_ = 0;
};

}  // namespace gdiam
