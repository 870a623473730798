#include "gdiam/range_index.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gdiam {

namespace {

constexpr int kLeaf = 8;

bool disjoint(const Pt3& lo, const Pt3& hi, const QueryBox& b) {
  for (int a = 0; a < 3; ++a)
    if (hi[a] < b.lo[a] || b.hi[a] < lo[a]) return true;
  return false;
}

bool inside(const Pt3& lo, const Pt3& hi, const QueryBox& b) {
  for (int a = 0; a < 3; ++a)
    if (lo[a] < b.lo[a] || b.hi[a] < hi[a]) return false;
  return true;
}

}  // namespace

RangeMaxIndex::RangeMaxIndex(std::vector<Pt3> points, std::vector<std::vector<double>> channels)
    : nch_(static_cast<int>(channels.size())) {
  for (const auto& ch : channels)
    if (ch.size() != points.size()) throw std::invalid_argument("weight channel size mismatch");
  const int n = static_cast<int>(points.size());
  pts_ = std::move(points);
  wts_.assign(static_cast<std::size_t>(n) * nch_, 0.0);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < nch_; ++c) wts_[static_cast<std::size_t>(i) * nch_ + c] = channels[c][i];
  if (n == 0) return;
  nodes_.reserve(2 * (n / kLeaf + 1));
  root_ = build(0, n, 0);
}

RangeMaxIndex RangeMaxIndex::coordinate_weighted(std::vector<Pt3> points) {
  std::vector<std::vector<double>> ch(3, std::vector<double>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (int a = 0; a < 3; ++a) ch[a][i] = points[i][a];
  return RangeMaxIndex(std::move(points), std::move(ch));
}

int RangeMaxIndex::build(int begin, int end, int depth) {
  Node nd;
  nd.begin = begin;
  nd.end = end;
  nd.lo = {kInf, kInf, kInf};
  nd.hi = {-kInf, -kInf, -kInf};
  for (int i = begin; i < end; ++i)
    for (int a = 0; a < 3; ++a) {
      nd.lo[a] = std::min(nd.lo[a], pts_[i][a]);
      nd.hi[a] = std::max(nd.hi[a], pts_[i][a]);
    }
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(nd);
  ext_.resize(nodes_.size() * nch_ * 2);
  for (int c = 0; c < nch_; ++c) {
    double mn = kInf, mx = -kInf;
    for (int i = begin; i < end; ++i) mn = std::min(mn, w(c, i)), mx = std::max(mx, w(c, i));
    ext_[(static_cast<std::size_t>(id) * nch_ + c) * 2] = mn;
    ext_[(static_cast<std::size_t>(id) * nch_ + c) * 2 + 1] = mx;
  }
  if (end - begin <= kLeaf) return id;

  int axis = 0;
  double spread = -1;
  for (int a = 0; a < 3; ++a)
    if (nd.hi[a] - nd.lo[a] > spread) spread = nd.hi[a] - nd.lo[a], axis = a;
  (void)depth;
  int mid = begin + (end - begin) / 2;
  // Permute points and their weight rows together.
  std::vector<int> idx(end - begin);
  std::iota(idx.begin(), idx.end(), begin);
  std::nth_element(idx.begin(), idx.begin() + (mid - begin), idx.end(),
                   [&](int x, int y) { return pts_[x][axis] < pts_[y][axis]; });
  std::vector<Pt3> p2(end - begin);
  std::vector<double> w2(static_cast<std::size_t>(end - begin) * nch_);
  for (int k = 0; k < end - begin; ++k) {
    p2[k] = pts_[idx[k]];
    for (int c = 0; c < nch_; ++c) w2[static_cast<std::size_t>(k) * nch_ + c] = w(c, idx[k]);
  }
  std::copy(p2.begin(), p2.end(), pts_.begin() + begin);
  std::copy(w2.begin(), w2.end(), wts_.begin() + static_cast<std::size_t>(begin) * nch_);

  int l = build(begin, mid, depth + 1);
  int r = build(mid, end, depth + 1);
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

void RangeMaxIndex::max_rec(int node, const QueryBox& box, int c, double stop, double& best) const {
  ++visits_;
  const Node& nd = nodes_[node];
  if (best >= stop || nmax(node, c) <= best || disjoint(nd.lo, nd.hi, box)) return;
  if (inside(nd.lo, nd.hi, box)) {
    best = nmax(node, c);
    return;
  }
  if (nd.left < 0) {
    for (int i = nd.begin; i < nd.end; ++i)
      if (w(c, i) > best && box.contains(pts_[i])) best = w(c, i);
    return;
  }
  int first = nd.left, second = nd.right;
  if (nmax(second, c) > nmax(first, c)) std::swap(first, second);
  max_rec(first, box, c, stop, best);
  max_rec(second, box, c, stop, best);
}

void RangeMaxIndex::min_rec(int node, const QueryBox& box, int c, double stop, double& best) const {
  ++visits_;
  const Node& nd = nodes_[node];
  if (best <= stop || nmin(node, c) >= best || disjoint(nd.lo, nd.hi, box)) return;
  if (inside(nd.lo, nd.hi, box)) {
    best = nmin(node, c);
    return;
  }
  if (nd.left < 0) {
    for (int i = nd.begin; i < nd.end; ++i)
      if (w(c, i) < best && box.contains(pts_[i])) best = w(c, i);
    return;
  }
  int first = nd.left, second = nd.right;
  if (nmin(second, c) < nmin(first, c)) std::swap(first, second);
  min_rec(first, box, c, stop, best);
  min_rec(second, box, c, stop, best);
}

bool RangeMaxIndex::any_rec(int node, const QueryBox& box) const {
  ++visits_;
  const Node& nd = nodes_[node];
  if (disjoint(nd.lo, nd.hi, box)) return false;
  if (inside(nd.lo, nd.hi, box)) return true;
  if (nd.left < 0) {
    for (int i = nd.begin; i < nd.end; ++i)
      if (box.contains(pts_[i])) return true;
    return false;
  }
  return any_rec(nd.left, box) || any_rec(nd.right, box);
}

double RangeMaxIndex::max_weight(const QueryBox& box, int channel) const {
  return max_weight_until(box, channel, kInf);
}

double RangeMaxIndex::min_weight(const QueryBox& box, int channel) const {
  return min_weight_until(box, channel, -kInf);
}

double RangeMaxIndex::max_weight_until(const QueryBox& box, int channel, double stop) const {
  double best = -kInf;
  if (root_ >= 0 && !box.empty()) max_rec(root_, box, channel, stop, best);
  return best;
}

double RangeMaxIndex::min_weight_until(const QueryBox& box, int channel, double stop) const {
  double best = kInf;
  if (root_ >= 0 && !box.empty()) min_rec(root_, box, channel, stop, best);
  return best;
}

bool RangeMaxIndex::any_in(const QueryBox& box) const {
  return root_ >= 0 && !box.empty() && any_rec(root_, box);
}

}  // namespace gdiam
