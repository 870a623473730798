#include "gdiam/diam2_boxes.hpp"

#include "gdiam/kd_index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

namespace gdiam {

Box3 to_box3(const AxisBoxD<double>& b) {
  if (b.dim() == 3) return Box3{{b.lo[0], b.lo[1], b.lo[2]}, {b.hi[0], b.hi[1], b.hi[2]}};
  if (b.dim() == 2) return Box3{{b.lo[0], 0.0, b.lo[1]}, {b.hi[0], 0.0, b.hi[1]}};
  throw DimensionError("box codes need dimension 2 or 3");
}

bool box3_intersect(const Box3& a, const Box3& b) {
  for (int i = 0; i < 3; ++i)
    if (a.hi[i] < b.lo[i] || b.hi[i] < a.lo[i]) return false;
  return true;
}

Code6 box_phi(const Box3& b) { return {b.lo[0], -b.hi[0], b.lo[1], -b.hi[1], b.lo[2], -b.hi[2]}; }
Code6 box_psi(const Box3& b) { return {b.hi[0], -b.lo[0], b.hi[1], -b.lo[1], b.hi[2], -b.lo[2]}; }

std::vector<double> box_code(const AxisBoxD<double>& b, CodeSide side) {
  if (b.dim() != 2 && b.dim() != 3) throw DimensionError("box codes need dimension 2 or 3");
  std::vector<double> v;
  for (int a = 0; a < b.dim(); ++a) {
    if (side == CodeSide::Phi) {
      v.push_back(b.lo[a]);
      v.push_back(-b.hi[a]);
    } else {
      v.push_back(b.hi[a]);
      v.push_back(-b.lo[a]);
    }
  }
  return v;
}

std::vector<ProjectionIndex> projection_indices(int dim) {
  if (dim != 2 && dim != 3) throw DimensionError("projection indices need dimension 2 or 3");
  std::vector<int> live = dim == 3 ? std::vector<int>{0, 1, 2, 3, 4, 5} : std::vector<int>{0, 1, 4, 5};
  const int k = static_cast<int>(live.size()) / 2;
  std::vector<ProjectionIndex> out;
  for (int mask = 0; mask < (1 << live.size()); ++mask) {
    if (std::popcount(static_cast<unsigned>(mask)) != k) continue;
    ProjectionIndex pi;
    for (std::size_t t = 0; t < live.size(); ++t) (mask >> t & 1 ? pi.I : pi.Ic).push_back(live[t]);
    if (dim == 2) pi.Ic.push_back(2);
    out.push_back(std::move(pi));
  }
  return out;
}

bool projected_leq(const Code6& a, const Code6& b, const std::vector<int>& I) {
  for (int k : I)
    if (a[k] > b[k]) return false;
  return true;
}

NonuniformGrid build_nonuniform_grid(std::span<const Box3> boxes, int g) {
  if (g < 1) throw std::invalid_argument("grid needs g >= 1");
  NonuniformGrid grid;
  grid.g = g;
  for (int a = 0; a < 3; ++a) {
    std::vector<double> v;
    v.reserve(2 * boxes.size());
    for (const auto& b : boxes) v.push_back(b.lo[a]), v.push_back(b.hi[a]);
    std::sort(v.begin(), v.end());
    auto& pl = grid.planes[a];
    pl.assign(g + 1, 0.0);
    if (v.empty()) continue;
    const std::size_t N = v.size();
    for (int i = 0; i < g; ++i) pl[i] = v[std::min(N - 1, i * N / g)];
    pl[g] = v[N - 1];
  }
  return grid;
}

Box3 GridBox::geometry(const NonuniformGrid& grid) const {
  Box3 b;
  for (int a = 0; a < 3; ++a) {
    b.lo[a] = grid.planes[a][lo[a]];
    b.hi[a] = grid.planes[a][hi[a]];
  }
  if (bottomless) b.lo[2] = -kInf;
  return b;
}

GridBox inscribe_grid_box(const Box3& p, const NonuniformGrid& grid) {
  GridBox gb;
  gb.empty = false;
  for (int a = 0; a < 3; ++a) {
    const auto& pl = grid.planes[a];
    gb.lo[a] = static_cast<int>(std::lower_bound(pl.begin(), pl.end(), p.lo[a]) - pl.begin());
    gb.hi[a] = static_cast<int>(std::upper_bound(pl.begin(), pl.end(), p.hi[a]) - pl.begin()) - 1;
    if (gb.lo[a] > gb.hi[a]) gb.empty = true;
  }
  if (gb.empty) gb.lo = gb.hi = {0, 0, 0};
  return gb;
}

GridBox bottomless_of(const GridBox& b) {
  GridBox d = b;
  if (d.empty) return d;
  d.bottomless = true;
  d.lo[2] = 0;
  return d;
}

bool StairCell::contains(const Pt3& v) const {
  for (int a = 0; a < 3; ++a)
    if (!(lo[a] <= v[a] && v[a] < hi[a])) return false;
  return true;
}

bool Staircase3::in_union(const Pt3& v) const {
  for (const auto& a : apexes)
    if (a[0] <= v[0] && a[1] <= v[1] && a[2] <= v[2]) return true;
  return false;
}

namespace {

// Sorts `apexes` in place and appends the complement cells.
void staircase_cells(std::vector<Pt3>& apexes, std::vector<StairCell>& cells) {
  std::sort(apexes.begin(), apexes.end());
  // Steps keyed by their first y: z below `z` is outside the union for
  // y in [key, next key). x0 is where the current shape of the step began.
  struct Step {
    double z, x0;
  };
  std::map<double, Step> steps;
  steps[-kInf] = {kInf, -kInf};
  auto close = [&](std::map<double, Step>::iterator it, double x1) {
    if (!(it->second.x0 < x1)) return;
    auto nx = std::next(it);
    double y1 = nx == steps.end() ? kInf : nx->first;
    cells.push_back(StairCell{{it->second.x0, it->first, -kInf}, {x1, y1, it->second.z}});
  };
  for (const auto& a : apexes) {
    auto it = std::prev(steps.upper_bound(a[1]));
    if (it->second.z <= a[2]) continue;  // already covered
    if (it->first < a[1]) {
      close(it, a[0]);
      it->second.x0 = a[0];
      ++it;
    }
    while (it != steps.end() && it->second.z >= a[2]) {
      close(it, a[0]);
      it = steps.erase(it);
    }
    steps[a[1]] = {a[2], a[0]};
  }
  for (auto it = steps.begin(); it != steps.end(); ++it) close(it, kInf);
}

}  // namespace

Staircase3 staircase_complement_decompose(std::vector<Pt3> apexes) {
  Staircase3 st;
  st.apexes = apexes;
  staircase_cells(apexes, st.cells);
  return st;
}

int default_box_grid(std::size_t n, int kind) {
  const double e = kind == 0 ? 1.0 / 6 : kind == 1 ? 1.0 / 4 : 1.0 / 5;
  return std::max(1, static_cast<int>(std::lround(std::pow(static_cast<double>(std::max<std::size_t>(n, 1)), e))));
}

namespace {

using P6 = KdIndex<6>::Point;

double below(double v) { return std::nextafter(v, -kInf); }
double sum3(const Pt3& a) { return a[0] + a[1] + a[2]; }
double above(double v) { return std::nextafter(v, kInf); }

// One orientation (P before R) over a list of projection cases.
class Engine {
 public:
  Engine(std::span<const Box3> P, std::span<const Box3> Q, std::span<const Box3> R, const NonuniformGrid& grid,
         bool bottomless, Diam2BoxStats& stats)
      : P_(P), Q_(Q), R_(R), grid_(grid), bottomless_(bottomless), stats_(stats) {
    std::vector<P6> phiq, psir;
    for (const auto& q : Q) phiq.push_back(box_phi(q));
    for (const auto& r : R) psir.push_back(box_psi(r));
    qtree_ = KdIndex<6>(std::move(phiq));
    rtree_ = KdIndex<6>(std::move(psir));
    stamp_.assign(Q.size(), -1);
  }

  std::optional<std::pair<int, int>> run(const std::vector<ProjectionIndex>& cases) {
    if (P_.empty() || R_.empty()) return std::nullopt;
    std::map<std::array<int, 7>, std::vector<int>> groups;
    std::vector<GridBox> hat(P_.size());
    for (int p = 0; p < static_cast<int>(P_.size()); ++p) {
      hat[p] = inscribe_grid_box(P_[p], grid_);
      GridBox k = bottomless_ ? bottomless_of(hat[p]) : hat[p];
      std::array<int, 7> key{};
      if (k.empty) {
        key.fill(-1);
        ++stats_.empty_hats;
      } else {
        key = {k.lo[0], k.lo[1], k.lo[2], k.hi[0], k.hi[1], k.hi[2], 0};
      }
      groups[key].push_back(p);
    }
    std::vector<double> wq(Q_.size()), wr(R_.size());
    for (const auto& [key, members] : groups) {
      const bool empty = key[0] < 0;
      if (!empty) ++stats_.grid_boxes;
      // Weighted R(p-hat-down): r's weight is the best weight of a q that meets
      // both r and the grid box; R(p-hat) is then {r : weight >= z-(p-hat)}.
      if (empty) {
        std::fill(wr.begin(), wr.end(), -kInf);
      } else {
        GridBox k = bottomless_ ? bottomless_of(hat[members[0]]) : hat[members[0]];
        Box3 kb = k.geometry(grid_);
        for (std::size_t q = 0; q < Q_.size(); ++q)
          wq[q] = box3_intersect(Q_[q], kb) ? (bottomless_ ? Q_[q].hi[2] : kInf) : -kInf;
        qtree_.set_weights(wq);
        P6 lo;
        lo.fill(-kInf);
        for (std::size_t r = 0; r < R_.size(); ++r) wr[r] = qtree_.max_weight(lo, box_psi(R_[r]));
      }
      rtree_.set_weights(wr);
      for (int p : members) {
        double thr = empty ? kInf : (bottomless_ ? grid_.planes[2][hat[p].lo[2]] : 0.0);
        auto w = check_p(p, hat[p], thr, cases);
        if (w) return w;
      }
    }
    return std::nullopt;
  }

 private:
  // L(p): Q boxes meeting p but not p-hat.
  void collect_l(int p, const GridBox& h) {
    lp_.clear();
    const Code6 psip = box_psi(P_[p]);
    P6 lo;
    lo.fill(-kInf);
    auto take = [&](int q) {
      if (stamp_[q] != p) stamp_[q] = p, lp_.push_back(q);
    };
    if (h.empty) {
      qtree_.report(lo, psip, take);
    } else {
      const Code6 psih = box_psi(h.geometry(grid_));
      for (int k = 0; k < 6; ++k) {
        P6 l = lo;
        l[k] = above(psih[k]);
        qtree_.report(l, psip, take);
      }
    }
    std::sort(lp_.begin(), lp_.end());
    stats_.l_total += lp_.size();
    stats_.l_max = std::max<std::uint64_t>(stats_.l_max, lp_.size());
  }

  std::optional<std::pair<int, int>> check_p(int p, const GridBox& h, double thr,
                                             const std::vector<ProjectionIndex>& cases) {
    collect_l(p, h);
    const Code6 psip = box_psi(P_[p]);
    // p itself is the last apex: r meeting p directly needs no q.
    const Code6 phip = box_phi(P_[p]);
    for (const auto& c : cases) {
      apex_.resize(lp_.size() + 1);
      std::size_t lead = 0;
      for (std::size_t i = 0; i <= lp_.size(); ++i) {
        Code6 f = i < lp_.size() ? box_phi(Q_[lp_[i]]) : phip;
        for (int t = 0; t < 3; ++t) apex_[i][t] = f[c.Ic[t]];
        if (sum3(apex_[i]) < sum3(apex_[lead])) lead = i;
      }
      // Apexes dominated by the one with the smallest sum add nothing to the union.
      const Pt3 a0 = apex_[lead];
      std::erase_if(apex_, [&](const Pt3& a) {
        return a0[0] <= a[0] && a0[1] <= a[1] && a0[2] <= a[2] && a != a0;
      });
      cells_.clear();
      staircase_cells(apex_, cells_);
      stats_.stair_cells += cells_.size();
      P6 lo, hi;
      lo.fill(-kInf);
      hi.fill(kInf);
      for (int k : c.I) lo[k] = psip[k];
      for (const auto& cell : cells_) {
        for (int t = 0; t < 3; ++t) {
          lo[c.Ic[t]] = cell.lo[t];
          hi[c.Ic[t]] = cell.hi[t] == kInf ? kInf : below(cell.hi[t]);
        }
        ++stats_.range_queries;
        int r = rtree_.find_weight_below(lo, hi, thr);
        if (r >= 0) return std::pair<int, int>{p, r};
      }
    }
    return std::nullopt;
  }

  std::span<const Box3> P_, Q_, R_;
  const NonuniformGrid& grid_;
  bool bottomless_;
  Diam2BoxStats& stats_;
  KdIndex<6> qtree_, rtree_;
  std::vector<int> stamp_, lp_;
  std::vector<Pt3> apex_;
  std::vector<StairCell> cells_;
};

std::vector<Box3> all_boxes(std::span<const Box3> P, std::span<const Box3> Q, std::span<const Box3> R) {
  std::vector<Box3> v(P.begin(), P.end());
  v.insert(v.end(), Q.begin(), Q.end());
  v.insert(v.end(), R.begin(), R.end());
  return v;
}

Diam2BoxResult solve_both(std::span<const Box3> P, std::span<const Box3> Q, std::span<const Box3> R, int dim,
                          int kind, const Diam2BoxOptions& opt, bool bottomless) {
  Diam2BoxResult res;
  auto boxes = all_boxes(P, Q, R);
  const int g = opt.g > 0 ? opt.g : default_box_grid(boxes.size(), kind);
  res.stats.g = g;
  auto grid = build_nonuniform_grid(boxes, g);
  auto cases = projection_indices(dim);
  {
    Engine e(P, Q, R, grid, bottomless, res.stats);
    if (auto w = e.run(cases)) {
      res.ok = false;
      res.witness = w;
      return res;
    }
  }
  Engine e(R, Q, P, grid, bottomless, res.stats);
  if (auto w = e.run(cases)) {
    res.ok = false;
    res.witness = std::pair<int, int>{w->second, w->first};
  }
  return res;
}

}  // namespace

std::vector<double> weighted_r_down(std::span<const Box3> Q, std::span<const Box3> R, const Box3& down) {
  std::vector<P6> phiq;
  std::vector<double> wq;
  for (const auto& q : Q) {
    phiq.push_back(box_phi(q));
    wq.push_back(box3_intersect(q, down) ? q.hi[2] : -kInf);
  }
  KdIndex<6> tree(std::move(phiq));
  tree.set_weights(wq);
  P6 lo;
  lo.fill(-kInf);
  std::vector<double> out;
  for (const auto& r : R) out.push_back(tree.max_weight(lo, box_psi(r)));
  return out;
}

std::vector<char> r_of_box(std::span<const Box3> Q, std::span<const Box3> R, const Box3& h) {
  std::vector<char> out(R.size(), 0);
  for (std::size_t r = 0; r < R.size(); ++r)
    for (const auto& q : Q)
      if (box3_intersect(q, h) && box3_intersect(q, R[r])) {
        out[r] = 1;
        break;
      }
  return out;
}

Diam2BoxResult solve_projection_case(std::span<const Box3> P, std::span<const Box3> Q, std::span<const Box3> R,
                                     const ProjectionIndex& I, const Diam2BoxOptions& opt) {
  Diam2BoxResult res;
  auto boxes = all_boxes(P, Q, R);
  const int g = opt.g > 0 ? opt.g : default_box_grid(boxes.size(), 0);
  res.stats.g = g;
  auto grid = build_nonuniform_grid(boxes, g);
  Engine e(P, Q, R, grid, opt.bottomless, res.stats);
  if (auto w = e.run({I})) {
    res.ok = false;
    res.witness = w;
  }
  return res;
}

Diam2BoxResult diam2_boxes(std::span<const Box3> P, std::span<const Box3> Q, std::span<const Box3> R,
                           const Diam2BoxOptions& opt) {
  return solve_both(P, Q, R, 3, 0, opt, opt.bottomless);
}

Diam2BoxResult diam2_rectangles(std::span<const Box3> P, std::span<const Box3> Q, std::span<const Box3> R,
                                const Diam2BoxOptions& opt) {
  return solve_both(P, Q, R, 2, 1, opt, opt.bottomless);
}

Diam2BoxResult diam2_cubes3d(std::span<const Box3> P, std::span<const Box3> Q, std::span<const Box3> R,
                             const Diam2BoxOptions& opt) {
  return solve_both(P, Q, R, 3, 2, opt, false);
}

Diam2BoxResult diam2_boxes(const std::vector<AxisBoxD<double>>& P, const std::vector<AxisBoxD<double>>& Q,
                           const std::vector<AxisBoxD<double>>& R, const Diam2BoxOptions& opt) {
  int dim = 0;
  std::vector<Box3> bp, bq, br;
  for (auto* grp : {&P, &Q, &R})
    for (const auto& b : *grp) {
      if (dim == 0) dim = b.dim();
      require_same_dim(dim, b.dim());
    }
  for (const auto& b : P) bp.push_back(to_box3(b));
  for (const auto& b : Q) bq.push_back(to_box3(b));
  for (const auto& b : R) br.push_back(to_box3(b));
  return dim == 2 ? diam2_rectangles(bp, bq, br, opt) : diam2_boxes(bp, bq, br, opt);
}

}  // namespace gdiam
