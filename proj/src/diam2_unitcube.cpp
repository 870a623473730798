#include "gdiam/diam2_unitcube.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gdiam {

namespace {

constexpr double kLow = std::numeric_limits<double>::lowest();
constexpr double kHigh = std::numeric_limits<double>::max();

double below(double v) { return std::nextafter(v, -kInf); }
double above(double v) { return std::nextafter(v, kInf); }

// Per-axis configuration of a separated pair. sigma = +1: P below mu, R at or
// above; -1: the reverse. rside/pside are the inclusive q-intervals on R's and
// on P's side of mu.
struct SideSpec {
  std::array<int, 3> sigma{1, 1, 1};
  std::array<std::pair<double, double>, 3> rside, pside;
};

// q relation constraints as box tightenings.
void q_vs_r(QueryBox& b, int a, Rel rel2, double r, Closure cl) {
  if (rel2 == Rel::LT) b.hi[a] = std::min(b.hi[a], cl == Closure::Strict ? below(r) : r);
  else if (rel2 == Rel::GT) b.lo[a] = std::max(b.lo[a], cl == Closure::Strict ? above(r) : r);
}

void p_vs_q(QueryBox& b, int a, Rel rel1, double p, Closure cl) {
  if (rel1 == Rel::LT) b.lo[a] = std::max(b.lo[a], cl == Closure::Strict ? above(p) : p);
  else if (rel1 == Rel::GT) b.hi[a] = std::min(b.hi[a], cl == Closure::Strict ? below(p) : p);
}

// One scalar subsystem. side[a] is +1 when q is restricted to R's side of mu on
// axis a, -1 for P's side, 0 for the single free axis. Returns false when the
// relations make a connection impossible (outputs untouched).
bool scalar_case(std::span<const Pt3> P, std::span<const Pt3> R, const RangeMaxIndex& Q,
                 const GeneralizedDominance& rel1, const GeneralizedDominance& rel2, const SideSpec& sp,
                 const std::array<int, 3>& side, Closure cl, double* phi, std::size_t pstride, double* psi,
                 std::size_t rstride) {
  int f = -1, s = 0;
  for (int a = 0; a < 3; ++a) {
    if (side[a] == 0) f = a;
    else s = side[a];
  }
  QueryBox base;
  for (int a = 0; a < 3; ++a) {
    if (a == f) continue;
    Rel need = sp.sigma[a] > 0 ? Rel::LT : Rel::GT;
    Rel have = s > 0 ? rel1[a] : rel2[a];
    if (have != Rel::ANY && have != need) return false;
    const auto& iv = s > 0 ? sp.rside[a] : sp.pside[a];
    base.lo[a] = iv.first;
    base.hi[a] = iv.second;
  }
  const double any_low = cl == Closure::Strict ? -kInf : kLow;
  const double any_high = cl == Closure::Strict ? kInf : kHigh;

  const bool strict = cl == Closure::Strict;
  // Only the order of psi against the phi values matters (and vice versa), so
  // each query is clamped to the span of the other side and stops once every
  // pair on that side is decided.
  if (s > 0) {
    // The P side only constrains the free axis.
    const Rel r1 = rel1[f];
    double lo = kInf, hi = -kInf;
    for (std::size_t i = 0; i < P.size(); ++i) {
      double v = r1 == Rel::LT ? P[i][f] : r1 == Rel::GT ? -P[i][f] : any_low;
      phi[i * pstride] = v;
      lo = std::min(lo, v), hi = std::max(hi, v);
    }
    if (P.empty()) return true;
    for (std::size_t j = 0; j < R.size(); ++j) {
      QueryBox b = base;
      for (int a = 0; a < 3; ++a) q_vs_r(b, a, rel2[a], R[j][a], cl);
      double v;
      if (r1 == Rel::LT) {
        b.lo[f] = std::max(b.lo[f], strict ? above(lo) : lo);
        v = Q.max_weight_until(b, f, strict ? above(hi) : hi);
      } else if (r1 == Rel::GT) {
        b.hi[f] = std::min(b.hi[f], strict ? below(-lo) : -lo);
        v = -Q.min_weight_until(b, f, strict ? below(-hi) : -hi);
      } else {
        v = Q.any_in(b) ? 0.0 : -kInf;
      }
      psi[j * rstride] = v;
    }
  } else {
    const Rel r2 = rel2[f];
    double lo = kInf, hi = -kInf;
    for (std::size_t j = 0; j < R.size(); ++j) {
      double v = r2 == Rel::LT ? R[j][f] : r2 == Rel::GT ? -R[j][f] : any_high;
      psi[j * rstride] = v;
      lo = std::min(lo, v), hi = std::max(hi, v);
    }
    if (R.empty()) return true;
    for (std::size_t i = 0; i < P.size(); ++i) {
      QueryBox b = base;
      for (int a = 0; a < 3; ++a) p_vs_q(b, a, rel1[a], P[i][a], cl);
      double v;
      if (r2 == Rel::LT) {
        b.hi[f] = std::min(b.hi[f], strict ? below(hi) : hi);
        v = Q.min_weight_until(b, f, strict ? below(lo) : lo);
      } else if (r2 == Rel::GT) {
        b.lo[f] = std::max(b.lo[f], strict ? above(-hi) : -hi);
        v = -Q.max_weight_until(b, f, strict ? above(-lo) : -lo);
      } else {
        v = Q.any_in(b) ? 0.0 : kInf;
      }
      phi[i * pstride] = v;
    }
  }
  return true;
}

constexpr std::array<std::array<int, 3>, 6> kSixCases{{
    {1, 1, 0}, {0, 1, 1}, {1, 0, 1}, {-1, -1, 0}, {0, -1, -1}, {-1, 0, -1},
}};

void fill_six(std::span<const Pt3> P, std::span<const Pt3> R, const RangeMaxIndex& Q,
              const GeneralizedDominance& rel1, const GeneralizedDominance& rel2, const SideSpec& sp, Closure cl,
              VectorMaps& out, int slot0) {
  const std::size_t w = out.width;
  for (int c = 0; c < 6; ++c) {
    int j = slot0 + c;
    bool live = scalar_case(P, R, Q, rel1, rel2, sp, kSixCases[c], cl, out.phi.data() + j, w, out.psi.data() + j, w);
    out.active[j] = live;
    if (!live) {
      for (std::size_t i = 0; i < P.size(); ++i) out.phi[i * w + j] = kInf;
      for (std::size_t i = 0; i < R.size(); ++i) out.psi[i * w + j] = -kInf;
    }
  }
}

VectorMaps empty_maps(std::size_t np, std::size_t nr, int width, Closure cl) {
  VectorMaps m;
  m.width = width;
  m.closure = cl;
  m.phi.assign(np * width, kInf);
  m.psi.assign(nr * width, -kInf);
  m.active.assign(width, 0);
  return m;
}

bool violates(Closure cl, double phi, double psi) { return cl == Closure::Closed ? phi > psi : phi >= psi; }

bool cubes_meet(const Pt3& a, const Pt3& b) {
  return std::abs(a[0] - b[0]) <= 1 && std::abs(a[1] - b[1]) <= 1 && std::abs(a[2] - b[2]) <= 1;
}

Pt3 frac(const Pt3& p, const Cell3& c) {
  return {p[0] - static_cast<double>(c[0]), p[1] - static_cast<double>(c[1]), p[2] - static_cast<double>(c[2])};
}

}  // namespace

bool VectorMaps::connected(std::size_t p, std::size_t r) const {
  auto a = phi_row(p), b = psi_row(r);
  for (int j = 0; j < width; ++j)
    if (!violates(closure, a[j], b[j])) return true;
  return false;
}

ScalarMaps map_separated_pair(std::span<const Pt3> P, std::span<const Pt3> R, const RangeMaxIndex& Q,
                              const GeneralizedDominance& rel1, const GeneralizedDominance& rel2, double mu_x,
                              double mu_y) {
  for (const auto& p : P)
    if (!(p[0] < mu_x && p[1] < mu_y)) throw std::invalid_argument("P must lie below (mu_x, mu_y)");
  SideSpec sp;
  sp.rside[0] = {above(mu_x), kInf};
  sp.rside[1] = {above(mu_y), kInf};
  ScalarMaps m;
  m.phi.assign(P.size(), 1.0);
  m.psi.assign(R.size(), 0.0);
  std::vector<double> phi(P.size()), psi(R.size());
  if (scalar_case(P, R, Q, rel1, rel2, sp, {1, 1, 0}, Closure::Strict, phi.data(), 1, psi.data(), 1)) {
    m.phi = std::move(phi);
    m.psi = std::move(psi);
  }
  return m;
}

VectorMaps map_octant_six(std::span<const Pt3> P, std::span<const Pt3> R, const RangeMaxIndex& Q,
                          const GeneralizedDominance& rel1, const GeneralizedDominance& rel2, const Pt3& mu) {
  for (const auto& p : P)
    for (int a = 0; a < 3; ++a)
      if (!(p[a] < mu[a])) throw std::invalid_argument("P must lie strictly below mu");
  for (const auto& r : R)
    for (int a = 0; a < 3; ++a)
      if (!(r[a] > mu[a])) throw std::invalid_argument("R must lie strictly above mu");
  SideSpec sp;
  for (int a = 0; a < 3; ++a) {
    // q exactly at mu still lies strictly beyond every p.
    sp.rside[a] = {mu[a], kInf};
    sp.pside[a] = {-kInf, below(mu[a])};
  }
  VectorMaps m = empty_maps(P.size(), R.size(), 6, Closure::Strict);
  fill_six(P, R, Q, rel1, rel2, sp, Closure::Strict, m, 0);
  return m;
}

Cell3 cell_of(const Pt3& p) {
  return {static_cast<std::int64_t>(std::floor(p[0])), static_cast<std::int64_t>(std::floor(p[1])),
          static_cast<std::int64_t>(std::floor(p[2]))};
}

CubeQIndex::CubeQIndex(std::span<const Pt3> Q) {
  std::map<Cell3, std::vector<Pt3>> buckets;
  for (const auto& q : Q) {
    Cell3 c = cell_of(q);
    buckets[c].push_back(frac(q, c));
  }
  for (auto& [c, pts] : buckets) cells_.emplace(c, RangeMaxIndex::coordinate_weighted(std::move(pts)));
  global_ = RangeMaxIndex::coordinate_weighted(std::vector<Pt3>(Q.begin(), Q.end()));
}

const RangeMaxIndex* CubeQIndex::cell(const Cell3& c) const {
  auto it = cells_.find(c);
  return it == cells_.end() ? nullptr : &it->second;
}

bool CubeQIndex::common_neighbor(const Pt3& a, const Pt3& b) const {
  QueryBox box;
  for (int k = 0; k < 3; ++k) {
    box.lo[k] = std::max(a[k], b[k]) - 1;
    box.hi[k] = std::min(a[k], b[k]) + 1;
  }
  return global_.any_in(box);
}

VectorMaps map_unitcube_cells(std::span<const Pt3> P, std::span<const Pt3> R, const CubeQIndex& Q,
                              const Cell3& alphaP, const Cell3& alphaR, const Pt3& mu,
                              const std::array<int, 3>& sigma) {
  std::vector<Pt3> Pf(P.size()), Rf(R.size());
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (cell_of(P[i]) != alphaP) throw std::invalid_argument("P point outside alphaP");
    Pf[i] = frac(P[i], alphaP);
  }
  for (std::size_t i = 0; i < R.size(); ++i) {
    if (cell_of(R[i]) != alphaR) throw std::invalid_argument("R point outside alphaR");
    Rf[i] = frac(R[i], alphaR);
  }
  SideSpec sp;
  sp.sigma = sigma;
  for (int a = 0; a < 3; ++a) {
    bool ok = true;
    for (const auto& p : Pf) ok = ok && (sigma[a] > 0 ? p[a] < mu[a] : p[a] >= mu[a]);
    for (const auto& r : Rf) ok = ok && (sigma[a] > 0 ? r[a] >= mu[a] : r[a] < mu[a]);
    if (!ok) throw std::invalid_argument("P and R are not separated by mu");
    std::pair<double, double> hi_side{mu[a], kInf}, lo_side{-kInf, below(mu[a])};
    sp.rside[a] = sigma[a] > 0 ? hi_side : lo_side;
    sp.pside[a] = sigma[a] > 0 ? lo_side : hi_side;
  }
  VectorMaps m = empty_maps(P.size(), R.size(), kCubeMapWidth, Closure::Closed);
  int slot = 0;
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dz = -1; dz <= 1; ++dz, slot += 6) {
        Cell3 aq{alphaP[0] + dx, alphaP[1] + dy, alphaP[2] + dz};
        bool near = true;
        for (int a = 0; a < 3; ++a) near = near && std::abs(aq[a] - alphaR[a]) <= 1;
        if (!near) continue;
        const RangeMaxIndex* qi = Q.cell(aq);
        if (!qi) continue;
        auto rel1 = dominance_rel_for_cells(alphaP, aq);
        auto rel2 = dominance_rel_for_cells(aq, alphaR);
        fill_six(Pf, Rf, *qi, rel1, rel2, sp, Closure::Closed, m, slot);
      }
  return m;
}

namespace {

// k-d style partition of the psi rows with per-node coordinate minima. A node is
// skipped for p as soon as one coordinate shows that no row in it can violate.
class PruningTree {
 public:
  PruningTree(const VectorMaps& m, std::vector<int> coords) : m_(m), coords_(std::move(coords)), k_(coords_.size()) {
    const int n = static_cast<int>(m.r_count());
    rows_.resize(n);
    std::iota(rows_.begin(), rows_.end(), 0);
    vals_.resize(static_cast<std::size_t>(n) * k_);
    for (int i = 0; i < n; ++i)
      for (std::size_t c = 0; c < k_; ++c) vals_[i * k_ + c] = m.psi[static_cast<std::size_t>(i) * m.width + coords_[c]];
    if (n) build(0, n);
  }

  std::optional<std::pair<int, int>> query(int p, std::span<const double> phi_full,
                                           const std::function<bool(int, int)>& counts) {
    phi_.resize(k_);
    for (std::size_t c = 0; c < k_; ++c) phi_[c] = phi_full[coords_[c]];
    p_ = p;
    counts_ = &counts;
    if (nodes_.empty()) return std::nullopt;
    return rec(0);
  }

 private:
  struct Node {
    int begin, end, left = -1, right = -1;
  };

  double v(int row, std::size_t c) const { return vals_[static_cast<std::size_t>(row) * k_ + c]; }

  int build(int begin, int end) {
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({begin, end});
    mins_.resize(nodes_.size() * k_);
    std::size_t best_c = 0;
    double best_spread = -1;
    for (std::size_t c = 0; c < k_; ++c) {
      double lo = kInf, hi = -kInf;
      for (int i = begin; i < end; ++i) lo = std::min(lo, v(rows_[i], c)), hi = std::max(hi, v(rows_[i], c));
      mins_[id * k_ + c] = lo;
      double spread = lo == hi ? 0.0 : (std::isinf(lo) || std::isinf(hi) ? kHigh : hi - lo);
      if (spread > best_spread) best_spread = spread, best_c = c;
    }
    if (end - begin <= 8 || best_spread <= 0) return id;
    int mid = begin + (end - begin) / 2;
    std::nth_element(rows_.begin() + begin, rows_.begin() + mid, rows_.begin() + end,
                     [&](int a, int b) { return v(a, best_c) < v(b, best_c); });
    int l = build(begin, mid);
    int r = build(mid, end);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  bool prunes(int node, std::size_t c) const { return !violates(m_.closure, phi_[c], mins_[node * k_ + c]); }

  std::optional<std::pair<int, int>> rec(int node) {
    if (k_ && prunes(node, hint_)) return std::nullopt;
    for (std::size_t c = 0; c < k_; ++c)
      if (prunes(node, c)) {
        hint_ = c;
        return std::nullopt;
      }
    const Node& nd = nodes_[node];
    if (nd.left < 0) {
      for (int i = nd.begin; i < nd.end; ++i) {
        int r = rows_[i];
        bool all = true;
        for (std::size_t c = 0; c < k_ && all; ++c) all = violates(m_.closure, phi_[c], v(r, c));
        if (all && (*counts_)(p_, r)) return std::pair<int, int>{p_, r};
      }
      return std::nullopt;
    }
    if (auto hit = rec(nd.left)) return hit;
    return rec(nd.right);
  }

  const VectorMaps& m_;
  std::vector<int> coords_;
  std::size_t k_;
  std::vector<int> rows_;
  std::vector<double> vals_, mins_, phi_;
  std::vector<Node> nodes_;
  std::size_t hint_ = 0;
  int p_ = 0;
  const std::function<bool(int, int)>* counts_ = nullptr;
};

}  // namespace

std::optional<std::pair<int, int>> find_dominance_pair(const VectorMaps& maps,
                                                       const std::function<bool(int, int)>& counts,
                                                       DominanceMethod method) {
  if (maps.width <= 0) throw std::invalid_argument("maps have no coordinates");
  if (maps.phi.size() % maps.width || maps.psi.size() % maps.width)
    throw std::invalid_argument("map length mismatch");
  const std::size_t np = maps.p_count(), nr = maps.r_count();
  if (np == 0 || nr == 0) return std::nullopt;

  if (method == DominanceMethod::Scan) {
    for (std::size_t p = 0; p < np; ++p)
      for (std::size_t r = 0; r < nr; ++r)
        if (!maps.connected(p, r) && counts(static_cast<int>(p), static_cast<int>(r)))
          return std::pair<int, int>{static_cast<int>(p), static_cast<int>(r)};
    return std::nullopt;
  }

  // Drop coordinates that violate for every pair; stop if one connects every pair.
  std::vector<int> coords;
  for (int j = 0; j < maps.width; ++j) {
    double pmin = kInf, pmax = -kInf, rmin = kInf, rmax = -kInf;
    for (std::size_t p = 0; p < np; ++p) {
      double v = maps.phi[p * maps.width + j];
      pmin = std::min(pmin, v), pmax = std::max(pmax, v);
    }
    for (std::size_t r = 0; r < nr; ++r) {
      double v = maps.psi[r * maps.width + j];
      rmin = std::min(rmin, v), rmax = std::max(rmax, v);
    }
    if (violates(maps.closure, pmin, rmax)) continue;
    if (!violates(maps.closure, pmax, rmin)) return std::nullopt;
    coords.push_back(j);
  }
  PruningTree tree(maps, std::move(coords));
  for (std::size_t p = 0; p < np; ++p)
    if (auto hit = tree.query(static_cast<int>(p), maps.phi_row(p), counts)) return hit;
  return std::nullopt;
}

bool dominance_pair_exists(const VectorMaps& maps, const std::function<bool(int, int)>& counts,
                           DominanceMethod method) {
  return find_dominance_pair(maps, counts, method).has_value();
}

namespace {

class CellPairSolver {
 public:
  CellPairSolver(std::span<const Pt3> P, const CubeQIndex& Q, std::span<const Pt3> R, const Cell3& aP,
                 const Cell3& aR, const Diam2CubeOptions& opt)
      : P_(P), R_(R), Q_(Q), aP_(aP), aR_(aR), opt_(opt) {
    Pf_.reserve(P.size());
    Rf_.reserve(R.size());
    for (const auto& p : P) {
      if (cell_of(p) != aP) throw std::invalid_argument("P point outside alphaP");
      Pf_.push_back(frac(p, aP));
    }
    for (const auto& r : R) {
      if (cell_of(r) != aR) throw std::invalid_argument("R point outside alphaR");
      Rf_.push_back(frac(r, aR));
    }
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          Cell3 aq{aP[0] + dx, aP[1] + dy, aP[2] + dz};
          bool near = true;
          for (int a = 0; a < 3; ++a) near = near && std::abs(aq[a] - aR[a]) <= 1;
          const RangeMaxIndex* qi = near ? Q.cell(aq) : nullptr;
          if (!qi) continue;
          auto rel1 = dominance_rel_for_cells(aP, aq);
          auto rel2 = dominance_rel_for_cells(aq, aR);
          int free_rels = 0;
          for (int a = 0; a < 3; ++a) free_rels += (rel1[a] == Rel::ANY) + (rel2[a] == Rel::ANY);
          for (int c = 0; c < 6; ++c) slots_.push_back({qi, rel1, rel2, c, free_rels});
        }
    // Loose relations first: they tend to connect many pairs at once.
    std::stable_sort(slots_.begin(), slots_.end(), [](const Slot& a, const Slot& b) { return a.free > b.free; });
  }

  Diam2Result run() {
    std::vector<int> pi(P_.size()), ri(R_.size());
    std::iota(pi.begin(), pi.end(), 0);
    std::iota(ri.begin(), ri.end(), 0);
    res_.ok = level(0, pi, ri, {}, {1, 1, 1});
    return res_;
  }

 private:
  bool fail(int p, int r) {
    res_.witness = std::pair<int, int>{p, r};
    return false;
  }

  bool direct(const std::vector<int>& pi, const std::vector<int>& ri) {
    res_.stats.direct_pairs += pi.size() * ri.size();
    for (int p : pi)
      for (int r : ri)
        if (!cubes_meet(P_[p], R_[r]) && !Q_.common_neighbor(P_[p], R_[r])) return fail(p, r);
    return true;
  }

  // Slots are evaluated one at a time. A point that one slot already connects
  // to every live point on the other side cannot take part in a violation and
  // is retired; the dominance search then runs on the survivors only.
  bool separated(const std::vector<int>& pi, const std::vector<int>& ri, const Pt3& mu,
                 const std::array<int, 3>& sigma) {
    ++res_.stats.separated_calls;
    SideSpec sp;
    sp.sigma = sigma;
    for (int a = 0; a < 3; ++a) {
      std::pair<double, double> hi_side{mu[a], kInf}, lo_side{-kInf, below(mu[a])};
      sp.rside[a] = sigma[a] > 0 ? hi_side : lo_side;
      sp.pside[a] = sigma[a] > 0 ? lo_side : hi_side;
    }
    std::vector<int> pl = pi, rl = ri;
    std::vector<std::vector<double>> pcol, rcol;  // per used slot, indexed like pi / ri
    std::vector<int> ppos(pi.size()), rpos(ri.size());
    std::vector<Pt3> pf, rf;
    std::vector<double> ptmp, rtmp;
    std::vector<int> pos_of_p(P_.size()), pos_of_r(R_.size());
    for (std::size_t k = 0; k < pi.size(); ++k) pos_of_p[pi[k]] = static_cast<int>(k);
    for (std::size_t k = 0; k < ri.size(); ++k) pos_of_r[ri[k]] = static_cast<int>(k);

    for (const Slot& sl : slots_) {
      pf.clear(), rf.clear();
      for (int p : pl) pf.push_back(Pf_[p]);
      for (int r : rl) rf.push_back(Rf_[r]);
      ptmp.assign(pl.size(), 0.0), rtmp.assign(rl.size(), 0.0);
      if (!scalar_case(pf, rf, *sl.q, sl.rel1, sl.rel2, sp, kSixCases[sl.c], Closure::Closed, ptmp.data(), 1,
                       rtmp.data(), 1))
        continue;
      double pmax = *std::max_element(ptmp.begin(), ptmp.end());
      double rmin = *std::min_element(rtmp.begin(), rtmp.end());
      if (pmax <= rmin) return true;
      pcol.emplace_back(pi.size()), rcol.emplace_back(ri.size());
      for (std::size_t k = 0; k < pl.size(); ++k) pcol.back()[pos_of_p[pl[k]]] = ptmp[k];
      for (std::size_t k = 0; k < rl.size(); ++k) rcol.back()[pos_of_r[rl[k]]] = rtmp[k];
      std::vector<int> pl2, rl2;
      double pmax2 = -kInf;
      for (std::size_t k = 0; k < pl.size(); ++k)
        if (ptmp[k] > rmin) pl2.push_back(pl[k]), pmax2 = std::max(pmax2, ptmp[k]);
      for (std::size_t k = 0; k < rl.size(); ++k)
        if (rtmp[k] < pmax2) rl2.push_back(rl[k]);
      pl.swap(pl2), rl.swap(rl2);
      if (pl.empty() || rl.empty()) return true;
    }

    VectorMaps m;
    m.width = static_cast<int>(pcol.size());
    m.closure = Closure::Closed;
    if (m.width == 0) {
      for (int p : pl)
        for (int r : rl)
          if (!cubes_meet(P_[p], R_[r])) return fail(p, r);
      return true;
    }
    m.active.assign(m.width, 1);
    m.phi.resize(pl.size() * m.width);
    m.psi.resize(rl.size() * m.width);
    for (std::size_t k = 0; k < pl.size(); ++k)
      for (int j = 0; j < m.width; ++j) m.phi[k * m.width + j] = pcol[j][pos_of_p[pl[k]]];
    for (std::size_t k = 0; k < rl.size(); ++k)
      for (int j = 0; j < m.width; ++j) m.psi[k * m.width + j] = rcol[j][pos_of_r[rl[k]]];
    auto hit = find_dominance_pair(
        m, [&](int a, int b) { return !cubes_meet(P_[pl[a]], R_[rl[b]]); }, opt_.method);
    if (hit) return fail(pl[hit->first], rl[hit->second]);
    return true;
  }

  // Drop each point of `a` whose cube shares some q with every cube of `b`;
  // such a point is connected to all of b.
  void retire_covered(std::vector<int>& a, std::span<const Pt3> A, const std::vector<int>& b,
                      std::span<const Pt3> B) {
    QueryBox common;
    for (int j : b)
      for (int k = 0; k < 3; ++k) {
        common.lo[k] = std::max(common.lo[k], B[j][k] - 1);
        common.hi[k] = std::min(common.hi[k], B[j][k] + 1);
      }
    if (common.empty()) return;
    std::vector<int> keep;
    for (int i : a) {
      QueryBox box = common;
      for (int k = 0; k < 3; ++k) {
        box.lo[k] = std::max(box.lo[k], A[i][k] - 1);
        box.hi[k] = std::min(box.hi[k], A[i][k] + 1);
      }
      if (!Q_.global().any_in(box)) keep.push_back(i);
    }
    a.swap(keep);
  }

  bool level(int L, std::vector<int> pi, std::vector<int> ri, Pt3 mu, std::array<int, 3> sigma) {
    if (pi.empty() || ri.empty()) return true;
    ++res_.stats.recursion_nodes;
    res_.stats.point_visits += pi.size() + ri.size();
    if (opt_.retire_covered) {
      retire_covered(pi, P_, ri, R_);
      if (pi.empty()) return true;
      retire_covered(ri, R_, pi, P_);
      if (ri.empty()) return true;
    }
    if (pi.size() * ri.size() <= opt_.direct_pairs) return direct(pi, ri);
    if (L == 3) return separated(pi, ri, mu, sigma);

    std::vector<double> vals;
    vals.reserve(pi.size() + ri.size());
    for (int p : pi) vals.push_back(Pf_[p][L]);
    for (int r : ri) vals.push_back(Rf_[r][L]);
    std::size_t k = vals.size() / 2;
    std::nth_element(vals.begin(), vals.begin() + k, vals.end());
    double m = vals[k];
    bool has_lower = std::any_of(vals.begin(), vals.begin() + k, [&](double v) { return v < m; });
    if (!has_lower) {
      // m is the minimum; split just above it instead.
      double next = kInf;
      for (double v : vals)
        if (v > m) next = std::min(next, v);
      if (next == kInf) return direct(pi, ri);
      m = next;
    }
    std::vector<int> plo, phi, rlo, rhi;
    for (int p : pi) (Pf_[p][L] < m ? plo : phi).push_back(p);
    for (int r : ri) (Rf_[r][L] < m ? rlo : rhi).push_back(r);
    vals.clear();
    vals.shrink_to_fit();

    mu[L] = m;
    sigma[L] = 1;
    if (!level(L + 1, plo, rhi, mu, sigma)) return false;
    sigma[L] = -1;
    if (!level(L + 1, phi, rlo, mu, sigma)) return false;
    if (!level(L, plo, rlo, mu, sigma)) return false;
    return level(L, phi, rhi, mu, sigma);
  }

  struct Slot {
    const RangeMaxIndex* q;
    GeneralizedDominance rel1, rel2;
    int c;
    int free;
  };

  std::span<const Pt3> P_, R_;
  const CubeQIndex& Q_;
  std::vector<Slot> slots_;
  Cell3 aP_, aR_;
  const Diam2CubeOptions& opt_;
  std::vector<Pt3> Pf_, Rf_;
  Diam2Result res_;
};

}  // namespace

Diam2Result solve_cell_pair(std::span<const Pt3> P, const CubeQIndex& Q, std::span<const Pt3> R,
                            const Cell3& alphaP, const Cell3& alphaR, const Diam2CubeOptions& opt) {
  return CellPairSolver(P, Q, R, alphaP, alphaR, opt).run();
}

Diam2Result diam2_unit_cubes(std::span<const Pt3> P, std::span<const Pt3> Q, std::span<const Pt3> R,
                             const Diam2CubeOptions& opt) {
  Diam2Result res;
  if (P.empty() || R.empty()) return res;

  // Cell pairs more than 2 apart on some axis cannot be bridged by one cube.
  std::array<int, 3> pmin{}, pmax{}, rmin{}, rmax{};
  std::vector<Cell3> pc(P.size()), rc(R.size());
  for (std::size_t i = 0; i < P.size(); ++i) pc[i] = cell_of(P[i]);
  for (std::size_t i = 0; i < R.size(); ++i) rc[i] = cell_of(R[i]);
  for (int a = 0; a < 3; ++a) {
    auto by = [a](const std::vector<Cell3>& v) {
      return std::minmax_element(v.begin(), v.end(), [a](const Cell3& x, const Cell3& y) { return x[a] < y[a]; });
    };
    auto [plo, phi] = by(pc);
    auto [rlo, rhi] = by(rc);
    pmin[a] = static_cast<int>(plo - pc.begin()), pmax[a] = static_cast<int>(phi - pc.begin());
    rmin[a] = static_cast<int>(rlo - rc.begin()), rmax[a] = static_cast<int>(rhi - rc.begin());
    if (rc[rmax[a]][a] - pc[pmin[a]][a] > 2) {
      res.ok = false;
      res.witness = std::pair<int, int>{pmin[a], rmax[a]};
      return res;
    }
    if (pc[pmax[a]][a] - rc[rmin[a]][a] > 2) {
      res.ok = false;
      res.witness = std::pair<int, int>{pmax[a], rmin[a]};
      return res;
    }
  }

  CubeQIndex qidx(Q);
  std::map<Cell3, std::vector<int>> pcells, rcells;
  for (std::size_t i = 0; i < P.size(); ++i) pcells[pc[i]].push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < R.size(); ++i) rcells[rc[i]].push_back(static_cast<int>(i));
  for (const auto& [ap, pidx] : pcells) {
    std::vector<Pt3> ps;
    for (int i : pidx) ps.push_back(P[i]);
    for (const auto& [ar, ridx] : rcells) {
      std::vector<Pt3> rs;
      for (int i : ridx) rs.push_back(R[i]);
      Diam2Result sub = solve_cell_pair(ps, qidx, rs, ap, ar, opt);
      res.stats.separated_calls += sub.stats.separated_calls;
      res.stats.direct_pairs += sub.stats.direct_pairs;
      res.stats.recursion_nodes += sub.stats.recursion_nodes;
      res.stats.point_visits += sub.stats.point_visits;
      if (!sub.ok) {
        res.ok = false;
        res.witness = std::pair<int, int>{pidx[sub.witness->first], ridx[sub.witness->second]};
        return res;
      }
    }
  }
  return res;
}

}  // namespace gdiam
