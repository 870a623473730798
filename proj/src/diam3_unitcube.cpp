#include "gdiam/diam3_unitcube.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace gdiam {

bool closed_holds(const GeneralizedDominance& g, const Pt3& a, const Pt3& b) {
  for (int i = 0; i < 3; ++i) {
    if (g[i] == Rel::LT && a[i] > b[i]) return false;
    if (g[i] == Rel::GT && a[i] < b[i]) return false;
  }
  return true;
}

namespace {

int code(Rel r) { return static_cast<int>(r); }

StarOrder derive_star_order(Rel r1y, Rel r1z, Rel r2z, Rel r2x, Rel r3x, Rel r3y) {
  auto lt = [](Rel r) { return r == Rel::ANY ? Rel::LT : r; };
  r1y = lt(r1y), r1z = lt(r1z), r2z = lt(r2z), r2x = lt(r2x), r3x = lt(r3x), r3y = lt(r3y);
  StarOrder o;
  o.z1 = r1y == Rel::LT ? r1z : flip(r1z);
  o.x2 = r2z == o.z1 ? r2x : flip(r2x);
  o.y = r3x == o.x2 ? r3y : flip(r3y);
  return o;
}

const std::array<StarOrder, 729>& star_table() {
  static const std::array<StarOrder, 729> table = [] {
    std::array<StarOrder, 729> t{};
    for (int i = 0; i < 729; ++i) {
      int c = i;
      Rel r[6];
      for (auto& x : r) x = Rel(c % 3), c /= 3;
      t[i] = derive_star_order(r[0], r[1], r[2], r[3], r[4], r[5]);
    }
    return t;
  }();
  return table;
}

// Rows of bits over a ground set; row i of the next stage ORs the rows of all
// related elements of the previous stage.
class BitRows {
 public:
  BitRows(int rows, int bits) : rows_(rows), words_((bits + 63) / 64), data_(static_cast<std::size_t>(rows) * words_, 0) {}

  int rows() const { return rows_; }
  const std::uint64_t* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * words_; }
  std::span<const std::uint64_t> row_span(int i) const { return {row(i), static_cast<std::size_t>(words_)}; }
  void set(int i, int k) { data_[static_cast<std::size_t>(i) * words_ + (k >> 6)] |= std::uint64_t{1} << (k & 63); }
  bool test(int i, int k) const { return (row(i)[k >> 6] >> (k & 63)) & 1u; }
  bool any(int i) const {
    for (int w = 0; w < words_; ++w)
      if (row(i)[w]) return true;
    return false;
  }
  bool any() const {
    for (auto w : data_)
      if (w) return true;
    return false;
  }
  void or_row(int dst, const BitRows& src, int i) {
    std::uint64_t* d = data_.data() + static_cast<std::size_t>(dst) * words_;
    const std::uint64_t* s = src.row(i);
    for (int w = 0; w < words_; ++w) d[w] |= s[w];
  }

 private:
  int rows_, words_;
  std::vector<std::uint64_t> data_;
};

template <class Rel2>
BitRows first_stage(int n_ground, int n_next, Rel2 related) {
  BitRows out(n_next, n_ground);
  for (int j = 0; j < n_next; ++j)
    for (int p = 0; p < n_ground; ++p)
      if (related(p, j)) out.set(j, p);
  return out;
}

template <class Rel2>
BitRows next_stage(const BitRows& prev, int n_ground, int n_next, Rel2 related) {
  BitRows out(n_next, n_ground);
  std::vector<int> live;
  for (int i = 0; i < prev.rows(); ++i)
    if (prev.any(i)) live.push_back(i);
  for (int j = 0; j < n_next; ++j)
    for (int i : live)
      if (related(i, j)) out.or_row(j, prev, i);
  return out;
}

// +1: B above A on the axis, -1: below, 0: not separated (or a side is empty).
int separation(std::span<const Pt3> A, std::span<const Pt3> B, int axis) {
  if (A.empty() || B.empty()) return 0;
  double amin = kInf, amax = -kInf, bmin = kInf, bmax = -kInf;
  for (const auto& a : A) amin = std::min(amin, a[axis]), amax = std::max(amax, a[axis]);
  for (const auto& b : B) bmin = std::min(bmin, b[axis]), bmax = std::max(bmax, b[axis]);
  if (amax < bmin) return 1;
  if (bmax < amin) return -1;
  return 0;
}

// Points x with ref g x (ref_first) or x g ref.
QueryBox relation_box(const GeneralizedDominance& g, const Pt3& ref, bool ref_first) {
  QueryBox b;
  for (int a = 0; a < 3; ++a) {
    Rel r = g[a];
    if (r == Rel::ANY) continue;
    bool x_at_least = (r == Rel::LT) == ref_first;
    (x_at_least ? b.lo[a] : b.hi[a]) = ref[a];
  }
  return b;
}

RangeMaxIndex weighted(std::span<const Pt3> pts, std::vector<double> w) {
  return RangeMaxIndex(std::vector<Pt3>(pts.begin(), pts.end()), {std::move(w)});
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 31;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  return h;
}

}  // namespace

StarOrder star_order(const Rels3& rels, const ChainAxes& ax) {
  int x = ax.pq, y = ax.qr, z = ax.rs;
  int idx = code(rels[0][y]) + 3 * code(rels[0][z]) + 9 * code(rels[1][z]) + 27 * code(rels[1][x]) +
            81 * code(rels[2][x]) + 243 * code(rels[2][y]);
  return star_table()[idx];
}

std::vector<int> star_point_order(std::span<const Pt3> P, int axis) {
  std::vector<int> ord(P.size());
  std::iota(ord.begin(), ord.end(), 0);
  std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return P[a][axis] < P[b][axis]; });
  return ord;
}

std::vector<int> star_set_order(std::span<const Pt3> S, const Rels3& rels, const ChainAxes& axes) {
  auto ord = star_point_order(S, axes.qr);
  if (star_order(rels, axes).y == Rel::GT) std::reverse(ord.begin(), ord.end());
  return ord;
}

bool chain_exists(const Pt3& p, const Pt3& s, std::span<const Pt3> Q, std::span<const Pt3> R, const Rels3& rels) {
  for (const auto& q : Q) {
    if (!closed_holds(rels[0], p, q)) continue;
    for (const auto& r : R)
      if (closed_holds(rels[1], q, r) && closed_holds(rels[2], r, s)) return true;
  }
  return false;
}

std::vector<IntervalRepr> neighborhood_intervals(std::span<const Pt3> P, std::span<const Pt3> Q,
                                                 std::span<const Pt3> R, std::span<const Pt3> S, const Rels3& rels) {
  for (std::size_t i = 1; i < P.size(); ++i)
    if (P[i - 1][1] > P[i][1]) throw std::invalid_argument("neighborhood_intervals: P must be sorted by y");
  if ((!P.empty() && !Q.empty() && separation(P, Q, 0) == 0) ||
      (!Q.empty() && !R.empty() && separation(Q, R, 1) == 0) ||
      (!R.empty() && !S.empty() && separation(R, S, 2) == 0))
    throw std::invalid_argument("neighborhood_intervals: separation precondition violated");
  const int np = static_cast<int>(P.size());
  auto n1 = first_stage(np, static_cast<int>(Q.size()), [&](int p, int q) { return closed_holds(rels[0], P[p], Q[q]); });
  auto n2 = next_stage(n1, np, static_cast<int>(R.size()), [&](int q, int r) { return closed_holds(rels[1], Q[q], R[r]); });
  auto n3 = next_stage(n2, np, static_cast<int>(S.size()), [&](int r, int s) { return closed_holds(rels[2], R[r], S[s]); });
  std::vector<IntervalRepr> out;
  out.reserve(S.size());
  for (int s = 0; s < static_cast<int>(S.size()); ++s) out.push_back(IntervalRepr::from_bits(n3.row_span(s), np));
  return out;
}

ScalarMaps scalar_chain_maps(std::span<const Pt3> P, std::span<const Pt3> Q, std::span<const Pt3> R,
                             std::span<const Pt3> S, const Rels3& rels, int pair) {
  if (pair < 0 || pair > 2) throw std::invalid_argument("scalar_chain_maps: pair must be 0, 1 or 2");
  std::span<const Pt3> groups[4] = {P, Q, R, S};
  ScalarMaps never{std::vector<double>(P.size(), 1.0), std::vector<double>(S.size(), 0.0)};
  if (Q.empty() || R.empty()) return never;
  const auto& A = groups[pair];
  const auto& B = groups[pair + 1];
  const auto& rel = rels[pair];
  std::vector<int> sep;
  bool contradicted = false;
  for (int a = 0; a < 3 && sep.size() < 2; ++a) {
    int d = separation(A, B, a);
    if (d == 0) continue;
    sep.push_back(a);
    if ((d > 0 && rel[a] == Rel::GT) || (d < 0 && rel[a] == Rel::LT)) contradicted = true;
  }
  if (A.empty() || B.empty()) return never;
  if (sep.size() < 2) throw std::invalid_argument("scalar_chain_maps: pair is not separated on two axes");
  if (contradicted) return never;
  const int c = 3 - sep[0] - sep[1];
  const Rel rc = rel[c];
  auto val = [rc, c](const Pt3& x) { return rc == Rel::LT ? x[c] : rc == Rel::GT ? -x[c] : 0.0; };

  ScalarMaps m;
  m.phi.resize(P.size());
  m.psi.resize(S.size());
  if (pair == 0) {
    std::vector<double> vq(Q.size()), wr(R.size());
    for (std::size_t i = 0; i < Q.size(); ++i) vq[i] = val(Q[i]);
    auto iq = weighted(Q, std::move(vq));
    for (std::size_t i = 0; i < R.size(); ++i) wr[i] = iq.max_weight(relation_box(rels[1], R[i], false), 0);
    auto ir = weighted(R, std::move(wr));
    for (std::size_t i = 0; i < P.size(); ++i) m.phi[i] = val(P[i]);
    for (std::size_t i = 0; i < S.size(); ++i) m.psi[i] = ir.max_weight(relation_box(rels[2], S[i], false), 0);
  } else if (pair == 1) {
    std::vector<double> vq(Q.size()), vr(R.size());
    for (std::size_t i = 0; i < Q.size(); ++i) vq[i] = val(Q[i]);
    for (std::size_t i = 0; i < R.size(); ++i) vr[i] = val(R[i]);
    auto iq = weighted(Q, std::move(vq));
    auto ir = weighted(R, std::move(vr));
    for (std::size_t i = 0; i < P.size(); ++i) m.phi[i] = iq.min_weight(relation_box(rels[0], P[i], true), 0);
    for (std::size_t i = 0; i < S.size(); ++i) m.psi[i] = ir.max_weight(relation_box(rels[2], S[i], false), 0);
  } else {
    std::vector<double> vr(R.size()), wq(Q.size());
    for (std::size_t i = 0; i < R.size(); ++i) vr[i] = val(R[i]);
    auto ir = weighted(R, std::move(vr));
    for (std::size_t i = 0; i < Q.size(); ++i) wq[i] = ir.min_weight(relation_box(rels[1], Q[i], true), 0);
    auto iq = weighted(Q, std::move(wq));
    for (std::size_t i = 0; i < P.size(); ++i) m.phi[i] = iq.min_weight(relation_box(rels[0], P[i], true), 0);
    for (std::size_t i = 0; i < S.size(); ++i) m.psi[i] = val(S[i]);
  }
  return m;
}

bool ShadowBox::in_shadow_mod1(const Pt3& p) const {
  Pt3 f;
  for (int a = 0; a < 3; ++a) f[a] = p[a] - std::floor(p[a]);
  return in_shadow(f);
}

void Diam3Stats::absorb(const CuttingStats& c) {
  cutting.nodes += c.nodes;
  cutting.naive_nodes += c.naive_nodes;
  cutting.samples_accepted += c.samples_accepted;
  cutting.trials += c.trials;
  cutting.trapezoids += c.trapezoids;
  cutting.max_crossing_ratio = std::max(cutting.max_crossing_ratio, c.max_crossing_ratio);
  cutting.quality_violations += c.quality_violations;
  cutting.classification_errors += c.classification_errors;
}

int default_grid_slabs(std::size_t n) {
  return std::max(2, static_cast<int>(std::lround(std::pow(static_cast<double>(std::max<std::size_t>(n, 1)), 1.0 / 13))));
}

namespace {

struct Near {
  int id;
  Pt3 f;     // coordinates inside its own unit cell
  Cell3 off;  // its cell minus the P cell
};

struct CellContext {
  Cell3 alpha{};
  std::vector<int> p_ids;
  std::vector<Pt3> p_frac;
  std::vector<Near> q, r, s;  // within 1, 2, 3 cells of alpha
  std::vector<int> s_far;
};

Pt3 frac_in(const Pt3& p, const Cell3& c) {
  return {p[0] - static_cast<double>(c[0]), p[1] - static_cast<double>(c[1]), p[2] - static_cast<double>(c[2])};
}

std::int64_t cheb(const Cell3& a, const Cell3& b) {
  std::int64_t d = 0;
  for (int i = 0; i < 3; ++i) d = std::max<std::int64_t>(d, std::abs(a[i] - b[i]));
  return d;
}

GeneralizedDominance cell_rel(const Cell3& a, const Cell3& b) {
  return dominance_rel_for_cells(std::span<const std::int64_t>(a), std::span<const std::int64_t>(b));
}

int tau_of(const ShadowBox& g, const Pt3& f) {
  return (g.side(0, f[0]) + 1) * 9 + (g.side(1, f[1]) + 1) * 3 + (g.side(2, f[2]) + 1);
}
int tau_axis(int tau, int a) { return (a == 0 ? tau / 9 : a == 1 ? (tau / 3) % 3 : tau % 3) - 1; }
bool tau_shadow(int tau) { return tau_axis(tau, 0) == 0 || tau_axis(tau, 1) == 0 || tau_axis(tau, 2) == 0; }

struct Part {
  Cell3 off{};
  int tau = 0;
  std::vector<int> ids;  // original indices
  std::vector<Pt3> f;
};

std::vector<Part> make_parts(const std::vector<Near>& pts, const ShadowBox& g) {
  std::map<std::pair<Cell3, int>, Part> parts;
  for (const auto& x : pts) {
    int tau = tau_of(g, x.f);
    auto& part = parts[{x.off, tau}];
    part.off = x.off;
    part.tau = tau;
    part.ids.push_back(x.id);
    part.f.push_back(x.f);
  }
  std::vector<Part> out;
  for (auto& [k, v] : parts) out.push_back(std::move(v));
  return out;
}

struct GroupSystems {
  std::vector<std::unique_ptr<PseudolineOracle>> levels;
};

// Separation of each consecutive pair on each axis implied by the slab sides.
struct Layout {
  int dir[3][3] = {};  // [pair][axis]: +1 second group above, -1 below, 0 none
  int count[3] = {};
};

Layout layout_of(int tq, int tr, int ts) {
  Layout L;
  for (int a = 0; a < 3; ++a) {
    int t[4] = {0, tau_axis(tq, a), tau_axis(tr, a), tau_axis(ts, a)};
    for (int k = 0; k < 3; ++k) {
      int d = t[k + 1] - t[k];
      L.dir[k][a] = d > 0 ? 1 : d < 0 ? -1 : 0;
      if (d) ++L.count[k];
    }
  }
  return L;
}

bool contradicts(const Layout& L, const Rels3& rels) {
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < 3; ++a) {
      if (L.dir[k][a] > 0 && rels[k][a] == Rel::GT) return true;
      if (L.dir[k][a] < 0 && rels[k][a] == Rel::LT) return true;
    }
  return false;
}

// Interval-based level for one separated configuration, built from N3 bit rows
// over P_gamma (index order).
std::unique_ptr<IntervalOracle> interval_level(const std::vector<Pt3>& pg, const BitRows& n3, const Part& sg,
                                               const Rels3& rels, const ChainAxes& axes, bool verify) {
  const int np = static_cast<int>(pg.size()), ns = static_cast<int>(sg.f.size());
  auto pord = star_point_order(pg, axes.qr);
  std::vector<int> prank(np);
  for (int t = 0; t < np; ++t) prank[pord[t]] = t;
  auto sord = star_set_order(sg.f, rels, axes);
  std::vector<int> cpos(ns);
  std::vector<IntervalRepr> sets(ns);
  std::vector<int> members;
  for (int t = 0; t < ns; ++t) {
    int s = sord[t];
    cpos[s] = t;
    members.clear();
    for (int p = 0; p < np; ++p)
      if (n3.test(s, p)) members.push_back(prank[p]);
    std::sort(members.begin(), members.end());
    sets[t] = IntervalRepr::from_sorted(members);
  }
  if (verify) {
    MembershipSystem sys(np, ns);
    for (int t = 0; t < ns; ++t)
      for (const auto& x : sets[t].iv)
        for (int k = x.lo; k <= x.hi; ++k) sys.insert(t, k);
    if (!check_star_property(sys).ok) throw std::logic_error("diam3: interval system violates the order condition");
  }
  return std::make_unique<IntervalOracle>(np, std::move(sets), std::move(prank), std::move(cpos));
}

// L_gamma for the P points `pl` (indices into ctx.p_*). Pairs are (local p, S id).
bool outside_shadow_pairs(const CellContext& ctx, const ShadowBox& gamma, const std::vector<int>& pl,
                          const Diam3Options& opt, std::uint64_t seed, std::size_t limit,
                          std::vector<std::pair<int, int>>& out, Diam3Stats& stats) {
  const int np = static_cast<int>(pl.size());
  std::vector<Pt3> pg(np);
  for (int i = 0; i < np; ++i) pg[i] = ctx.p_frac[pl[i]];
  const Cell3 zero{0, 0, 0};

  auto qparts = make_parts(ctx.q, gamma);
  auto rparts = make_parts(ctx.r, gamma);
  auto sparts = make_parts(ctx.s, gamma);
  std::vector<GroupSystems> sys(sparts.size());

  for (const auto& qp : qparts) {
    const auto rel1 = cell_rel(zero, qp.off);
    auto n1 = first_stage(np, static_cast<int>(qp.f.size()),
                          [&](int p, int q) { return closed_holds(rel1, pg[p], qp.f[q]); });
    if (!n1.any()) continue;
    for (const auto& rp : rparts) {
      if (cheb(qp.off, rp.off) > 1) continue;
      const auto rel2 = cell_rel(qp.off, rp.off);
      auto n2 = next_stage(n1, np, static_cast<int>(rp.f.size()),
                           [&](int q, int r) { return closed_holds(rel2, qp.f[q], rp.f[r]); });
      if (!n2.any()) continue;
      for (std::size_t gi = 0; gi < sparts.size(); ++gi) {
        const auto& sg = sparts[gi];
        if (cheb(rp.off, sg.off) > 1) continue;
        if (tau_shadow(qp.tau) && tau_shadow(rp.tau) && tau_shadow(sg.tau)) continue;
        const Rels3 rels{rel1, rel2, cell_rel(rp.off, sg.off)};
        Layout L = layout_of(qp.tau, rp.tau, sg.tau);
        if (contradicts(L, rels)) {
          ++stats.empty_systems;
          continue;
        }
        int pair = -1;
        for (int k = 0; k < 3; ++k)
          if (L.count[k] >= 2) {
            pair = k;
            break;
          }
        if (pair >= 0) {
          auto maps = scalar_chain_maps(pg, qp.f, rp.f, sg.f, rels, pair);
          double lo = *std::min_element(maps.phi.begin(), maps.phi.end());
          double hi = *std::max_element(maps.psi.begin(), maps.psi.end());
          if (!(lo <= hi)) {
            ++stats.empty_systems;
            continue;
          }
          ++stats.scalar_systems;
          sys[gi].levels.push_back(std::make_unique<ScalarOracle>(std::move(maps.phi), std::move(maps.psi), true));
        } else {
          // One separated axis per pair: a permutation.
          ChainAxes ax;
          for (int a = 0; a < 3; ++a) {
            if (L.dir[0][a]) ax.pq = a;
            if (L.dir[1][a]) ax.qr = a;
            if (L.dir[2][a]) ax.rs = a;
          }
          auto n3 = next_stage(n2, np, static_cast<int>(sg.f.size()),
                               [&](int r, int s) { return closed_holds(rels[2], rp.f[r], sg.f[s]); });
          if (!n3.any()) {
            ++stats.empty_systems;
            continue;
          }
          ++stats.interval_systems;
          sys[gi].levels.push_back(interval_level(pg, n3, sg, rels, ax, opt.verify_systems));
        }
      }
    }
  }

  bool truncated = false;
  auto room = [&] { return limit > out.size() ? limit - out.size() : std::size_t{0}; };
  for (std::size_t gi = 0; gi < sparts.size() && !truncated; ++gi) {
    const auto& sg = sparts[gi];
    std::vector<const PseudolineOracle*> lv;
    for (const auto& l : sys[gi].levels) lv.push_back(l.get());
    stats.max_levels = std::max<std::uint64_t>(stats.max_levels, lv.size());
    CuttingParams prm = opt.cutting;
    prm.report_limit = room();
    auto res = cutting_search(lv, np, static_cast<int>(sg.f.size()), prm, mix(seed, gi), true);
    stats.absorb(res.stats);
    for (auto [p, s] : res.pairs) out.emplace_back(p, sg.ids[s]);
    truncated = res.truncated;
  }
  for (int s : ctx.s_far) {
    for (int p = 0; p < np && !truncated; ++p) {
      out.emplace_back(p, s);
      if (out.size() >= limit) truncated = true;
    }
  }
  return truncated;
}

// Rows of the in-shadow chain sets, one per S point in the shadow (others -1).
struct ShadowChains {
  std::vector<int> s_row;  // by S id
  BitRows rows{0, 0};
};

ShadowChains in_shadow_chains(const CellContext& ctx, const ShadowBox& gamma, const std::vector<int>& pl,
                              std::size_t s_total) {
  const int np = static_cast<int>(pl.size());
  std::vector<const Near*> qs, rs, ss;
  for (const auto& x : ctx.q)
    if (gamma.in_shadow(x.f)) qs.push_back(&x);
  for (const auto& x : ctx.r)
    if (gamma.in_shadow(x.f)) rs.push_back(&x);
  for (const auto& x : ctx.s)
    if (gamma.in_shadow(x.f)) ss.push_back(&x);
  const Cell3 zero{0, 0, 0};
  auto meet = [](const Near& a, const Near& b) {
    return cheb(a.off, b.off) <= 1 && closed_holds(cell_rel(a.off, b.off), a.f, b.f);
  };
  auto n1 = first_stage(np, static_cast<int>(qs.size()), [&](int p, int q) {
    return closed_holds(cell_rel(zero, qs[q]->off), ctx.p_frac[pl[p]], qs[q]->f);
  });
  auto n2 = next_stage(n1, np, static_cast<int>(rs.size()), [&](int q, int r) { return meet(*qs[q], *rs[r]); });
  ShadowChains out;
  out.rows = next_stage(n2, np, static_cast<int>(ss.size()), [&](int r, int s) { return meet(*rs[r], *ss[s]); });
  out.s_row.assign(s_total, -1);
  for (std::size_t i = 0; i < ss.size(); ++i) out.s_row[ss[i]->id] = static_cast<int>(i);
  return out;
}

template <class Fn>
void for_cells_within(const Cell3& c, int rad, Fn fn) {
  for (int dx = -rad; dx <= rad; ++dx)
    for (int dy = -rad; dy <= rad; ++dy)
      for (int dz = -rad; dz <= rad; ++dz) fn(Cell3{c[0] + dx, c[1] + dy, c[2] + dz});
}

using Buckets = std::map<Cell3, std::vector<int>>;

Buckets bucket(std::span<const Pt3> pts) {
  Buckets b;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) b[cell_of(pts[i])].push_back(i);
  return b;
}

void gather(std::vector<Near>& out, const Buckets& b, std::span<const Pt3> pts, const Cell3& alpha, int rad) {
  for_cells_within(alpha, rad, [&](const Cell3& c) {
    auto it = b.find(c);
    if (it == b.end()) return;
    Cell3 off{c[0] - alpha[0], c[1] - alpha[1], c[2] - alpha[2]};
    for (int i : it->second) out.push_back(Near{i, frac_in(pts[i], c), off});
  });
}

}  // namespace

ShadowCaseResult shadow_case_solve(std::span<const Pt3> P, std::span<const Pt3> Q, std::span<const Pt3> R,
                                   std::span<const Pt3> S, const ShadowBox& gamma, const Diam3Options& opt) {
  ShadowCaseResult res;
  if (P.empty()) return res;
  CellContext ctx;
  ctx.alpha = cell_of(P[0]);
  for (int i = 0; i < static_cast<int>(P.size()); ++i) {
    if (cell_of(P[i]) != ctx.alpha) throw std::invalid_argument("shadow_case_solve: P spans several unit cells");
    Pt3 f = frac_in(P[i], ctx.alpha);
    if (!gamma.contains(f)) throw std::invalid_argument("shadow_case_solve: P point outside gamma");
    ctx.p_ids.push_back(i);
    ctx.p_frac.push_back(f);
  }
  gather(ctx.q, bucket(Q), Q, ctx.alpha, 1);
  gather(ctx.r, bucket(R), R, ctx.alpha, 2);
  gather(ctx.s, bucket(S), S, ctx.alpha, 3);
  for (int i = 0; i < static_cast<int>(S.size()); ++i)
    if (cheb(cell_of(S[i]), ctx.alpha) > 3) ctx.s_far.push_back(i);
  std::vector<int> pl(P.size());
  std::iota(pl.begin(), pl.end(), 0);
  std::vector<std::pair<int, int>> pairs;
  res.truncated = outside_shadow_pairs(ctx, gamma, pl, opt, mix(opt.seed, 0), std::numeric_limits<std::size_t>::max(),
                                       pairs, res.stats);
  res.pairs = std::move(pairs);
  std::sort(res.pairs.begin(), res.pairs.end());
  res.stats.outside_pairs = res.pairs.size();
  return res;
}

Diam3Result diam3_unit_cubes(std::span<const Pt3> P, std::span<const Pt3> Q, std::span<const Pt3> R,
                             std::span<const Pt3> S, const Diam3Options& opt) {
  Diam3Result res;
  if (P.empty() || S.empty()) return res;
  const std::size_t n = P.size() + Q.size() + R.size() + S.size();
  const int g = opt.g > 0 ? opt.g : default_grid_slabs(n);

  // Cells more than 3 apart cannot be bridged by two intermediate cubes.
  for (int a = 0; a < 3; ++a) {
    int pmin = 0, pmax = 0, smin = 0, smax = 0;
    for (int i = 1; i < static_cast<int>(P.size()); ++i) {
      if (std::floor(P[i][a]) < std::floor(P[pmin][a])) pmin = i;
      if (std::floor(P[i][a]) > std::floor(P[pmax][a])) pmax = i;
    }
    for (int i = 1; i < static_cast<int>(S.size()); ++i) {
      if (std::floor(S[i][a]) < std::floor(S[smin][a])) smin = i;
      if (std::floor(S[i][a]) > std::floor(S[smax][a])) smax = i;
    }
    if (std::floor(S[smax][a]) - std::floor(P[pmin][a]) > 3) {
      res.ok = false;
      res.witness = {pmin, smax};
      return res;
    }
    if (std::floor(P[pmax][a]) - std::floor(S[smin][a]) > 3) {
      res.ok = false;
      res.witness = {pmax, smin};
      return res;
    }
  }

  const Buckets bp = bucket(P), bq = bucket(Q), br = bucket(R), bs = bucket(S);
  std::uint64_t cell_index = 0;
  for (const auto& [alpha, pids] : bp) {
    ++res.stats.unit_cells;
    CellContext ctx;
    ctx.alpha = alpha;
    ctx.p_ids = pids;
    for (int i : pids) ctx.p_frac.push_back(frac_in(P[i], alpha));
    gather(ctx.q, bq, Q, alpha, 1);
    gather(ctx.r, br, R, alpha, 2);
    gather(ctx.s, bs, S, alpha, 3);

    // Nonuniform grid: equal-frequency breakpoints of all nearby points modulo 1.
    std::array<std::vector<double>, 3> br_pts;
    for (int a = 0; a < 3; ++a) {
      std::vector<double> v;
      for (const auto& f : ctx.p_frac) v.push_back(f[a]);
      for (const auto* grp : {&ctx.q, &ctx.r, &ctx.s})
        for (const auto& x : *grp) v.push_back(x.f[a]);
      std::sort(v.begin(), v.end());
      auto& b = br_pts[a];
      b.assign(g + 1, 0.0);
      b[g] = 1.0;
      for (int i = 1; i < g; ++i) b[i] = v[i * v.size() / g];
    }
    std::map<std::array<int, 3>, std::vector<int>> gammas;
    for (int i = 0; i < static_cast<int>(pids.size()); ++i) {
      std::array<int, 3> key{};
      for (int a = 0; a < 3; ++a)
        key[a] = static_cast<int>(std::upper_bound(br_pts[a].begin() + 1, br_pts[a].begin() + g, ctx.p_frac[i][a]) -
                                  (br_pts[a].begin() + 1));
      gammas[key].push_back(i);
    }

    std::uint64_t gamma_index = 0;
    for (const auto& [key, pl] : gammas) {
      ++res.stats.grid_cells;
      ShadowBox gamma;
      for (int a = 0; a < 3; ++a) gamma.lo[a] = br_pts[a][key[a]], gamma.hi[a] = br_pts[a][key[a] + 1];

      // Step 2 first, so its size bounds step 1.
      auto shadow = in_shadow_chains(ctx, gamma, pl, S.size());
      std::size_t s_shadow = 0;
      for (int v : shadow.s_row) s_shadow += v >= 0;
      const std::size_t cap = pl.size() * s_shadow;

      std::vector<std::pair<int, int>> lg;
      bool over = outside_shadow_pairs(ctx, gamma, pl, opt, mix(mix(opt.seed, cell_index), gamma_index), cap + 1, lg,
                                       res.stats);
      res.stats.outside_pairs += lg.size();
      for (int s = 0; s < static_cast<int>(S.size()); ++s) {
        int row = shadow.s_row[s];
        if (row < 0) continue;
        for (std::size_t p = 0; p < pl.size(); ++p) res.stats.in_shadow_pairs += shadow.rows.test(row, static_cast<int>(p));
      }
      if (over) ++res.stats.early_aborts;
      // Step 3: every pair lacking an outside chain needs an in-shadow one.
      for (auto [p, s] : lg) {
        int row = shadow.s_row[s];
        if (row >= 0 && shadow.rows.test(row, p)) continue;
        res.ok = false;
        res.witness = {ctx.p_ids[pl[p]], s};
        return res;
      }
      if (over) throw std::logic_error("diam3: L_gamma exceeded its bound yet is covered");
      ++gamma_index;
    }
    ++cell_index;
  }
  return res;
}

}  // namespace gdiam
