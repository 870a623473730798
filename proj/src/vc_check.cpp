#include "gdiam/vc_check.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace gdiam {

void TraceFamily::add(const std::vector<int>& members) {
  std::vector<std::uint64_t> bits(words(), 0);
  for (int e : members) {
    if (e < 0 || e >= ground) throw std::out_of_range("set member outside the ground set");
    bits[e >> 6] |= std::uint64_t{1} << (e & 63);
  }
  sets.push_back(std::move(bits));
}

std::vector<int> TraceFamily::members(std::size_t set) const {
  std::vector<int> out;
  for (int e = 0; e < ground; ++e)
    if (contains(set, e)) out.push_back(e);
  return out;
}

std::size_t trace_count(const TraceFamily& fam, const std::vector<int>& subset) {
  for (int e : subset)
    if (e < 0 || e >= fam.ground) throw std::out_of_range("subset index outside the ground set");
  std::unordered_set<std::string> traces;
  std::string t(subset.size(), '0');
  for (std::size_t s = 0; s < fam.sets.size(); ++s) {
    for (std::size_t i = 0; i < subset.size(); ++i) t[i] = fam.contains(s, subset[i]) ? '1' : '0';
    traces.insert(t);
  }
  return traces.size();
}

namespace {

double choose(int n, int k) {
  double c = 1;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

// Per-set membership masks of the chosen elements; shattered iff all 2^d
// masks occur.
bool shattered(const std::vector<std::uint32_t>& masks, int d, std::vector<char>& seen) {
  const std::size_t full = std::size_t{1} << d;
  seen.assign(full, 0);
  std::size_t hit = 0;
  for (auto m : masks)
    if (!seen[m]) {
      seen[m] = 1;
      if (++hit == full) return true;
    }
  return false;
}

}  // namespace

ShatterSearch find_shattered_subset(const TraceFamily& fam, int k, std::uint64_t budget, std::uint64_t seed,
                                    std::uint64_t exhaustive_limit) {
  if (k < 0 || k > 20) throw std::invalid_argument("find_shattered_subset: k must lie in [0, 20]");
  ShatterSearch out;
  if (k == 0) {
    out.subset = std::vector<int>{};
    out.exhaustive = true;
    return out;
  }
  // Only elements that are in some set and missing from another can occur.
  std::vector<int> cand;
  for (int e = 0; e < fam.ground; ++e) {
    bool in = false, out_ = false;
    for (std::size_t s = 0; s < fam.sets.size() && !(in && out_); ++s) (fam.contains(s, e) ? in : out_) = true;
    if (in && out_) cand.push_back(e);
  }
  const std::size_t nsets = fam.sets.size();
  std::vector<char> seen;
  if (static_cast<int>(cand.size()) < k || (std::size_t{1} << k) > nsets) {
    out.exhaustive = true;
    return out;
  }

  if (choose(static_cast<int>(cand.size()), k) <= static_cast<double>(exhaustive_limit)) {
    out.exhaustive = true;
    std::vector<int> chosen;
    std::vector<std::vector<std::uint32_t>> masks(k + 1, std::vector<std::uint32_t>(nsets, 0));
    // Depth-first over increasing candidate positions; every prefix of a
    // shattered set is shattered, so non-shattered prefixes are cut.
    auto dfs = [&](auto&& self, std::size_t from, int d) -> bool {
      if (d == k) return true;
      for (std::size_t i = from; i + (k - d) <= cand.size(); ++i) {
        ++out.nodes;
        const int e = cand[i];
        for (std::size_t s = 0; s < nsets; ++s)
          masks[d + 1][s] = masks[d][s] | (static_cast<std::uint32_t>(fam.contains(s, e)) << d);
        if (!shattered(masks[d + 1], d + 1, seen)) continue;
        chosen.push_back(e);
        if (self(self, i + 1, d + 1)) return true;
        chosen.pop_back();
      }
      return false;
    };
    if (dfs(dfs, 0, 0)) out.subset = chosen;
    return out;
  }

  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> masks(nsets);
  for (std::uint64_t trial = 0; trial < budget; ++trial) {
    ++out.nodes;
    std::vector<int> pick = cand;
    for (int i = 0; i < k; ++i) std::swap(pick[i], pick[i + rng() % (pick.size() - i)]);
    pick.resize(k);
    std::sort(pick.begin(), pick.end());
    for (std::size_t s = 0; s < nsets; ++s) {
      std::uint32_t m = 0;
      for (int i = 0; i < k; ++i) m |= static_cast<std::uint32_t>(fam.contains(s, pick[i])) << i;
      masks[s] = m;
    }
    if (shattered(masks, k, seen)) {
      out.subset = pick;
      return out;
    }
  }
  return out;
}

namespace {

bool dom(const Pt3& a, const Pt3& b, const GeneralizedDominance& rel) {
  for (int i = 0; i < 3; ++i)
    if (!rel_holds(rel[i], a[i], b[i])) return false;
  return true;
}

using Bits = std::vector<std::uint64_t>;

void or_into(Bits& dst, const Bits& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
}

// reach[j] = union of prev[i] over i linked to j.
template <class Linked>
std::vector<Bits> propagate(const std::vector<Bits>& prev, std::size_t next_count, std::size_t words, Linked linked) {
  std::vector<Bits> out(next_count, Bits(words, 0));
  for (std::size_t j = 0; j < next_count; ++j)
    for (std::size_t i = 0; i < prev.size(); ++i)
      if (linked(i, j)) or_into(out[j], prev[i]);
  return out;
}

template <class Linked>
std::vector<Bits> first_layer(int ground, std::size_t count, Linked linked) {
  TraceFamily f(ground);
  std::vector<Bits> out(count, Bits(f.words(), 0));
  for (std::size_t j = 0; j < count; ++j)
    for (int p = 0; p < ground; ++p)
      if (linked(static_cast<std::size_t>(p), j)) out[j][p >> 6] |= std::uint64_t{1} << (p & 63);
  return out;
}

TraceFamily as_family(int ground, std::vector<Bits> sets) {
  TraceFamily f(ground);
  f.sets = std::move(sets);
  return f;
}

}  // namespace

TraceFamily neighborhood_family(std::span<const Pt3> P, std::span<const Pt3> Q, std::span<const Pt3> R,
                                const GeneralizedDominance& r1, const GeneralizedDominance& r2) {
  const int n = static_cast<int>(P.size());
  auto q = first_layer(n, Q.size(), [&](std::size_t p, std::size_t j) { return dom(P[p], Q[j], r1); });
  auto r = propagate(q, R.size(), TraceFamily(n).words(), [&](std::size_t i, std::size_t j) { return dom(Q[i], R[j], r2); });
  return as_family(n, std::move(r));
}

TraceFamily neighborhood_family(std::span<const Pt3> P, std::span<const Pt3> Q, std::span<const Pt3> R,
                                std::span<const Pt3> S, const GeneralizedDominance& r1,
                                const GeneralizedDominance& r2, const GeneralizedDominance& r3) {
  const int n = static_cast<int>(P.size());
  const std::size_t w = TraceFamily(n).words();
  auto q = first_layer(n, Q.size(), [&](std::size_t p, std::size_t j) { return dom(P[p], Q[j], r1); });
  auto r = propagate(q, R.size(), w, [&](std::size_t i, std::size_t j) { return dom(Q[i], R[j], r2); });
  auto s = propagate(r, S.size(), w, [&](std::size_t i, std::size_t j) { return dom(R[i], S[j], r3); });
  return as_family(n, std::move(s));
}

TraceFamily neighborhood_family(const std::vector<std::vector<GeomObject<Rat>>>& groups) {
  if (groups.size() < 2) throw std::invalid_argument("neighborhood_family needs at least two groups");
  const auto& G0 = groups[0];
  const int n = static_cast<int>(G0.size());
  auto layer = first_layer(n, groups[1].size(),
                           [&](std::size_t p, std::size_t j) { return objects_intersect(G0[p], groups[1][j]); });
  for (std::size_t g = 2; g < groups.size(); ++g) {
    const auto& A = groups[g - 1];
    const auto& B = groups[g];
    layer = propagate(layer, B.size(), TraceFamily(n).words(),
                      [&](std::size_t i, std::size_t j) { return objects_intersect(A[i], B[j]); });
  }
  return as_family(n, std::move(layer));
}

Instance rect_unbounded_vc_instance(const TraceFamily& system) {
  Instance inst;
  inst.kind = ObjKind::Box;
  inst.dim = 2;
  inst.numeric_mode = NumericMode::Rational;
  inst.parts = {Part{"S", {}, {}}, Part{"P", {}, {}}, Part{"Q", {}, {}}};
  Part &S = inst.parts[0], &P = inst.parts[1], &Q = inst.parts[2];
  // Distinct dyadic values in (0, 1/16].
  auto step = [](std::size_t count) {
    return Rat(1, 16 * static_cast<long>(std::bit_ceil(std::max<std::size_t>(count, 1))));
  };
  const Rat sa = step(system.sets.size()), sb = step(static_cast<std::size_t>(system.ground));
  auto box = [](Rat x0, Rat y0, Rat x1, Rat y1) -> GeomObject<Rat> {
    return AxisBoxD<Rat>(PointD<Rat>{x0, y0}, PointD<Rat>{x1, y1});
  };
  for (std::size_t i = 0; i < system.sets.size(); ++i) {
    const Rat a = sa * static_cast<long>(i + 1);
    S.objects.push_back(box(a - 1, 2 + a, a, 3 + a));
    S.labels.push_back(SourceLabel{"s", {static_cast<int>(i)}});
    for (int e : system.members(i)) {
      const Rat b = sb * (e + 1);
      P.objects.push_back(box(a, 1 + b, 1 + b, 2 + a));
      P.labels.push_back(SourceLabel{"p", {static_cast<int>(i), e}});
    }
  }
  for (int e = 0; e < system.ground; ++e) {
    const Rat b = sb * (e + 1);
    Q.objects.push_back(box(1 + b, b, 2 + b, 1 + b));
    Q.labels.push_back(SourceLabel{"q", {e}});
  }
  return inst;
}

TraceFamily power_set_system(int k) {
  if (k < 0 || k > 20) throw std::invalid_argument("power_set_system: k must lie in [0, 20]");
  TraceFamily f(k);
  for (std::uint32_t m = 0; m < (1u << k); ++m) {
    std::vector<int> members;
    for (int e = 0; e < k; ++e)
      if ((m >> e) & 1) members.push_back(e);
    f.add(members);
  }
  return f;
}

bool in_sign_box(const Pt3& p, const SignBox& b) {
  for (int i = 0; i < 3; ++i)
    if ((b[i] > 0 && !(p[i] > 0)) || (b[i] < 0 && !(p[i] < 0))) return false;
  return true;
}

std::vector<Pt3> filter_sign_box(std::span<const Pt3> pts, const SignBox& b) {
  std::vector<Pt3> out;
  for (const auto& p : pts)
    if (in_sign_box(p, b)) out.push_back(p);
  return out;
}

std::vector<SignBox> diam2_cover_regions() {
  return {{+1, +1, 0}, {0, +1, +1}, {+1, 0, +1}, {-1, -1, 0}, {0, -1, -1}, {-1, 0, -1}};
}

std::vector<std::pair<SignBox, SignBox>> diam3_cover_regions() {
  const SignBox any{0, 0, 0};
  return {
      {{+1, -1, 0}, {0, +1, -1}}, {{0, +1, -1}, {-1, 0, +1}}, {{-1, 0, +1}, {+1, -1, 0}},
      {{-1, +1, 0}, {+1, 0, -1}}, {{0, -1, +1}, {-1, +1, 0}}, {{+1, 0, -1}, {0, -1, +1}},
      {{+1, +1, 0}, any},         {{+1, 0, +1}, any},         {{0, +1, +1}, any},
      {{-1, -1, 0}, {+1, +1, 0}}, {{-1, 0, -1}, {+1, 0, +1}}, {{0, -1, -1}, {0, +1, +1}},
      {any, {-1, -1, 0}},         {any, {-1, 0, -1}},         {any, {0, -1, -1}},
  };
}

const char* vc_case_name(VcCase c) {
  switch (c) {
    case VcCase::Diam2Vc1: return "diam2-vc1";
    case VcCase::Diam3Vc1: return "diam3-vc1";
    case VcCase::Diam3Vc2: return "diam3-vc2";
    case VcCase::RectUnbounded: return "rect-unbounded";
  }
  return "?";
}

VcCase parse_vc_case(const std::string& s) {
  for (auto c : {VcCase::Diam2Vc1, VcCase::Diam3Vc1, VcCase::Diam3Vc2, VcCase::RectUnbounded})
    if (s == vc_case_name(c)) return c;
  throw std::invalid_argument("unknown vc case: " + s);
}

namespace {

std::array<std::vector<Pt3>*, 4> config_groups(VcConfig& cfg) { return {&cfg.P, &cfg.Q, &cfg.R, &cfg.S}; }

Pt3 sample_point(std::mt19937_64& rng, const VcConfig& cfg, int g) {
  Pt3 p;
  for (int a = 0; a < 3; ++a) {
    const double l = cfg.lo[g][a], h = cfg.hi[g][a];
    if (cfg.lattice)
      p[a] = l + static_cast<double>(rng() % static_cast<std::uint64_t>((h - l) * 8)) / 8.0;
    else
      p[a] = l + (h - l) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }
  return p;
}

}  // namespace

VcConfig random_vc_config(VcCase c, std::uint64_t seed, int max_points) {
  if (c == VcCase::RectUnbounded) throw std::invalid_argument("rect-unbounded has no random configuration");
  std::mt19937_64 rng(seed);
  auto uni = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  VcConfig cfg;
  const bool four = c != VcCase::Diam2Vc1;
  auto rel = [&] {
    int r = uni(0, 4);
    return r < 2 ? Rel::LT : r < 4 ? Rel::GT : Rel::ANY;
  };
  for (auto* g : {&cfg.r1, &cfg.r2, &cfg.r3})
    for (int a = 0; a < 3; ++a) (*g)[a] = rel();

  // (first group, second group, axis): groups 0..3 are P, Q, R, S and the
  // link between g and g + 1 uses relation g.
  struct Sep {
    int g, axis;
  };
  std::vector<Sep> seps;
  switch (c) {
    case VcCase::Diam2Vc1:
      seps = {{0, 0}, {0, 1}};
      cfg.hypothesis = "P,Q x- and y-separated";
      break;
    case VcCase::Diam3Vc1:
      seps = {{0, 0}, {1, 1}, {2, 2}};
      cfg.forbidden_k = 3;
      cfg.hypothesis = "P,Q x-separated; Q,R y-separated; R,S z-separated";
      break;
    default: {
      int which = uni(0, 2);
      seps = {{which, 0}, {which, 1}};
      cfg.hypothesis = std::string(which == 0 ? "P,Q" : which == 1 ? "Q,R" : "R,S") + " x- and y-separated";
      break;
    }
  }
  // Interval per (group, axis): [0, 2) unless separated.
  for (auto& row : cfg.lo) row.fill(0.0);
  for (auto& row : cfg.hi) row.fill(2.0);
  const GeneralizedDominance* rels[3] = {&cfg.r1, &cfg.r2, &cfg.r3};
  for (const auto& s : seps) {
    Rel r = (*rels[s.g])[s.axis];
    // Mostly on the side where the relation holds across the gap.
    bool first_low = r == Rel::LT ? uni(0, 99) < 85 : r == Rel::GT ? uni(0, 99) >= 85 : uni(0, 1) == 0;
    int a = first_low ? s.g : s.g + 1, b = first_low ? s.g + 1 : s.g;
    cfg.lo[a][s.axis] = 0, cfg.hi[a][s.axis] = 1;
    cfg.lo[b][s.axis] = 1, cfg.hi[b][s.axis] = 2;
  }
  cfg.lattice = uni(0, 9) < 3;
  auto groups = config_groups(cfg);
  for (int g = 0; g < (four ? 4 : 3); ++g) {
    int n = g == 0 ? uni(3, max_points) : uni(1, max_points);
    groups[g]->resize(n);
    for (auto& p : *groups[g]) p = sample_point(rng, cfg, g);
  }
  return cfg;
}

TraceFamily family_of(const VcConfig& cfg) {
  if (cfg.S.empty()) return neighborhood_family(cfg.P, cfg.Q, cfg.R, cfg.r1, cfg.r2);
  return neighborhood_family(cfg.P, cfg.Q, cfg.R, cfg.S, cfg.r1, cfg.r2, cfg.r3);
}

namespace {

std::string describe(const VcConfig& cfg, const std::vector<int>& subset) {
  std::ostringstream out;
  out << cfg.hypothesis << "; rels " << cfg.r1.str() << " " << cfg.r2.str() << " " << cfg.r3.str()
      << "; shattered P indices";
  for (int e : subset) out << ' ' << e;
  return out.str();
}

}  // namespace

VcReport run_vc_case(VcCase c, int trials, std::uint64_t seed) {
  VcReport rep;
  if (c == VcCase::RectUnbounded) {
    for (int k = 1; k <= trials; ++k) {
      ++rep.trials;
      auto system = power_set_system(k);
      auto inst = rect_unbounded_vc_instance(system);
      auto fam = neighborhood_family({inst.find_part("Q")->objects, inst.find_part("P")->objects,
                                      inst.find_part("S")->objects});
      auto found = find_shattered_subset(fam, k);
      rep.exhaustive = rep.exhaustive && found.exhaustive;
      if (fam.sets != system.sets || !found.subset) {
        ++rep.violations;
        if (rep.witness.empty()) rep.witness = "k = " + std::to_string(k) + ": family not realized or not shattered";
      } else {
        ++rep.nontrivial;
      }
    }
    return rep;
  }
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    auto cfg = random_vc_config(c, rng());
    auto fam = family_of(cfg);
    ++rep.trials;
    auto hit = find_shattered_subset(fam, cfg.forbidden_k);
    rep.exhaustive = rep.exhaustive && hit.exhaustive;
    if (hit.subset) {
      if (rep.violations++ == 0) rep.witness = describe(cfg, *hit.subset);
    }
    if (find_shattered_subset(fam, cfg.forbidden_k - 1).subset) ++rep.nontrivial;
  }
  return rep;
}

std::size_t max_trace_count(const TraceFamily& fam, int k) {
  if (k < 0 || k > 20) throw std::invalid_argument("max_trace_count: k must lie in [0, 20]");
  if (k > fam.ground) return 0;
  std::size_t best = 0;
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  for (;;) {
    best = std::max(best, trace_count(fam, pick));
    int i = k - 1;
    while (i >= 0 && pick[i] == fam.ground - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

VcReport adversarial_vc_case(VcCase c, int restarts, int steps, std::uint64_t seed, int points) {
  if (c == VcCase::RectUnbounded) throw std::invalid_argument("rect-unbounded has no random configuration");
  VcReport rep;
  std::mt19937_64 rng(seed);
  const Rel opts[3] = {Rel::LT, Rel::GT, Rel::ANY};
  for (int r = 0; r < restarts; ++r) {
    ++rep.trials;
    auto cfg = random_vc_config(c, rng(), points);
    // Fixed sizes so the exhaustive subset scan stays cheap.
    auto groups = config_groups(cfg);
    const int ngroups = cfg.S.empty() ? 3 : 4;
    for (int g = 0; g < ngroups; ++g) {
      groups[g]->resize(points);
      for (auto& p : *groups[g]) p = sample_point(rng, cfg, g);
    }
    const int k = cfg.forbidden_k;
    std::size_t score = max_trace_count(family_of(cfg), k);
    for (int s = 0; s < steps && score < (std::size_t{1} << k); ++s) {
      VcConfig next = cfg;
      if (rng() % 4 == 0) {
        GeneralizedDominance* rels[3] = {&next.r1, &next.r2, &next.r3};
        (*rels[rng() % (ngroups - 1)])[static_cast<int>(rng() % 3)] = opts[rng() % 3];
      } else {
        int g = static_cast<int>(rng() % ngroups);
        auto& pts = *config_groups(next)[g];
        pts[rng() % pts.size()] = sample_point(rng, next, g);
      }
      std::size_t sc = max_trace_count(family_of(next), k);
      if (sc >= score) cfg = std::move(next), score = sc;
    }
    auto fam = family_of(cfg);
    if (auto hit = find_shattered_subset(fam, k); hit.subset) {
      if (rep.violations++ == 0) rep.witness = describe(cfg, *hit.subset);
    }
    if (find_shattered_subset(fam, k - 1).subset) ++rep.nontrivial;
  }
  return rep;
}

}  // namespace gdiam
