#include "gdiam/bench.hpp"

#include "gdiam/diam2_boxes.hpp"
#include "gdiam/diam2_unitcube.hpp"
#include "gdiam/diam3_unitcube.hpp"
#include "gdiam/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace gdiam {

const char* alg_name(Alg a) {
  switch (a) {
    case Alg::Diam2UnitCube: return "diam2-unitcube";
    case Alg::Diam2UnitCubeBare: return "diam2-unitcube-bare";
    case Alg::Diam3UnitCube: return "diam3-unitcube";
    case Alg::Diam2Boxes: return "diam2-boxes";
    case Alg::Diam2Rects: return "diam2-rects";
    case Alg::Diam2Cubes3d: return "diam2-cubes3d";
  }
  return "?";
}

std::vector<Alg> all_algs() {
  return {Alg::Diam2UnitCube, Alg::Diam2UnitCubeBare, Alg::Diam3UnitCube,
          Alg::Diam2Boxes,    Alg::Diam2Rects,        Alg::Diam2Cubes3d};
}

Alg parse_alg(const std::string& s) {
  for (auto a : all_algs())
    if (s == alg_name(a)) return a;
  throw std::invalid_argument("unknown algorithm: " + s);
}

namespace {

constexpr double kQuantum = 0x1.0p-20;

bool is_box_alg(Alg a) { return a == Alg::Diam2Boxes || a == Alg::Diam2Rects || a == Alg::Diam2Cubes3d; }
int box_dim(Alg a) { return a == Alg::Diam2Rects ? 2 : 3; }

class Quantized {
 public:
  explicit Quantized(std::uint64_t seed) : rng_(seed) {}
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  // Multiple of 2^-20 in [0, hi).
  double below(double hi) { return std::floor(unit() * hi / kQuantum) * kQuantum; }
  double log_uniform(double lo, double hi) {
    double v = std::exp(std::log(lo) + unit() * (std::log(hi) - std::log(lo)));
    return std::max(kQuantum, std::round(v / kQuantum) * kQuantum);
  }

 private:
  std::mt19937_64 rng_;
};

GeomObject<Rat> cube_obj(double x, double y, double z) {
  return UnitCubeObj<Rat>{PointD<Rat>{Rat(x), Rat(y), Rat(z)}};
}

GeomObject<Rat> box_obj(const std::vector<double>& lo, const std::vector<double>& hi) {
  std::vector<Rat> l, h;
  for (double v : lo) l.emplace_back(v);
  for (double v : hi) h.emplace_back(v);
  return AxisBoxD<Rat>(PointD<Rat>(std::move(l)), PointD<Rat>(std::move(h)));
}

}  // namespace

Instance random_instance(Alg a, int n, std::uint64_t seed, const GenOptions& opt) {
  if (n < 3) throw std::invalid_argument("random_instance needs n >= 3");
  Quantized q(seed);
  Instance inst;
  inst.numeric_mode = NumericMode::Rational;
  if (!is_box_alg(a)) {
    const bool four = a == Alg::Diam3UnitCube;
    const double side = four ? opt.cube_side3 : opt.cube_side;
    inst.kind = ObjKind::UnitCube;
    inst.dim = 3;
    const int k = four ? 4 : 3;
    const char* names[4] = {"P", "Q", "R", "S"};
    for (int g = 0; g < k; ++g) {
      Part part{names[g], {}, {}};
      const int count = n / k + (g < n % k ? 1 : 0);
      for (int i = 0; i < count; ++i) {
        double x = q.below(side), y = q.below(side), z = q.below(side);
        part.objects.push_back(cube_obj(x, y, z));
      }
      inst.parts.push_back(std::move(part));
    }
    return inst;
  }
  const int dim = box_dim(a);
  inst.kind = ObjKind::Box;
  inst.dim = dim;
  const double L = std::cbrt(static_cast<double>(n));
  auto one = [&] {
    std::vector<double> lo(dim), hi(dim);
    const double s = q.log_uniform(0.2, L);
    for (int d = 0; d < dim; ++d) {
      const double side = a == Alg::Diam2Cubes3d ? s : q.log_uniform(0.2, L);
      lo[d] = q.below(L);
      hi[d] = lo[d] + side;
    }
    return box_obj(lo, hi);
  };
  const int np = n / 3, nr = n / 3, nq = n - np - nr;
  inst.parts = {Part{"P", {}, {}}, Part{"Q", {}, {}}, Part{"R", {}, {}}};
  for (int i = 0; i < np; ++i) inst.parts[0].objects.push_back(one());
  for (int i = 0; i < nq - (opt.hub ? 1 : 0); ++i) inst.parts[1].objects.push_back(one());
  if (opt.hub) {
    const double far = std::ceil(3 * L);
    inst.parts[1].objects.push_back(box_obj(std::vector<double>(dim, -1.0), std::vector<double>(dim, far)));
  }
  for (int i = 0; i < nr; ++i) inst.parts[2].objects.push_back(one());
  return inst;
}

namespace {

double to_d(const Rat& v, NumericMode mode) {
  double d = v.get_d();
  if (mode == NumericMode::Rational && Rat(d) != v)
    throw std::invalid_argument("coordinate " + v.get_str() + " is not exactly representable; use --numeric float");
  return d;
}

// Parts in role order; a single part fills every role.
std::vector<const Part*> roles(const Instance& inst, int k) {
  static const char* names[4] = {"P", "Q", "R", "S"};
  std::vector<const Part*> out;
  if (inst.parts.size() == 1) return std::vector<const Part*>(k, &inst.parts[0]);
  for (int i = 0; i < k; ++i) {
    const Part* p = inst.find_part(names[i]);
    if (!p) throw std::invalid_argument(std::string("instance lacks part ") + names[i]);
    out.push_back(p);
  }
  if (static_cast<int>(inst.parts.size()) != k)
    throw std::invalid_argument("instance has " + std::to_string(inst.parts.size()) + " parts, expected " +
                                std::to_string(k) + " or 1");
  return out;
}

std::vector<Pt3> centers(const Part& part, NumericMode mode) {
  std::vector<Pt3> out;
  out.reserve(part.objects.size());
  for (const auto& o : part.objects) {
    const auto& c = std::get<0>(o).center;
    out.push_back({to_d(c[0], mode), to_d(c[1], mode), to_d(c[2], mode)});
  }
  return out;
}

std::vector<Box3> boxes(const Part& part, int dim, bool cubes, NumericMode mode) {
  std::vector<Box3> out;
  out.reserve(part.objects.size());
  for (const auto& o : part.objects) {
    const auto& b = std::get<1>(o);
    if (cubes && !(b.hi[0] - b.lo[0] == b.hi[1] - b.lo[1] && b.hi[0] - b.lo[0] == b.hi[2] - b.lo[2]))
      throw std::invalid_argument("diam2-cubes3d needs boxes with equal sides");
    std::vector<double> lo, hi;
    for (int d = 0; d < dim; ++d) lo.push_back(to_d(b.lo[d], mode)), hi.push_back(to_d(b.hi[d], mode));
    out.push_back(to_box3(AxisBoxD<double>(PointD<double>(lo), PointD<double>(hi))));
  }
  return out;
}

// Converted input, so that timing covers the decider only.
struct Prepared {
  Alg alg{};
  std::vector<Pt3> cp[4];
  std::vector<Box3> bp[3];
};

Prepared prepare(const Instance& inst, Alg a, NumericMode mode) {
  Prepared pr;
  pr.alg = a;
  if (!is_box_alg(a)) {
    if (inst.kind != ObjKind::UnitCube || inst.dim != 3)
      throw std::invalid_argument(std::string(alg_name(a)) + " needs 3D unit cubes");
    const int k = a == Alg::Diam3UnitCube ? 4 : 3;
    auto parts = roles(inst, k);
    for (int i = 0; i < k; ++i) pr.cp[i] = centers(*parts[i], mode);
    return pr;
  }
  if (inst.kind != ObjKind::Box || inst.dim != box_dim(a))
    throw std::invalid_argument(std::string(alg_name(a)) + " needs " + std::to_string(box_dim(a)) + "D boxes");
  auto parts = roles(inst, 3);
  for (int i = 0; i < 3; ++i) pr.bp[i] = boxes(*parts[i], box_dim(a), a == Alg::Diam2Cubes3d, mode);
  return pr;
}

SolveOutcome decide(const Prepared& pr, const SolveOptions& opt) {
  SolveOutcome out;
  std::ostringstream st;
  switch (pr.alg) {
    case Alg::Diam2UnitCube:
    case Alg::Diam2UnitCubeBare: {
      Diam2CubeOptions o;
      o.retire_covered = pr.alg == Alg::Diam2UnitCube;
      auto r = diam2_unit_cubes(pr.cp[0], pr.cp[1], pr.cp[2], o);
      out.result = r.ok;
      out.witness = r.witness;
      st << "separated_calls=" << r.stats.separated_calls << " direct_pairs=" << r.stats.direct_pairs
         << " recursion_nodes=" << r.stats.recursion_nodes << " point_visits=" << r.stats.point_visits;
      break;
    }
    case Alg::Diam3UnitCube: {
      Diam3Options o;
      o.g = opt.g;
      o.seed = opt.seed;
      auto r = diam3_unit_cubes(pr.cp[0], pr.cp[1], pr.cp[2], pr.cp[3], o);
      out.result = r.ok;
      out.witness = r.witness;
      st << "unit_cells=" << r.stats.unit_cells << " grid_cells=" << r.stats.grid_cells
         << " interval_systems=" << r.stats.interval_systems << " scalar_systems=" << r.stats.scalar_systems
         << " cutting_trials=" << r.stats.cutting.trials << " cutting_accepted=" << r.stats.cutting.samples_accepted;
      break;
    }
    default: {
      Diam2BoxOptions o;
      o.g = opt.g;
      auto r = pr.alg == Alg::Diam2Boxes  ? diam2_boxes(pr.bp[0], pr.bp[1], pr.bp[2], o)
               : pr.alg == Alg::Diam2Rects ? diam2_rectangles(pr.bp[0], pr.bp[1], pr.bp[2], o)
                                           : diam2_cubes3d(pr.bp[0], pr.bp[1], pr.bp[2], o);
      out.result = r.ok;
      out.witness = r.witness;
      st << "g=" << r.stats.g << " grid_boxes=" << r.stats.grid_boxes << " empty_hats=" << r.stats.empty_hats
         << " l_total=" << r.stats.l_total << " l_max=" << r.stats.l_max << " stair_cells=" << r.stats.stair_cells
         << " range_queries=" << r.stats.range_queries;
      break;
    }
  }
  out.stats = st.str();
  return out;
}

}  // namespace

SolveOutcome run_solve(const Instance& inst, Alg a, const SolveOptions& opt) {
  return decide(prepare(inst, a, opt.numeric), opt);
}

OracleOutcome run_oracle(const Instance& inst, int delta) {
  OracleOutcome out;
  const bool named = inst.find_part("P") && inst.find_part("Q") && inst.find_part("R");
  const bool tri = named && inst.parts.size() == 3;
  const bool four = named && inst.find_part("S") && inst.parts.size() == 4;
  if (tri || four) {
    std::vector<std::vector<GeomObject<Rat>>> groups;
    for (const char* name : {"P", "Q", "R", "S"})
      if (name[0] != 'S' || four) groups.push_back(inst.find_part(name)->objects);
    auto r = multipartite_common_path_check<Rat>(groups, four ? 3 : 2, 1);
    out.result = r.ok;
    out.mode = four ? "fourpartite" : "tripartite";
    if (!r.violations.empty()) out.witness = r.violations.front();
    return out;
  }
  out.mode = "graph";
  auto g = build_intersection_graph<Rat>(inst.all_objects());
  for (int s = 0; s < g.n && out.result; ++s) {
    auto d = bfs_distances(g, s);
    for (int t = 0; t < g.n; ++t)
      if (d.dist[t] > delta) {
        out.result = false;
        out.witness = std::pair<int, int>{s, t};
        break;
      }
  }
  return out;
}

std::uint64_t bench_seed(std::uint64_t seed, int n, int rep) {
  // splitmix64 over the triple
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(n) * 1000003ULL + rep + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<BenchRecord> run_bench(const std::string& alg, const std::vector<int>& ns, int reps, std::uint64_t seed,
                                   const TimedRun& run) {
  if (reps < 3) throw std::invalid_argument("bench needs reps >= 3");
  if (ns.empty()) throw std::invalid_argument("bench needs at least one n");
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1]) throw std::invalid_argument("bench n list must be strictly increasing");
  std::vector<BenchRecord> out;
  for (int n : ns)
    for (int rep = 0; rep < reps; ++rep) {
      BenchRecord r;
      r.alg = alg;
      r.n = n;
      r.rep = rep;
      r.seed = bench_seed(seed, n, rep);
      auto [t, bit] = run(n, r.seed);
      r.ns = std::max<std::int64_t>(1, t);
      r.result = bit;
      out.push_back(std::move(r));
    }
  return out;
}

std::vector<BenchRecord> run_bench(Alg a, const std::vector<int>& ns, int reps, std::uint64_t seed,
                                   const SolveOptions& opt, const GenOptions& gen) {
  std::vector<std::string> aux;
  auto recs = run_bench(alg_name(a), ns, reps, seed, [&](int n, std::uint64_t s) {
    auto pr = prepare(random_instance(a, n, s, gen), a, opt.numeric);
    SolveOptions o = opt;
    o.seed = s;
    auto t0 = std::chrono::steady_clock::now();
    auto res = decide(pr, o);
    auto t1 = std::chrono::steady_clock::now();
    aux.push_back(res.stats);
    return std::pair<std::int64_t, bool>{std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count(),
                                         res.result};
  });
  for (std::size_t i = 0; i < recs.size(); ++i) recs[i].aux = aux[i];
  return recs;
}

std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream out;
  out << "alg,n,rep,seed,ns,result\n";
  for (const auto& r : records)
    out << r.alg << ',' << r.n << ',' << r.rep << ',' << r.seed << ',' << r.ns << ',' << (r.result ? 1 : 0) << '\n';
  return out.str();
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of an empty list");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

ScalingFit fit_scaling(const std::vector<BenchRecord>& records, int skip) {
  ScalingFit fit;
  fit.skipped = skip;
  for (const auto& r : records)
    if (std::find(fit.ns.begin(), fit.ns.end(), r.n) == fit.ns.end()) fit.ns.push_back(r.n);
  std::sort(fit.ns.begin(), fit.ns.end());
  for (int n : fit.ns) {
    std::vector<double> t;
    for (const auto& r : records)
      if (r.n == n) t.push_back(static_cast<double>(r.ns));
    fit.median_ns.push_back(median(t));
  }
  const int m = static_cast<int>(fit.ns.size()) - skip;
  if (m < 2) throw std::invalid_argument("fit_scaling needs at least two n after skipping");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = skip; i < static_cast<int>(fit.ns.size()); ++i) {
    const double x = std::log(static_cast<double>(fit.ns[i])), y = std::log(fit.median_ns[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y, syy += y * y;
  }
  const double cxx = sxx - sx * sx / m, cxy = sxy - sx * sy / m, cyy = syy - sy * sy / m;
  fit.exponent = cxy / cxx;
  fit.intercept = (sy - fit.exponent * sx) / m;
  fit.r2 = cyy > 0 ? cxy * cxy / (cxx * cyy) : 1.0;
  return fit;
}

}  // namespace gdiam
