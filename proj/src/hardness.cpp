#include "gdiam/hardness.hpp"

#include "gdiam/oracle.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gdiam {

const char* source_kind_name(SourceKind k) {
  switch (k) {
    case SourceKind::Tripartite: return "tripartite";
    case SourceKind::Fourpartite: return "fourpartite";
    case SourceKind::TripartiteSimple: return "tripartite-simple";
    case SourceKind::Hypergraph6: return "hypergraph-3uniform-6partite";
  }
  return "?";
}

SourceKind parse_source_kind(const std::string& s) {
  for (auto k : {SourceKind::Tripartite, SourceKind::Fourpartite, SourceKind::TripartiteSimple, SourceKind::Hypergraph6})
    if (s == source_kind_name(k)) return k;
  throw std::invalid_argument("unknown source graph kind: " + s);
}

namespace {

int expected_parts(SourceKind k) {
  switch (k) {
    case SourceKind::Fourpartite: return 4;
    case SourceKind::Hypergraph6: return 6;
    default: return 3;
  }
}

int expected_arity(SourceKind k) { return k == SourceKind::Hypergraph6 ? 3 : 2; }

}  // namespace

int SourceGraph::vertex_count() const {
  int n = 0;
  for (int s : part_sizes) n += s;
  return n;
}

int SourceGraph::part_of(int v) const {
  for (int i = 0; i < static_cast<int>(part_sizes.size()); ++i) {
    if (v < part_sizes[i]) return i;
    v -= part_sizes[i];
  }
  throw std::out_of_range("vertex id out of range");
}

int SourceGraph::local_index(int v) const {
  for (int s : part_sizes) {
    if (v < s) return v;
    v -= s;
  }
  throw std::out_of_range("vertex id out of range");
}

int SourceGraph::global_id(int part, int idx) const {
  int base = 0;
  for (int i = 0; i < part; ++i) base += part_sizes[i];
  return base + idx;
}

void SourceGraph::validate() const {
  if (static_cast<int>(part_sizes.size()) != expected_parts(kind))
    throw std::invalid_argument(std::string(source_kind_name(kind)) + " needs " + std::to_string(expected_parts(kind)) +
                                " parts");
  for (int s : part_sizes)
    if (s < 0) throw std::invalid_argument("negative part size");
  const int n = vertex_count();
  std::set<std::vector<int>> seen;
  for (const auto& e : edges) {
    if (static_cast<int>(e.size()) != expected_arity(kind)) throw std::invalid_argument("edge of wrong arity");
    std::set<int> parts;
    for (int v : e) {
      if (v < 0 || v >= n) throw std::invalid_argument("edge endpoint out of range");
      parts.insert(part_of(v));
    }
    if (parts.size() != e.size()) throw std::invalid_argument("edge inside one part");
    if (kind == SourceKind::Tripartite && parts.count(0) && parts.count(2))
      throw std::invalid_argument("layered tripartite graph has an A-C edge");
    if (!std::is_sorted(e.begin(), e.end())) throw std::invalid_argument("edge endpoints must be sorted");
    if (!seen.insert(e).second) throw std::invalid_argument("duplicate edge");
  }
}

std::string format_source_graph(const SourceGraph& g) {
  std::ostringstream out;
  out << source_kind_name(g.kind);
  for (int s : g.part_sizes) out << ' ' << s;
  out << '\n';
  for (const auto& e : g.edges) {
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
    out << '\n';
  }
  return out.str();
}

SourceGraph parse_source_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  SourceGraph g;
  bool header = false;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    if (!header) {
      std::string kind;
      if (!(ls >> kind)) continue;
      g.kind = parse_source_kind(kind);
      int s;
      while (ls >> s) g.part_sizes.push_back(s);
      header = true;
      continue;
    }
    std::vector<int> e;
    int v;
    while (ls >> v) e.push_back(v);
    if (e.empty()) continue;
    std::sort(e.begin(), e.end());
    g.edges.push_back(std::move(e));
  }
  if (!header) throw std::invalid_argument("source graph: missing header");
  g.validate();
  return g;
}

SourceGraph load_source_graph(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_source_graph(ss.str());
}

void save_source_graph(const SourceGraph& g, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << format_source_graph(g);
}

namespace {

// Part combinations an edge may span.
std::vector<std::vector<int>> edge_part_sets(SourceKind k) {
  switch (k) {
    case SourceKind::Tripartite: return {{0, 1}, {1, 2}};
    case SourceKind::TripartiteSimple: return {{0, 1}, {0, 2}, {1, 2}};
    case SourceKind::Fourpartite: return {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    case SourceKind::Hypergraph6: {
      std::vector<std::vector<int>> out;
      for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b)
          for (int c = b + 1; c < 6; ++c) out.push_back({a, b, c});
      return out;
    }
  }
  return {};
}

// Every vertex tuple with one vertex from each listed part, as global ids.
template <class Fn>
void for_each_tuple(const SourceGraph& g, const std::vector<int>& parts, Fn fn) {
  std::vector<int> idx(parts.size(), 0), tuple(parts.size());
  for (int p : parts)
    if (g.part_sizes[p] == 0) return;
  while (true) {
    for (std::size_t i = 0; i < parts.size(); ++i) tuple[i] = g.global_id(parts[i], idx[i]);
    fn(tuple);
    std::size_t i = 0;
    while (i < parts.size() && ++idx[i] == g.part_sizes[parts[i]]) idx[i++] = 0;
    if (i == parts.size()) return;
  }
}

}  // namespace

SourceGraph random_source_graph(SourceKind kind, const std::vector<int>& part_sizes, double p, std::uint64_t seed) {
  SourceGraph g;
  g.kind = kind;
  g.part_sizes = part_sizes;
  std::mt19937_64 rng(seed);
  for (const auto& parts : edge_part_sets(kind))
    for_each_tuple(g, parts, [&](const std::vector<int>& t) {
      // Explicit 53-bit uniform so the stream is the same on every standard library.
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < p) g.edges.push_back(t);
    });
  std::sort(g.edges.begin(), g.edges.end());
  g.validate();
  return g;
}

const char* target_name(Target t) {
  switch (t) {
    case Target::Balls3d: return "balls3d";
    case Target::Hypercubes4d: return "hypercubes4d";
    case Target::Cubes3d: return "cubes3d";
    case Target::Rects2d: return "rects2d";
    case Target::Hypercubes10d: return "hypercubes10d";
    case Target::Hypercubes6d: return "hypercubes6d";
    case Target::Hypercubes4dDiam2: return "hypercubes4d_diam2";
    case Target::Balls7d: return "balls7d";
  }
  return "?";
}

Target parse_target(const std::string& s) {
  for (auto t : {Target::Balls3d, Target::Hypercubes4d, Target::Cubes3d, Target::Rects2d, Target::Hypercubes10d,
                 Target::Hypercubes6d, Target::Hypercubes4dDiam2, Target::Balls7d})
    if (s == target_name(t)) return t;
  throw std::invalid_argument("unknown reduction target: " + s);
}

SourceKind source_kind_for(Target t) {
  switch (t) {
    case Target::Hypercubes10d: return SourceKind::Hypergraph6;
    case Target::Hypercubes6d:
    case Target::Balls7d: return SourceKind::Fourpartite;
    case Target::Hypercubes4dDiam2: return SourceKind::TripartiteSimple;
    default: return SourceKind::Tripartite;
  }
}

int target_threshold(Target t) { return source_kind_for(t) == SourceKind::Tripartite ? 3 : 2; }

namespace {

bool is_clique_target(Target t) { return target_threshold(t) == 2; }

// Parts on the s side and the t side of a clique reduction.
std::vector<int> near_parts(Target t) {
  return t == Target::Hypercubes10d ? std::vector<int>{0, 1, 2} : std::vector<int>{0, 1};
}
std::vector<int> far_parts(Target t) {
  switch (t) {
    case Target::Hypercubes10d: return {3, 4, 5};
    case Target::Hypercubes4dDiam2: return {2};
    default: return {2, 3};
  }
}

Rat pow_rat(const Rat& x, int k) {
  Rat r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

int scale_n(const SourceGraph& g) {
  return static_cast<int>(std::bit_ceil(static_cast<unsigned>(std::max(g.vertex_count(), 16))));
}

// Dyadic step 1 / (16 * 2^ceil(log2 k)): k values fit in [0, 1/16).
Rat dyadic_step(int k) { return Rat(1, 16 * static_cast<long>(std::bit_ceil(static_cast<unsigned>(std::max(k, 1))))); }

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument("reduction parameters: " + what);
}

void check_range(const std::vector<Rat>& v, const Rat& lo, const Rat& hi, bool lo_open, bool hi_open,
                 const std::string& what) {
  for (const auto& x : v) {
    require(lo_open ? x > lo : x >= lo, what + " below range");
    require(hi_open ? x < hi : x <= hi, what + " above range");
  }
}

void check_gaps(std::vector<Rat> v, const Rat& gap, const std::string& what) {
  std::sort(v.begin(), v.end());
  for (std::size_t i = 1; i < v.size(); ++i) require(v[i] - v[i - 1] >= gap, what + " values closer than the gap bound");
}

void check_circle(const ReductionParams& p, int part, const std::string& what) {
  require(p.circle_w.size() > static_cast<std::size_t>(part) && p.circle_w[part].size() >= p.values[part].size(),
          what + " circle coordinates missing");
  for (std::size_t i = 0; i < p.values[part].size(); ++i) {
    const Rat& v = p.values[part][i];
    const Rat& w = p.circle_w[part][i];
    require(w >= 0 && v * v + w * w == 1, what + " not on the unit circle");
  }
}

}  // namespace

SourceGraph padded_source(const SourceGraph& g, Target t, bool pad) {
  if (!pad || !is_clique_target(t)) return g;
  SourceGraph out = g;
  for (int f : far_parts(t)) out.part_sizes[f] += 1;
  // Renumber: each part's vertices keep their local index.
  for (auto& e : out.edges)
    for (int& v : e) v = out.global_id(g.part_of(v), g.local_index(v));
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

ReductionParams default_params(const SourceGraph& g0, Target t) {
  const SourceGraph g = padded_source(g0, t, true);
  const int np = scale_n(g);
  ReductionParams p;
  p.values.assign(g.part_sizes.size(), {});
  p.circle_w.assign(g.part_sizes.size(), {});
  auto sizes = g.part_sizes;
  switch (t) {
    case Target::Balls3d: {
      p.epsilon = Rat(1, 16) / pow_rat(Rat(np), 4);
      auto [s, c] = rational_circle_point(Rat(1, 32) / pow_rat(Rat(np), 3));
      p.sin_delta = s;
      p.cos_delta = c;
      // A and C share one progression in [eps, 2 eps].
      const int ac = sizes[0] + sizes[2];
      for (int i = 0; i < sizes[0]; ++i) p.values[0].push_back(p.epsilon + p.epsilon * Rat(i, ac));
      for (int i = 0; i < sizes[2]; ++i) p.values[2].push_back(p.epsilon + p.epsilon * Rat(sizes[0] + i, ac));
      // B on the circle: t in [2/3, 11/12] gives b in [12/13, 264/265].
      for (int i = 0; i < sizes[1]; ++i) {
        auto [b, w] = rational_circle_point(Rat(2, 3) + Rat(i, 4 * sizes[1]));
        p.values[1].push_back(b);
        p.circle_w[1].push_back(w);
      }
      break;
    }
    case Target::Hypercubes4d: {
      const int n = g.vertex_count();
      const Rat step = dyadic_step(n);
      int k = 0;
      for (int part = 0; part < 3; ++part)
        for (int i = 0; i < sizes[part]; ++i) p.values[part].push_back(step * (k++));
      break;
    }
    case Target::Cubes3d:
    case Target::Rects2d: {
      p.epsilon = Rat(1, 16) / pow_rat(Rat(np), 4);
      for (int part = 0; part < 3; ++part) {
        const Rat step = p.epsilon * dyadic_step(sizes[part]) * 16;
        for (int i = 0; i < sizes[part]; ++i) {
          Rat v = step * (i + 1);
          if (t == Target::Cubes3d && part == 1) v = 1 - v;
          p.values[part].push_back(v);
        }
      }
      break;
    }
    case Target::Hypercubes10d:
    case Target::Hypercubes6d:
    case Target::Hypercubes4dDiam2: {
      for (const auto& side : {near_parts(t), far_parts(t)}) {
        int total = 0;
        for (int part : side) total += sizes[part];
        const Rat step = dyadic_step(total);
        const Rat base = side.front() == 0 ? Rat(5, 16) : Rat(0);
        int k = 0;
        for (int part : side)
          for (int i = 0; i < sizes[part]; ++i) p.values[part].push_back(base + step * (k++));
      }
      break;
    }
    case Target::Balls7d: {
      p.epsilon = Rat(1, 16) / pow_rat(Rat(np), 3);
      for (int part = 0; part < 3; ++part)
        for (int i = 0; i < sizes[part]; ++i) {
          auto [a, w] = rational_circle_point(Rat(i + 1, 20 * sizes[part]));
          p.values[part].push_back(a);
          p.circle_w[part].push_back(w);
        }
      for (int i = 0; i < sizes[3]; ++i) p.values[3].push_back(1 - p.epsilon * Rat(i, sizes[3]));
      break;
    }
  }
  return p;
}

void check_params(const SourceGraph& g0, Target t, const ReductionParams& p) {
  const SourceGraph g = padded_source(g0, t, p.pad_isolated);
  require(p.values.size() >= g.part_sizes.size(), "missing parts");
  for (std::size_t i = 0; i < g.part_sizes.size(); ++i)
    require(p.values[i].size() >= static_cast<std::size_t>(g.part_sizes[i]), "too few values for a part");
  auto vals = [&](int part) {
    return std::vector<Rat>(p.values[part].begin(), p.values[part].begin() + g.part_sizes[part]);
  };
  const Rat np = scale_n(g);
  switch (t) {
    case Target::Balls3d: {
      require(p.epsilon > 0, "epsilon must be positive");
      require(p.sin_delta > 0 && p.cos_delta > 0 && p.sin_delta * p.sin_delta + p.cos_delta * p.cos_delta == 1,
              "(cos delta, sin delta) must be a first-quadrant unit vector");
      // The angle is at most 1/(16 n'^3) once sin delta is.
      require(p.sin_delta <= Rat(1, 16) / pow_rat(np, 3), "delta too large");
      for (int part : {0, 2}) {
        check_range(vals(part), p.epsilon, 2 * p.epsilon, false, false, "A/C");
        check_gaps(vals(part), p.epsilon / np, "A/C");
      }
      check_range(vals(1), Rat(9, 10), Rat(1), false, false, "B");
      check_gaps(vals(1), Rat(1, 64) / np, "B");
      check_circle(p, 1, "B");
      break;
    }
    case Target::Hypercubes4d:
      for (int part = 0; part < 3; ++part) {
        check_range(vals(part), 0, Rat(1, 10), false, false, "vertex");
        auto v = vals(part);
        std::sort(v.begin(), v.end());
        require(std::adjacent_find(v.begin(), v.end()) == v.end(), "repeated vertex value");
      }
      break;
    case Target::Cubes3d:
    case Target::Rects2d:
      require(p.epsilon > 0 && p.epsilon <= Rat(1, 4), "epsilon must lie in (0, 1/4]");
      for (int part = 0; part < 3; ++part) {
        auto v = vals(part);
        if (t == Target::Cubes3d && part == 1) check_range(v, 1 - p.epsilon, 1, false, true, "B");
        else check_range(v, 0, p.epsilon, true, false, "vertex");
        std::sort(v.begin(), v.end());
        require(std::adjacent_find(v.begin(), v.end()) == v.end(), "repeated vertex value");
      }
      break;
    case Target::Hypercubes10d:
    case Target::Hypercubes6d:
    case Target::Hypercubes4dDiam2:
      for (const auto& side : {near_parts(t), far_parts(t)}) {
        const bool near = side.front() == 0;
        for (int part : side) {
          auto v = vals(part);
          check_range(v, near ? Rat(3, 10) : Rat(0), near ? Rat(4, 10) : Rat(1, 10), false, false, "vertex");
          std::sort(v.begin(), v.end());
          require(std::adjacent_find(v.begin(), v.end()) == v.end(), "repeated vertex value");
        }
      }
      break;
    case Target::Balls7d:
      require(p.epsilon > 0 && p.epsilon <= Rat(1, 16) / pow_rat(np, 3), "epsilon too large");
      for (int part = 0; part < 3; ++part) {
        check_range(vals(part), 0, Rat(1, 10), false, false, "A/B/C");
        check_gaps(vals(part), Rat(1, 64) / np, "A/B/C");
        check_circle(p, part, "A/B/C");
      }
      check_range(vals(3), 1 - p.epsilon, 1, false, false, "D");
      check_gaps(vals(3), p.epsilon / np, "D");
      break;
  }
}

namespace {

using RPoint = PointD<Rat>;

SourceLabel make_label(const std::string& type, const SourceGraph& g, const std::vector<int>& verts) {
  SourceLabel l{type, {}};
  for (int v : verts) {
    l.ids.push_back(g.part_of(v));
    l.ids.push_back(g.local_index(v));
  }
  return l;
}

GeomObject<Rat> cube_at(std::vector<Rat> c) { return UnitCubeObj<Rat>{RPoint(std::move(c))}; }
GeomObject<Rat> box_of(std::vector<Rat> lo, std::vector<Rat> hi) {
  return AxisBoxD<Rat>(RPoint(std::move(lo)), RPoint(std::move(hi)));
}
GeomObject<Rat> ball_at(std::vector<Rat> c, const Rat& r2) { return BallD<Rat>::from_radius_sq(RPoint(std::move(c)), r2); }

void add(Part& part, GeomObject<Rat> obj, SourceLabel label) {
  part.objects.push_back(std::move(obj));
  part.labels.push_back(std::move(label));
}

}  // namespace

Instance reduce_tripartite(const SourceGraph& g, Target t, const ReductionParams& p) {
  if (g.kind != SourceKind::Tripartite || source_kind_for(t) != SourceKind::Tripartite)
    throw std::invalid_argument("reduce_tripartite needs a layered tripartite graph and a tripartite target");
  g.validate();
  if (!p.unchecked) check_params(g, t, p);
  Instance inst;
  inst.numeric_mode = NumericMode::Rational;
  switch (t) {
    case Target::Balls3d: inst.kind = ObjKind::Ball, inst.dim = 3; break;
    case Target::Hypercubes4d: inst.kind = ObjKind::UnitCube, inst.dim = 4; break;
    case Target::Cubes3d: inst.kind = ObjKind::Box, inst.dim = 3; break;
    default: inst.kind = ObjKind::Box, inst.dim = 2; break;
  }
  inst.parts = {Part{"B1", {}, {}}, Part{"B2", {}, {}}, Part{"B3", {}, {}}, Part{"B4", {}, {}}};
  Part &B1 = inst.parts[0], &B2 = inst.parts[1], &B3 = inst.parts[2], &B4 = inst.parts[3];
  auto val = [&](int v) -> const Rat& { return p.values[g.part_of(v)][g.local_index(v)]; };
  auto wval = [&](int v) -> const Rat& { return p.circle_w[g.part_of(v)][g.local_index(v)]; };
  const Rat half(1, 2), r2(1, 4);
  const Rat& cs = p.cos_delta;
  const Rat& sn = p.sin_delta;

  for (int i = 0; i < g.part_sizes[0]; ++i) {
    int v = g.global_id(0, i);
    const Rat& a = val(v);
    GeomObject<Rat> o;
    switch (t) {
      case Target::Balls3d: o = ball_at({1 + a * cs, a * sn, Rat(0)}, r2); break;
      case Target::Hypercubes4d: o = cube_at({a, -a, Rat(0), Rat(0)}); break;
      case Target::Cubes3d: o = box_of({a, a - 1, Rat(1)}, {a + 1, a, Rat(2)}); break;
      default: o = box_of({a - 1, 2 + a}, {a, 3 + a}); break;
    }
    add(B1, std::move(o), make_label("s", g, {v}));
  }
  for (const auto& e : g.edges) {
    const int x = e[0], y = e[1];
    if (g.part_of(x) == 0) {  // (a, b)
      const Rat &a = val(x), &b = val(y);
      GeomObject<Rat> o;
      switch (t) {
        case Target::Balls3d: o = ball_at({1 + a * cs - b * sn, a * sn + b * cs, wval(y)}, r2); break;
        case Target::Hypercubes4d: o = cube_at({1 + a, 1 - a, half + b, half - b}); break;
        case Target::Cubes3d: o = box_of({2 * a - b, a, b}, {a, b, 2 * b - a}); break;
        default: o = box_of({a, 1 + b}, {1 + b, 2 + a}); break;
      }
      add(B2, std::move(o), make_label("p", g, {x, y}));
    } else {  // (b, c)
      const Rat &b = val(x), &c = val(y);
      GeomObject<Rat> o;
      switch (t) {
        case Target::Balls3d: o = ball_at({-c, b, wval(x)}, r2); break;
        case Target::Hypercubes4d: o = cube_at({1 + c, 1 - c, 3 * half + b, 3 * half - b}); break;
        case Target::Cubes3d: o = box_of({2 * c - b, b, c}, {c, 2 * b - c, b}); break;
        default: o = box_of({1 + b, c}, {2 + c, 1 + b}); break;
      }
      add(B3, std::move(o), make_label("q", g, {x, y}));
    }
  }
  for (int i = 0; i < g.part_sizes[2]; ++i) {
    int v = g.global_id(2, i);
    const Rat& c = val(v);
    GeomObject<Rat> o;
    switch (t) {
      case Target::Balls3d: o = ball_at({-c, Rat(0), Rat(0)}, r2); break;
      case Target::Hypercubes4d: o = cube_at({c, -c, Rat(2), Rat(2)}); break;
      case Target::Cubes3d: o = box_of({c, Rat(1), c - 1}, {c + 1, Rat(2), c}); break;
      default: o = box_of({2 + c, c - 1}, {3 + c, c}); break;
    }
    add(B4, std::move(o), make_label("t", g, {v}));
  }
  return inst;
}

Instance reduce_tripartite(const SourceGraph& g, Target t) { return reduce_tripartite(g, t, default_params(g, t)); }

namespace {

// Unit hypercubes for the clique targets. Slots are coordinate pairs; near
// part i owns slot i, the first far part borrows a free near slot, and each
// further far part owns one extra slot.
Instance clique_cubes(const SourceGraph& g, Target t, const ReductionParams& p) {
  const auto near = near_parts(t);
  const auto far = far_parts(t);
  const int nslots = static_cast<int>(near.size() + far.size()) - 1;
  const int arity = g.kind == SourceKind::Hypergraph6 ? 3 : 2;
  const Rat one(1), half(1, 2);
  auto val = [&](int v) -> const Rat& { return p.values[g.part_of(v)][g.local_index(v)]; };
  auto is_near = [&](int part) { return std::find(near.begin(), near.end(), part) != near.end(); };
  auto own_slot = [&](int part) {
    if (is_near(part)) return static_cast<int>(std::find(near.begin(), near.end(), part) - near.begin());
    int j = static_cast<int>(std::find(far.begin(), far.end(), part) - far.begin());
    return j == 0 ? -1 : static_cast<int>(near.size()) + j - 1;
  };

  Instance inst;
  inst.kind = ObjKind::UnitCube;
  inst.dim = 2 * nslots;
  inst.numeric_mode = NumericMode::Rational;
  inst.parts = {Part{"S", {}, {}}, Part{"T", {}, {}}, Part{"P", {}, {}}, Part{"Z", {}, {}}};
  Part &S = inst.parts[0], &T = inst.parts[1], &P = inst.parts[2], &Z = inst.parts[3];
  std::set<std::vector<int>> edge_set(g.edges.begin(), g.edges.end());

  auto center = [&](const std::vector<int>& verts, char role) {
    std::vector<Rat> c(2 * nslots, half);
    auto put = [&](int slot, const Rat& x, const Rat& y) {
      c[2 * slot] = x;
      c[2 * slot + 1] = y;
    };
    std::vector<bool> used(nslots, false);
    for (int v : verts) {
      int part = g.part_of(v);
      int s = own_slot(part);
      if (s >= 0 && is_near(part)) used[s] = true;
    }
    for (int v : verts) {
      int part = g.part_of(v);
      const Rat& x = val(v);
      int s = own_slot(part);
      if (role == 's') {
        put(s, x, one + x);
      } else if (role == 't') {
        if (s < 0) {
          for (std::size_t k = 0; k < near.size(); ++k) put(static_cast<int>(k), one + x, x);
        } else {
          put(s, one + x, x);
        }
      } else if (is_near(part)) {
        put(s, one + x, x);
      } else if (s >= 0) {
        put(s, x, one + x);
      } else {
        int k = static_cast<int>(near.size()) - 1;
        while (used[k]) --k;
        put(k, x, one + x);
      }
    }
    return c;
  };

  for_each_tuple(g, near, [&](const std::vector<int>& tu) {
    if (edge_set.count(tu)) add(S, cube_at(center(tu, 's')), make_label("s", g, tu));
  });
  for_each_tuple(g, far, [&](const std::vector<int>& tu) {
    if (far.size() == 1 || edge_set.count(tu)) add(T, cube_at(center(tu, 't')), make_label("t", g, tu));
  });
  for (const auto& parts : edge_part_sets(g.kind)) {
    if (static_cast<int>(parts.size()) != arity) continue;
    int nn = 0;
    for (int x : parts) nn += is_near(x);
    if (nn == 0 || nn == arity) continue;
    for_each_tuple(g, parts, [&](const std::vector<int>& tu) {
      if (!edge_set.count(tu)) add(P, cube_at(center(tu, 'p')), make_label("p", g, tu));
    });
  }
  std::vector<Rat> z(2 * nslots);
  for (int s = 0; s < nslots; ++s) z[2 * s] = Rat(4, 5), z[2 * s + 1] = Rat(1, 5);
  add(Z, cube_at(std::move(z)), SourceLabel{"z", {}});
  return inst;
}

// Balls of squared radius 1/2: they meet iff the centers are within sqrt(2).
Instance clique_balls7d(const SourceGraph& g, const ReductionParams& p) {
  Instance inst;
  inst.kind = ObjKind::Ball;
  inst.dim = 7;
  inst.numeric_mode = NumericMode::Rational;
  inst.parts = {Part{"S", {}, {}}, Part{"T", {}, {}}, Part{"P", {}, {}}, Part{"Z", {}, {}}};
  Part &S = inst.parts[0], &T = inst.parts[1], &P = inst.parts[2], &Z = inst.parts[3];
  const Rat r2(1, 2);
  std::set<std::vector<int>> edge_set(g.edges.begin(), g.edges.end());
  auto center = [&](const std::vector<int>& verts) {
    std::vector<Rat> c(7, Rat(0));
    for (int v : verts) {
      int part = g.part_of(v), i = g.local_index(v);
      if (part < 3) {
        c[2 * part] = p.values[part][i];
        c[2 * part + 1] = p.circle_w[part][i];
      } else {
        c[6] = p.values[3][i];
      }
    }
    return c;
  };
  for_each_tuple(g, {0, 1}, [&](const std::vector<int>& tu) {
    if (edge_set.count(tu)) add(S, ball_at(center(tu), r2), make_label("s", g, tu));
  });
  for_each_tuple(g, {2, 3}, [&](const std::vector<int>& tu) {
    if (edge_set.count(tu)) add(T, ball_at(center(tu), r2), make_label("t", g, tu));
  });
  for (std::vector<int> parts : {std::vector<int>{0, 2}, {0, 3}, {1, 2}, {1, 3}})
    for_each_tuple(g, parts, [&](const std::vector<int>& tu) {
      if (!edge_set.count(tu)) add(P, ball_at(center(tu), r2), make_label("p", g, tu));
    });
  add(Z, ball_at({Rat(0), Rat(0), Rat(0), Rat(0), Rat(1, 2), Rat(1, 2), Rat(1, 2)}, r2), SourceLabel{"z", {}});
  return inst;
}

}  // namespace

Instance reduce_clique_variants(const SourceGraph& g0, Target t, const ReductionParams& p) {
  if (!is_clique_target(t) || t == Target::Hypercubes10d)
    throw std::invalid_argument("reduce_clique_variants: target must be hypercubes6d, hypercubes4d_diam2 or balls7d");
  if (g0.kind != source_kind_for(t))
    throw std::invalid_argument(std::string("reduce_clique_variants: ") + target_name(t) + " needs a " +
                                source_kind_name(source_kind_for(t)) + " graph");
  g0.validate();
  if (!p.unchecked) check_params(g0, t, p);
  const SourceGraph g = padded_source(g0, t, p.pad_isolated);
  return t == Target::Balls7d ? clique_balls7d(g, p) : clique_cubes(g, t, p);
}

Instance reduce_clique_variants(const SourceGraph& g, Target t) {
  return reduce_clique_variants(g, t, default_params(g, t));
}

Instance reduce_hyperclique_10d(const SourceGraph& h0, const ReductionParams& p) {
  if (h0.kind != SourceKind::Hypergraph6) throw std::invalid_argument("reduce_hyperclique_10d needs a 6-partite hypergraph");
  h0.validate();
  if (!p.unchecked) check_params(h0, Target::Hypercubes10d, p);
  return clique_cubes(padded_source(h0, Target::Hypercubes10d, p.pad_isolated), Target::Hypercubes10d, p);
}

Instance reduce_hyperclique_10d(const SourceGraph& h) {
  return reduce_hyperclique_10d(h, default_params(h, Target::Hypercubes10d));
}

Instance reduce(const SourceGraph& g, Target t, const ReductionParams& p) {
  if (t == Target::Hypercubes10d) return reduce_hyperclique_10d(g, p);
  if (is_clique_target(t)) return reduce_clique_variants(g, t, p);
  return reduce_tripartite(g, t, p);
}

Instance reduce(const SourceGraph& g, Target t) { return reduce(g, t, default_params(g, t)); }

const char* observation_name(Observation o) {
  switch (o) {
    case Observation::Ball3D: return "obs_ball3D";
    case Observation::Cube4D: return "obs_4Dcube";
    case Observation::Cube10D: return "obs_10Dcube";
    case Observation::Cube6D: return "obs_6Dcube";
  }
  return "?";
}

Observation parse_observation(const std::string& s) {
  for (auto o : {Observation::Ball3D, Observation::Cube4D, Observation::Cube10D, Observation::Cube6D})
    if (s == observation_name(o)) return o;
  throw std::invalid_argument("unknown observation suite: " + s);
}

namespace {

// Labels agree on every part they share.
bool labels_agree(const SourceLabel& x, const SourceLabel& y) {
  for (std::size_t i = 0; i + 1 < x.ids.size(); i += 2)
    for (std::size_t j = 0; j + 1 < y.ids.size(); j += 2)
      if (x.ids[i] == y.ids[j] && x.ids[i + 1] != y.ids[j + 1]) return false;
  return true;
}

std::string label_str(const SourceLabel& l) {
  std::string s = l.type + "(";
  for (std::size_t i = 0; i + 1 < l.ids.size(); i += 2)
    s += (i ? "," : "") + std::to_string(l.ids[i]) + ":" + std::to_string(l.ids[i + 1]);
  return s + ")";
}

const Part& need_part(const Instance& inst, const std::string& name) {
  const Part* p = inst.find_part(name);
  if (!p) throw std::invalid_argument("instance has no group " + name);
  if (p->labels.size() != p->objects.size()) throw std::invalid_argument("group " + name + " lacks source labels");
  return *p;
}

enum class Claim { IffAgree, All, None };

// Checks a claim over X x Y (pairs i < j when X is Y). Returns false and
// fills the report on the first counterexample.
bool check_pairs(const Part& X, const Part& Y, Claim claim, int item, ObservationReport& rep) {
  const bool same = &X == &Y;
  for (std::size_t i = 0; i < X.objects.size(); ++i)
    for (std::size_t j = same ? i + 1 : 0; j < Y.objects.size(); ++j) {
      ++rep.checks;
      bool meet = objects_intersect(X.objects[i], Y.objects[j]);
      bool want = claim == Claim::All || (claim == Claim::IffAgree && labels_agree(X.labels[i], Y.labels[j]));
      if (meet != want) {
        rep.ok = false;
        rep.item = item;
        rep.message = "item " + std::to_string(item) + ": " + X.name + " " + label_str(X.labels[i]) + " and " + Y.name +
                      " " + label_str(Y.labels[j]) + (meet ? " intersect" : " are disjoint");
        return false;
      }
    }
  return true;
}

}  // namespace

ObservationReport verify_observations(const Instance& inst, Observation which) {
  ObservationReport rep;
  if (which == Observation::Ball3D || which == Observation::Cube4D) {
    const Part* B[4] = {&need_part(inst, "B1"), &need_part(inst, "B2"), &need_part(inst, "B3"), &need_part(inst, "B4")};
    for (int i = 0; i < 3; ++i)
      if (!check_pairs(*B[i], *B[i + 1], Claim::IffAgree, i + 1, rep)) return rep;
    for (int i = 0; i < 4; ++i)
      if (!check_pairs(*B[i], *B[i], Claim::All, 4, rep)) return rep;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 2; j < 4; ++j)
        if (!check_pairs(*B[i], *B[j], Claim::None, 5, rep)) return rep;
    return rep;
  }
  const Part& S = need_part(inst, "S");
  const Part& T = need_part(inst, "T");
  const Part& P = need_part(inst, "P");
  const Part& Z = need_part(inst, "Z");
  if (!check_pairs(S, P, Claim::IffAgree, 1, rep)) return rep;
  if (!check_pairs(T, P, Claim::IffAgree, 2, rep)) return rep;
  if (!check_pairs(P, Z, Claim::All, 3, rep)) return rep;
  if (!check_pairs(S, T, Claim::None, 4, rep)) return rep;
  check_pairs(S, Z, Claim::None, 4, rep);
  return rep;
}

bool every_ac_pair_within_two(const SourceGraph& g) {
  if (g.kind != SourceKind::Tripartite) throw std::invalid_argument("every_ac_pair_within_two needs a tripartite graph");
  std::vector<std::pair<int, int>> e;
  for (const auto& x : g.edges) e.emplace_back(x[0], x[1]);
  auto G = graph_from_edges(g.vertex_count(), e);
  for (int i = 0; i < g.part_sizes[0]; ++i) {
    auto d = bfs_distances(G, g.global_id(0, i));
    for (int j = 0; j < g.part_sizes[2]; ++j)
      if (d.dist[g.global_id(2, j)] > 2) return false;
  }
  return true;
}

namespace {

// Brute force: some tuple with one vertex per part has every sub-edge present.
bool has_full_tuple(const SourceGraph& g, int arity) {
  std::set<std::vector<int>> edge_set(g.edges.begin(), g.edges.end());
  std::vector<int> parts(g.part_sizes.size());
  for (std::size_t i = 0; i < parts.size(); ++i) parts[i] = static_cast<int>(i);
  const auto subsets = edge_part_sets(g.kind);
  bool found = false;
  for_each_tuple(g, parts, [&](const std::vector<int>& tu) {
    if (found) return;
    for (const auto& s : subsets) {
      if (static_cast<int>(s.size()) != arity) continue;
      std::vector<int> e;
      for (int x : s) e.push_back(tu[x]);
      if (!edge_set.count(e)) return;
    }
    found = true;
  });
  return found;
}

}  // namespace

bool has_triangle(const SourceGraph& g) {
  if (g.kind != SourceKind::TripartiteSimple) throw std::invalid_argument("has_triangle needs a tripartite-simple graph");
  return has_full_tuple(g, 2);
}

bool has_four_clique(const SourceGraph& g) {
  if (g.kind != SourceKind::Fourpartite) throw std::invalid_argument("has_four_clique needs a 4-partite graph");
  return has_full_tuple(g, 2);
}

bool has_six_hyperclique(const SourceGraph& h) {
  if (h.kind != SourceKind::Hypergraph6) throw std::invalid_argument("has_six_hyperclique needs a 6-partite hypergraph");
  return has_full_tuple(h, 3);
}

bool source_predicate(const SourceGraph& g, Target t) {
  switch (t) {
    case Target::Hypercubes10d: return !has_six_hyperclique(g);
    case Target::Hypercubes6d:
    case Target::Balls7d: return !has_four_clique(g);
    case Target::Hypercubes4dDiam2: return !has_triangle(g);
    default: return every_ac_pair_within_two(g);
  }
}

bool instance_diameter_at_most(const Instance& inst, int threshold) {
  return diameter_at_most(build_intersection_graph(inst.all_objects()), threshold);
}

EquivalenceCheck check_equivalence(const SourceGraph& g, Target t, const ReductionParams& p) {
  EquivalenceCheck r;
  r.source = source_predicate(g, t);
  r.geometric = instance_diameter_at_most(reduce(g, t, p), target_threshold(t));
  return r;
}

EquivalenceCheck check_equivalence(const SourceGraph& g, Target t) { return check_equivalence(g, t, default_params(g, t)); }

}  // namespace gdiam
