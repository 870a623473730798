#include <doctest.h>

#include "gdiam/diam2_unitcube.hpp"
#include "gdiam/oracle.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace gdiam;
using namespace testutil;

namespace {

GeneralizedDominance random_rel(std::mt19937_64& rng) {
  return GeneralizedDominance{Rel(uniform_int(rng, 0, 2)), Rel(uniform_int(rng, 0, 2)), Rel(uniform_int(rng, 0, 2))};
}

bool holds(const Pt3& a, const Pt3& b, const GeneralizedDominance& g) {
  for (int i = 0; i < 3; ++i)
    if (!rel_holds(g[i], a[i], b[i])) return false;
  return true;
}

bool cubes_meet(const Pt3& a, const Pt3& b) {
  return std::abs(a[0] - b[0]) <= 1 && std::abs(a[1] - b[1]) <= 1 && std::abs(a[2] - b[2]) <= 1;
}

}  // namespace

TEST_CASE("range max index matches a linear scan") {
  std::mt19937_64 rng(21);
  for (int grid : {0, 4}) {
    auto pts = cloud(rng, 300, {0, 0, 0}, {1, 1, 1}, grid);
    std::vector<std::vector<double>> ch(2, std::vector<double>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) ch[0][i] = coord(rng, -5, 5), ch[1][i] = pts[i][2];
    RangeMaxIndex idx(pts, ch);
    for (int t = 0; t < 500; ++t) {
      QueryBox b;
      for (int a = 0; a < 3; ++a) {
        double x = coord(rng, -0.1, 1.1, grid), y = coord(rng, -0.1, 1.1, grid);
        b.lo[a] = std::min(x, y), b.hi[a] = std::max(x, y);
      }
      for (int c = 0; c < 2; ++c) {
        double mx = -kInf, mn = kInf;
        for (std::size_t i = 0; i < pts.size(); ++i)
          if (b.contains(pts[i])) mx = std::max(mx, ch[c][i]), mn = std::min(mn, ch[c][i]);
        CHECK(idx.max_weight(b, c) == mx);
        CHECK(idx.min_weight(b, c) == mn);
        CHECK(idx.any_in(b) == (mx > -kInf));
      }
    }
  }
  RangeMaxIndex empty({}, {{}});
  CHECK(empty.max_weight(QueryBox{}, 0) == -kInf);
  CHECK(empty.min_weight(QueryBox{}, 0) == kInf);
}

TEST_CASE("separated-pair map: degenerate relation gives constant maps") {
  std::vector<Pt3> P{{0.1, 0.1, 0.5}}, R{{0.9, 0.9, 0.5}}, Q{{0.7, 0.7, 0.5}};
  auto idx = RangeMaxIndex::coordinate_weighted(Q);
  auto m = map_separated_pair(P, R, idx, GeneralizedDominance{Rel::GT, Rel::ANY, Rel::ANY},
                              GeneralizedDominance{Rel::ANY, Rel::ANY, Rel::ANY}, 0.5, 0.5);
  CHECK(m.phi[0] == 1.0);
  CHECK(m.psi[0] == 0.0);
  CHECK_THROWS(map_separated_pair(R, P, idx, GeneralizedDominance{}, GeneralizedDominance{}, 0.5, 0.5));
}

TEST_CASE("separated-pair map: no witness in the quadrant") {
  std::vector<Pt3> P{{0.1, 0.1, 0.5}}, R{{0.9, 0.9, 0.5}}, Q{{0.2, 0.7, 0.5}};
  auto idx = RangeMaxIndex::coordinate_weighted(Q);
  GeneralizedDominance lt{Rel::LT, Rel::LT, Rel::LT};
  auto m = map_separated_pair(P, R, idx, lt, lt, 0.5, 0.5);
  CHECK(m.psi[0] == -kInf);
  CHECK_FALSE(m.phi[0] < m.psi[0]);
}

TEST_CASE("separated-pair map agrees with a witness scan") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 500; ++t) {
    int grid = t % 2 ? 8 : 0;
    double mx = coord(rng, 0.3, 0.7), my = coord(rng, 0.3, 0.7);
    auto P = cloud(rng, uniform_int(rng, 1, 12), {0, 0, 0}, {mx, my, 1}, grid);
    for (auto& p : P) p[0] = std::min(p[0], std::nextafter(mx, 0.0)), p[1] = std::min(p[1], std::nextafter(my, 0.0));
    auto Q = cloud(rng, uniform_int(rng, 0, 15), {0, 0, 0}, {1, 1, 1}, grid);
    auto R = cloud(rng, uniform_int(rng, 1, 12), {0, 0, 0}, {1, 1, 1}, grid);
    auto r1 = random_rel(rng), r2 = random_rel(rng);
    auto m = map_separated_pair(P, R, RangeMaxIndex::coordinate_weighted(Q), r1, r2, mx, my);
    for (std::size_t i = 0; i < P.size(); ++i)
      for (std::size_t j = 0; j < R.size(); ++j) {
        bool expect = false;
        for (const auto& q : Q)
          expect = expect || (q[0] > mx && q[1] > my && holds(P[i], q, r1) && holds(q, R[j], r2));
        CHECK((m.phi[i] < m.psi[j]) == expect);
      }
  }
}

TEST_CASE("six-octant map: empty Q connects nothing") {
  std::vector<Pt3> P{{0.1, 0.1, 0.1}}, R{{0.9, 0.9, 0.9}};
  auto m = map_octant_six(P, R, RangeMaxIndex::coordinate_weighted({}), GeneralizedDominance{}, GeneralizedDominance{},
                          {0.5, 0.5, 0.5});
  CHECK_FALSE(m.connected(0, 0));
  CHECK_THROWS(map_octant_six(R, P, RangeMaxIndex::coordinate_weighted({}), GeneralizedDominance{},
                              GeneralizedDominance{}, {0.5, 0.5, 0.5}));
}

TEST_CASE("six-octant map: a single witness in the first case") {
  std::vector<Pt3> P{{0.1, 0.1, 0.1}}, R{{0.9, 0.9, 0.9}}, Q{{0.7, 0.7, 0.3}};
  GeneralizedDominance lt{Rel::LT, Rel::LT, Rel::LT};
  auto m = map_octant_six(P, R, RangeMaxIndex::coordinate_weighted(Q), lt, lt, {0.5, 0.5, 0.5});
  int hits = 0;
  for (int j = 0; j < 6; ++j) hits += m.phi[j] < m.psi[j];
  CHECK(hits == 1);
  CHECK(m.phi[0] < m.psi[0]);
}

TEST_CASE("six-octant map agrees with a witness scan") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 500; ++t) {
    int grid = t % 2 ? 8 : 0;
    Pt3 mu{0.5, 0.5, 0.5};
    auto P = cloud(rng, uniform_int(rng, 1, 10), {0, 0, 0}, {0.49, 0.49, 0.49}, grid);
    auto R = cloud(rng, uniform_int(rng, 1, 10), {0.51, 0.51, 0.51}, {1, 1, 1}, grid);
    if (grid) {
      for (auto& r : R)
        for (auto& c : r) c = std::max(c, 0.625);
    }
    auto Q = cloud(rng, uniform_int(rng, 0, 20), {0, 0, 0}, {1, 1, 1}, grid);
    auto r1 = random_rel(rng), r2 = random_rel(rng);
    auto m = map_octant_six(P, R, RangeMaxIndex::coordinate_weighted(Q), r1, r2, mu);
    for (std::size_t i = 0; i < P.size(); ++i)
      for (std::size_t j = 0; j < R.size(); ++j) {
        bool expect = false;
        for (const auto& q : Q) expect = expect || (holds(P[i], q, r1) && holds(q, R[j], r2));
        CHECK(m.connected(i, j) == expect);
      }
  }
}

TEST_CASE("cube-cell map: a point connects to itself") {
  std::vector<Pt3> one{{0.25, 0.25, 0.25}};
  CubeQIndex qi(one);
  std::vector<Pt3> R{{0.75, 0.75, 0.75}};
  auto m = map_unitcube_cells(one, R, qi, {0, 0, 0}, {0, 0, 0}, {0.5, 0.5, 0.5});
  CHECK(m.connected(0, 0));
  CubeQIndex none(std::vector<Pt3>{});
  auto e = map_unitcube_cells(one, R, none, {0, 0, 0}, {0, 0, 0}, {0.5, 0.5, 0.5});
  CHECK_FALSE(e.connected(0, 0));
}

TEST_CASE("cube-cell map agrees with the common-neighbor scan") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 300; ++t) {
    int grid = t % 3 == 0 ? 8 : 0;
    Cell3 aP{0, 0, 0}, aR{uniform_int(rng, -2, 2), uniform_int(rng, -2, 2), uniform_int(rng, -2, 2)};
    Pt3 mu{};
    std::array<int, 3> sigma{};
    Pt3 plo, phi_, rlo, rhi;
    for (int a = 0; a < 3; ++a) {
      mu[a] = grid ? 0.5 : coord(rng, 0.2, 0.8);
      sigma[a] = uniform_int(rng, 0, 1) ? 1 : -1;
      if (sigma[a] > 0) plo[a] = 0, phi_[a] = mu[a], rlo[a] = mu[a], rhi[a] = 1;
      else plo[a] = mu[a], phi_[a] = 1, rlo[a] = 0, rhi[a] = mu[a];
    }
    auto P = cloud(rng, uniform_int(rng, 1, 10), plo, phi_, grid);
    auto R = cloud(rng, uniform_int(rng, 1, 10), rlo, rhi, grid);
    for (auto& r : R)
      for (int a = 0; a < 3; ++a) r[a] += static_cast<double>(aR[a]);
    auto Q = cloud(rng, uniform_int(rng, 0, 40), {-1, -1, -1}, {2, 2, 2}, grid);
    CubeQIndex qi(Q);
    auto m = map_unitcube_cells(P, R, qi, aP, aR, mu, sigma);
    CHECK(m.width == kCubeMapWidth);
    for (std::size_t i = 0; i < P.size(); ++i)
      for (std::size_t j = 0; j < R.size(); ++j) {
        bool expect = false;
        for (const auto& q : Q) expect = expect || (cubes_meet(P[i], q) && cubes_meet(q, R[j]));
        CHECK(m.connected(i, j) == expect);
      }
  }
}

TEST_CASE("dominance pair: trivial cases") {
  VectorMaps m;
  m.width = 3;
  m.closure = Closure::Strict;
  m.active.assign(3, 1);
  auto any = [](int, int) { return true; };
  CHECK_FALSE(dominance_pair_exists(m, any));
  m.phi = {1, 1, 1};
  m.psi = {0, 0, 0};
  CHECK(dominance_pair_exists(m, any));
  CHECK(dominance_pair_exists(m, any, DominanceMethod::Scan));
  CHECK_FALSE(dominance_pair_exists(m, [](int, int) { return false; }));
  m.psi = {0, 0};
  CHECK_THROWS(dominance_pair_exists(m, any));
}

TEST_CASE("dominance pair: pruning tree agrees with the scan") {
  std::mt19937_64 rng(25);
  int found = 0;
  for (int t = 0; t < 400; ++t) {
    VectorMaps m;
    m.width = uniform_int(rng, 1, 12);
    m.closure = t % 2 ? Closure::Strict : Closure::Closed;
    m.active.assign(m.width, 1);
    int np = uniform_int(rng, 0, 30), nr = uniform_int(rng, 0, 30);
    int levels = uniform_int(rng, 2, 6);
    for (int i = 0; i < np * m.width; ++i) m.phi.push_back(uniform_int(rng, 0, levels));
    for (int i = 0; i < nr * m.width; ++i) m.psi.push_back(uniform_int(rng, 0, levels) - 1);
    std::uint64_t salt = rng();
    auto filt = [salt](int p, int r) { return ((p * 31 + r * 17 + salt) % 3) != 0; };
    bool scan = dominance_pair_exists(m, filt, DominanceMethod::Scan);
    auto hit = find_dominance_pair(m, filt, DominanceMethod::Tree);
    CHECK(scan == hit.has_value());
    if (hit) {
      CHECK_FALSE(m.connected(hit->first, hit->second));
      CHECK(filt(hit->first, hit->second));
    }
    found += scan;
  }
  CHECK(found > 50);
  CHECK(found < 350);
}

TEST_CASE("cell pair: a shared neighbor connects a single pair") {
  std::vector<Pt3> P{{0.2, 0.2, 0.2}}, R{{1.9, 0.5, 0.5}}, Q{{1.1, 0.4, 0.4}};
  CubeQIndex qi(Q);
  CHECK(solve_cell_pair(P, qi, R, {0, 0, 0}, {1, 0, 0}).ok);
  CubeQIndex none(std::vector<Pt3>{});
  auto res = solve_cell_pair(P, none, R, {0, 0, 0}, {1, 0, 0});
  CHECK_FALSE(res.ok);
  REQUIRE(res.witness);
  CHECK(*res.witness == std::pair<int, int>{0, 0});
}

TEST_CASE("cell pair: half of P cut off survives every split level") {
  // R sits two cells away in x; only P points with x > 0.5 reach the bridge.
  std::mt19937_64 rng(26);
  auto P = cloud(rng, 80, {0, 0, 0}, {1, 1, 1});
  auto R = cloud(rng, 80, {2.6, 0, 0}, {2.9, 1, 1});
  std::vector<Pt3> Q;
  for (int i = 0; i < 60; ++i) Q.push_back({1.55 + 0.04 * coord(rng, 0, 1), coord(rng, 0.3, 0.7), coord(rng, 0.3, 0.7)});
  CubeQIndex qi(Q);
  Diam2CubeOptions opt;
  opt.direct_pairs = 0;
  opt.retire_covered = false;
  auto res = solve_cell_pair(P, qi, R, {0, 0, 0}, {2, 0, 0}, opt);
  bool expect = cube_path_check({P, Q, R}, 2).ok;
  CHECK(res.ok == expect);
  CHECK_FALSE(res.ok);
  REQUIRE(res.witness);
  CHECK(P[res.witness->first][0] < 0.55 + 0.04);
  CHECK(res.stats.separated_calls > 0);
}

TEST_CASE("cell pair agrees with the oracle") {
  std::mt19937_64 rng(27);
  int trues = 0;
  for (int t = 0; t < 300; ++t) {
    int grid = t % 4 == 0 ? 8 : 0;
    Cell3 aR{uniform_int(rng, -1, 1), uniform_int(rng, -1, 1), uniform_int(rng, -1, 1)};
    auto P = cloud(rng, uniform_int(rng, 1, 40), {0, 0, 0}, {1, 1, 1}, grid);
    auto R = cloud(rng, uniform_int(rng, 1, 40), {0, 0, 0}, {1, 1, 1}, grid);
    for (auto& r : R)
      for (int a = 0; a < 3; ++a) r[a] += static_cast<double>(aR[a]);
    auto Q = cloud(rng, uniform_int(rng, 0, 60), {-1, -1, -1}, {2, 2, 2}, grid);
    CubeQIndex qi(Q);
    bool expect = cube_path_check({P, Q, R}, 2).ok;
    for (std::size_t cut : {std::size_t(0), std::size_t(3), std::size_t(4096)}) {
      Diam2CubeOptions opt;
      opt.direct_pairs = cut;
      opt.method = t % 2 ? DominanceMethod::Tree : DominanceMethod::Scan;
      opt.retire_covered = t % 3 != 0;
      auto res = solve_cell_pair(P, qi, R, {0, 0, 0}, aR, opt);
      CHECK(res.ok == expect);
      if (!res.ok) {
        REQUIRE(res.witness);
        CHECK_FALSE(cube_path_check({{P[res.witness->first]}, Q, {R[res.witness->second]}}, 2).ok);
      }
    }
    trues += expect;
  }
  CHECK(trues > 30);
  CHECK(trues < 270);
}

TEST_CASE("whole decider: small fixed cases") {
  std::vector<Pt3> one{{0.3, 0.3, 0.3}};
  CHECK(diam2_unit_cubes(one, one, one).ok);
  std::vector<Pt3> far{{5.3, 0.3, 0.3}};
  auto res = diam2_unit_cubes(one, one, far);
  CHECK_FALSE(res.ok);
  CHECK(diam2_unit_cubes({}, one, far).ok);
}

TEST_CASE("whole decider agrees with the oracle") {
  std::mt19937_64 rng(28);
  int trues = 0;
  for (int t = 0; t < 300; ++t) {
    double side = coord(rng, 1.0, 3.5);
    int grid = t % 5 == 0 ? 8 : 0;
    auto P = cloud(rng, uniform_int(rng, 1, 60), {0, 0, 0}, {side, side, side}, grid);
    auto Q = cloud(rng, uniform_int(rng, 0, 80), {0, 0, 0}, {side, side, side}, grid);
    auto R = t % 3 == 0 ? P : cloud(rng, uniform_int(rng, 1, 60), {0, 0, 0}, {side, side, side}, grid);
    Diam2CubeOptions opt;
    opt.direct_pairs = t % 2 ? 0 : 16;
    opt.retire_covered = t % 4 < 2;
    auto res = diam2_unit_cubes(P, Q, R, opt);
    bool expect = cube_path_check({P, Q, R}, 2).ok;
    CHECK(res.ok == expect);
    trues += expect;
  }
  CHECK(trues > 20);
}

TEST_CASE("recursion work stays within m log^3 m") {
  std::mt19937_64 rng(29);
  for (int n : {256, 1024, 4096}) {
    auto P = cloud(rng, n, {0, 0, 0}, {1, 1, 1});
    auto R = cloud(rng, n, {0, 0, 0}, {1, 1, 1});
    auto Q = cloud(rng, n, {0, 0, 0}, {1, 1, 1});
    CubeQIndex qi(Q);
    Diam2CubeOptions opt;
    opt.direct_pairs = 0;
    opt.retire_covered = false;
    auto res = solve_cell_pair(P, qi, R, {0, 0, 0}, {0, 0, 0}, opt);
    CHECK(res.ok);
    double m = 2.0 * n, lg = std::log2(m);
    CHECK(static_cast<double>(res.stats.point_visits) <= 1.0 * m * lg * lg * lg);
  }
}
