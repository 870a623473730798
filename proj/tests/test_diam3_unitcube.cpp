#include <doctest.h>

#include "gdiam/diam3_unitcube.hpp"
#include "gdiam/oracle.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <cmath>

using namespace gdiam;
using namespace testutil;

namespace {

GeneralizedDominance random_rel(std::mt19937_64& rng) {
  return GeneralizedDominance{Rel(uniform_int(rng, 0, 2)), Rel(uniform_int(rng, 0, 2)), Rel(uniform_int(rng, 0, 2))};
}

ChainAxes random_axes(std::mt19937_64& rng) {
  int perm[3] = {0, 1, 2};
  std::shuffle(perm, perm + 3, rng);
  return ChainAxes{perm[0], perm[1], perm[2]};
}

// Four groups placed in unit bands per axis. band[g][a] is the band of group g
// on axis a; bands of consecutive groups differ wherever `sep` asks for it.
struct Config {
  std::vector<Pt3> g[4];
  Rels3 rels;
};

Config banded(std::mt19937_64& rng, const bool sep[3][3], int max_n, int grid) {
  Config c;
  int band[4][3];
  for (int a = 0; a < 3; ++a) {
    band[0][a] = uniform_int(rng, 0, 2);
    for (int k = 0; k < 3; ++k) {
      if (sep[k][a]) {
        do band[k + 1][a] = uniform_int(rng, 0, 2);
        while (band[k + 1][a] == band[k][a]);
      } else {
        band[k + 1][a] = band[k][a];
      }
    }
  }
  for (int k = 0; k < 4; ++k) {
    Pt3 lo{double(band[k][0]), double(band[k][1]), double(band[k][2])};
    Pt3 hi{lo[0] + 1, lo[1] + 1, lo[2] + 1};
    c.g[k] = cloud(rng, uniform_int(rng, k == 0 || k == 3 ? 1 : 0, max_n), lo, hi, grid);
  }
  for (auto& r : c.rels) r = random_rel(rng);
  return c;
}

bool cubes_meet(const Pt3& a, const Pt3& b) {
  return std::abs(a[0] - b[0]) <= 1 && std::abs(a[1] - b[1]) <= 1 && std::abs(a[2] - b[2]) <= 1;
}

// Reference for shadow_case_solve.
std::vector<std::pair<int, int>> shadow_reference(const std::vector<Pt3>& P, const std::vector<Pt3>& Q,
                                                  const std::vector<Pt3>& R, const std::vector<Pt3>& S,
                                                  const ShadowBox& gamma) {
  std::vector<std::pair<int, int>> out;
  for (int p = 0; p < static_cast<int>(P.size()); ++p)
    for (int s = 0; s < static_cast<int>(S.size()); ++s) {
      bool s_in = gamma.in_shadow_mod1(S[s]);
      bool found = false;
      for (std::size_t q = 0; q < Q.size() && !found; ++q) {
        if (!cubes_meet(P[p], Q[q])) continue;
        for (std::size_t r = 0; r < R.size() && !found; ++r)
          if (cubes_meet(Q[q], R[r]) && cubes_meet(R[r], S[s]) &&
              !(s_in && gamma.in_shadow_mod1(Q[q]) && gamma.in_shadow_mod1(R[r])))
            found = true;
      }
      if (!found) out.emplace_back(p, s);
    }
  return out;
}

}  // namespace

TEST_CASE("star order table is fixed by the relation chain") {
  Rels3 all_lt;
  for (auto& r : all_lt) r = {Rel::LT, Rel::LT, Rel::LT};
  auto o = star_order(all_lt);
  CHECK(o.z1 == Rel::LT);
  CHECK(o.x2 == Rel::LT);
  CHECK(o.y == Rel::LT);
  Rels3 r = all_lt;
  r[0][1] = Rel::GT;  // rel1 on y flips z1
  o = star_order(r);
  CHECK(o.z1 == Rel::GT);
  CHECK(o.x2 == Rel::GT);
  CHECK(o.y == Rel::GT);
  r[0][1] = Rel::ANY;  // ANY reads as LT
  CHECK(star_order(r).y == Rel::LT);
}

TEST_CASE("separated chains give systems with the order condition") {
  std::mt19937_64 rng(31);
  int nonempty = 0;
  for (int t = 0; t < 500; ++t) {
    ChainAxes ax = random_axes(rng);
    bool sep[3][3] = {};
    sep[0][ax.pq] = sep[1][ax.qr] = sep[2][ax.rs] = true;
    auto c = banded(rng, sep, 9, t % 3 == 0 ? 4 : 0);
    auto& [P, Q, R, S] = c.g;
    auto pord = star_point_order(P, ax.qr);
    auto sord = star_set_order(S, c.rels, ax);
    MembershipSystem sys(static_cast<int>(P.size()), static_cast<int>(S.size()));
    for (int i = 0; i < static_cast<int>(S.size()); ++i)
      for (int k = 0; k < static_cast<int>(P.size()); ++k)
        if (chain_exists(P[pord[k]], S[sord[i]], Q, R, c.rels)) sys.insert(i, k), ++nonempty;
    auto chk = check_star_property(sys);
    CHECK_MESSAGE(chk.ok, "trial " << t);
  }
  CHECK(nonempty > 500);
}

TEST_CASE("neighborhood intervals match chain enumeration") {
  std::mt19937_64 rng(32);
  const bool sep[3][3] = {{true, false, false}, {false, true, false}, {false, false, true}};
  for (int t = 0; t < 300; ++t) {
    auto c = banded(rng, sep, 12, t % 4 == 0 ? 4 : 0);
    auto& [P, Q, R, S] = c.g;
    std::stable_sort(P.begin(), P.end(), [](const Pt3& a, const Pt3& b) { return a[1] < b[1]; });
    auto iv = neighborhood_intervals(P, Q, R, S, c.rels);
    REQUIRE(iv.size() == S.size());
    for (std::size_t s = 0; s < S.size(); ++s)
      for (std::size_t p = 0; p < P.size(); ++p)
        CHECK(iv[s].contains(static_cast<int>(p)) == chain_exists(P[p], S[s], Q, R, c.rels));
  }
}

TEST_CASE("neighborhood intervals reject unsorted or overlapping input") {
  std::vector<Pt3> P{{0.5, 0.7, 0.5}, {0.5, 0.2, 0.5}}, Q{{1.5, 0.5, 0.5}}, R{{1.5, 1.5, 0.5}}, S{{1.5, 1.5, 1.5}};
  Rels3 rels{};
  CHECK_THROWS_AS(neighborhood_intervals(P, Q, R, S, rels), std::invalid_argument);
  std::swap(P[0], P[1]);
  CHECK_NOTHROW(neighborhood_intervals(P, Q, R, S, rels));
  std::vector<Pt3> Qbad{{0.5, 0.5, 0.5}};
  CHECK_THROWS_AS(neighborhood_intervals(P, Qbad, R, S, rels), std::invalid_argument);
}

TEST_CASE("scalar maps decide chains when one pair is separated twice") {
  std::mt19937_64 rng(33);
  int trues = 0, total = 0;
  for (int t = 0; t < 600; ++t) {
    int pair = t % 3;
    bool sep[3][3] = {};
    int free_axis = uniform_int(rng, 0, 2);
    for (int a = 0; a < 3; ++a) sep[pair][a] = a != free_axis || t % 7 == 0;
    for (int k = 0; k < 3; ++k)
      if (k != pair) sep[k][uniform_int(rng, 0, 2)] = uniform_int(rng, 0, 1);
    auto c = banded(rng, sep, 8, t % 3 == 0 ? 4 : 0);
    auto& [P, Q, R, S] = c.g;
    if (c.g[pair].empty() || c.g[pair + 1].empty()) continue;
    auto m = scalar_chain_maps(P, Q, R, S, c.rels, pair);
    for (std::size_t p = 0; p < P.size(); ++p)
      for (std::size_t s = 0; s < S.size(); ++s) {
        bool expect = chain_exists(P[p], S[s], Q, R, c.rels);
        CHECK(expect == (m.phi[p] <= m.psi[s]));
        trues += expect;
        ++total;
      }
  }
  CHECK(trues > total / 20);
  CHECK(trues < total);
}

TEST_CASE("scalar maps need a doubly separated pair") {
  std::vector<Pt3> P{{0.5, 0.5, 0.5}}, Q{{1.5, 0.5, 0.5}}, R{{1.5, 1.5, 0.5}}, S{{1.5, 1.5, 1.5}};
  CHECK_THROWS_AS(scalar_chain_maps(P, Q, R, S, Rels3{}, 0), std::invalid_argument);
  CHECK_THROWS_AS(scalar_chain_maps(P, Q, R, S, Rels3{}, 3), std::invalid_argument);
}

TEST_CASE("shadow case: empty middle groups leave every pair") {
  std::vector<Pt3> P{{0.5, 0.5, 0.5}, {0.6, 0.4, 0.5}}, S{{1.2, 0.1, 0.3}, {2.5, 0.5, 0.5}};
  ShadowBox gamma{{0.3, 0.3, 0.3}, {0.7, 0.7, 0.7}};
  auto res = shadow_case_solve(P, {}, {}, S, gamma);
  CHECK(res.pairs.size() == 4);
}

TEST_CASE("shadow case agrees with the reference") {
  std::mt19937_64 rng(34);
  std::size_t pairs = 0, total = 0;
  for (int t = 0; t < 100; ++t) {
    ShadowBox gamma;
    for (int a = 0; a < 3; ++a) {
      double x = coord(rng, 0, 1), y = coord(rng, 0, 1);
      gamma.lo[a] = std::min(x, y);
      gamma.hi[a] = std::max(x, y) + 1e-9;
    }
    int grid = t % 4 == 0 ? 8 : 0;
    std::vector<Pt3> P = cloud(rng, uniform_int(rng, 1, 25), gamma.lo, gamma.hi);
    double span = coord(rng, 1.0, 3.0);
    Pt3 lo{-span + 0.5, -span + 0.5, -span + 0.5}, hi{span + 0.5, span + 0.5, span + 0.5};
    auto Q = cloud(rng, t % 10 == 0 ? 0 : uniform_int(rng, 1, 30), lo, hi, grid);
    auto R = cloud(rng, uniform_int(rng, 1, 30), lo, hi, grid);
    auto S = cloud(rng, uniform_int(rng, 1, 30), lo, hi, grid);
    Diam3Options opt;
    opt.seed = t;
    opt.verify_systems = true;
    opt.cutting = CuttingParams{2, 2, 1 + t % 3, 200, true};
    auto res = shadow_case_solve(P, Q, R, S, gamma, opt);
    auto expect = shadow_reference(P, Q, R, S, gamma);
    CHECK_MESSAGE(res.pairs == expect, "trial " << t);
    CHECK(res.stats.cutting.classification_errors == 0);
    pairs += expect.size();
    total += P.size() * S.size();
  }
  CHECK(pairs > 0);
  CHECK(pairs < total);
}

TEST_CASE("diam3: small fixed cases") {
  std::vector<Pt3> one{{0.3, 0.3, 0.3}};
  CHECK(diam3_unit_cubes(one, one, one, one).ok);
  std::vector<Pt3> far{{4.5, 0.3, 0.3}};
  auto res = diam3_unit_cubes(one, one, one, far);
  CHECK_FALSE(res.ok);
  REQUIRE(res.witness);
  CHECK(*res.witness == std::pair<int, int>{0, 0});
  CHECK(diam3_unit_cubes({}, one, one, far).ok);
  // A straight chain of unit steps.
  std::vector<Pt3> P{{0, 0, 0}}, Q{{1, 0, 0}}, R{{2, 0, 0}}, S{{3, 0, 0}};
  CHECK(diam3_unit_cubes(P, Q, R, S).ok);
  S[0][0] = 3.01;
  CHECK_FALSE(diam3_unit_cubes(P, Q, R, S).ok);
}

TEST_CASE("diam3 agrees with the oracle") {
  std::mt19937_64 rng(35);
  int trues = 0;
  Diam3Stats sum;
  for (int t = 0; t < 500; ++t) {
    double side = coord(rng, 1.0, 4.5);
    int grid = t % 5 == 0 ? 4 : 0;
    auto box = [&](int lo, int hi) { return cloud(rng, uniform_int(rng, lo, hi), {0, 0, 0}, {side, side, side}, grid); };
    auto P = box(1, 30), Q = box(0, 40), R = box(1, 40);
    auto S = t % 4 == 0 ? P : box(1, 30);
    Diam3Options opt;
    opt.g = 2 + t % 2;
    opt.seed = t;
    opt.verify_systems = true;
    opt.cutting = CuttingParams{2, 2, 1 + t % 4, 200, true};
    auto res = diam3_unit_cubes(P, Q, R, S, opt);
    auto oracle = cube_path_check({P, Q, R, S}, 3);
    CHECK_MESSAGE(res.ok == oracle.ok, "trial " << t);
    if (!res.ok && res.witness) {
      auto [p, s] = *res.witness;
      auto single = cube_path_check({{P[p]}, Q, R, {S[s]}}, 3);
      CHECK_MESSAGE(!single.ok, "witness of trial " << t);
    }
    CHECK(res.stats.cutting.classification_errors == 0);
    trues += oracle.ok;
    sum.interval_systems += res.stats.interval_systems;
    sum.scalar_systems += res.stats.scalar_systems;
    sum.absorb(res.stats.cutting);
  }
  MESSAGE("interval " << sum.interval_systems << ", scalar " << sum.scalar_systems << ", samples "
                      << sum.cutting.samples_accepted << ", nodes " << sum.cutting.nodes);
  CHECK(sum.interval_systems > 100);
  CHECK(sum.scalar_systems > 100);
  CHECK(sum.cutting.samples_accepted > 100);
  CHECK(trues > 50);
  CHECK(trues < 450);
}

TEST_CASE("diam3 is deterministic for a seed") {
  std::mt19937_64 rng(36);
  auto P = cloud(rng, 60, {0, 0, 0}, {2.5, 2.5, 2.5});
  auto Q = cloud(rng, 60, {0, 0, 0}, {2.5, 2.5, 2.5});
  Diam3Options opt;
  opt.g = 2;
  opt.seed = 9;
  opt.cutting = CuttingParams{2, 2, 2, 200};
  auto a = diam3_unit_cubes(P, Q, Q, P, opt);
  auto b = diam3_unit_cubes(P, Q, Q, P, opt);
  CHECK(a.ok == b.ok);
  CHECK(a.witness == b.witness);
  CHECK(a.stats.cutting.trials == b.stats.cutting.trials);
  CHECK(a.stats.outside_pairs == b.stats.outside_pairs);
}

TEST_CASE("default grid size") {
  CHECK(default_grid_slabs(0) == 2);
  CHECK(default_grid_slabs(1000) == 2);
  CHECK(default_grid_slabs(std::size_t{1} << 26) == 4);
}
