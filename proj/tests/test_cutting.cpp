#include <doctest.h>

#include "gdiam/cutting.hpp"
#include "test_util.hpp"

#include <memory>

using namespace gdiam;
using namespace testutil;

namespace {

std::unique_ptr<PseudolineOracle> random_level(std::mt19937_64& rng, int m, int n, int kind) {
  if (kind == 0) {
    auto f = random_line_family(rng, m, n);
    // shuffle external ids of points and lines
    std::shuffle(f.points.begin(), f.points.end(), rng);
    std::shuffle(f.lines.begin(), f.lines.end(), rng);
    return std::make_unique<LineOracle>(f.points, f.lines);
  }
  if (kind == 1) {
    auto f = random_line_family(rng, m, n);
    auto sys = membership_of(f);
    std::vector<IntervalRepr> sets;
    for (int i = 0; i < n; ++i) sets.push_back(IntervalRepr::from_bits(sys.row(i), m));
    std::vector<int> ppos(m), cpos(n);
    std::iota(ppos.begin(), ppos.end(), 0);
    std::iota(cpos.begin(), cpos.end(), 0);
    std::shuffle(ppos.begin(), ppos.end(), rng);
    std::shuffle(cpos.begin(), cpos.end(), rng);
    return std::make_unique<IntervalOracle>(m, std::move(sets), ppos, cpos);
  }
  std::vector<double> phi(m), psi(n);
  for (auto& v : phi) v = uniform_int(rng, -20, 20);
  for (auto& v : psi) v = uniform_int(rng, -20, 20);
  return std::make_unique<ScalarOracle>(phi, psi, kind == 2);
}

}  // namespace

TEST_CASE("no curves, no pairs") {
  LineOracle l({{0, 0}}, {});
  const PseudolineOracle* lv[] = {&l};
  auto r = cutting_search(lv, 1, 0, CuttingParams{}, 1);
  CHECK_FALSE(r.exists);
  CHECK(r.pairs.empty());
}

TEST_CASE("one point above one curve") {
  LineOracle l({{0, 5}}, {{0, 1}});
  const PseudolineOracle* lv[] = {&l};
  auto r = cutting_search(lv, 1, 1, CuttingParams{}, 1);
  CHECK(r.exists);
  REQUIRE(r.pairs.size() == 1);
  CHECK(r.pairs[0] == std::pair<int, int>{0, 0});
}

TEST_CASE("cutting search reports exactly the naive pair set") {
  std::mt19937_64 rng(11);
  const CuttingParams variants[] = {
      {2, 2, 1, 200, true}, {4, 2, 3, 200, true}, {1, 3, 2, 200, true}, {8, 4, 64, 50, true}};
  for (int t = 0; t < 200; ++t) {
    int m = uniform_int(rng, 0, 80), n = uniform_int(rng, 0, 80), D = uniform_int(rng, 1, 3);
    std::vector<std::unique_ptr<PseudolineOracle>> own;
    std::vector<const PseudolineOracle*> lv;
    for (int j = 0; j < D; ++j) {
      own.push_back(random_level(rng, m, n, uniform_int(rng, 0, 3)));
      lv.push_back(own.back().get());
    }
    auto expect = naive_above_all(lv, m, n);
    const auto& prm = variants[t % 4];
    auto got = cutting_search(lv, m, n, prm, 1000 + t);
    REQUIRE(got.pairs == expect);
    CHECK(got.exists == !expect.empty());
    CHECK(got.stats.classification_errors == 0);
    CHECK(got.stats.quality_violations == 0);
    CHECK(got.stats.max_crossing_ratio <= 1.0);
    auto first = cutting_search(lv, m, n, prm, 1000 + t, false);
    CHECK(first.exists == !expect.empty());
    CHECK(first.pairs.size() == (expect.empty() ? 0u : 1u));
  }
}

TEST_CASE("report limit truncates") {
  LineOracle l({{0, 5}, {1, 5}, {2, 5}}, {{0, 1}, {0, 2}});
  const PseudolineOracle* lv[] = {&l};
  CuttingParams prm;
  prm.report_limit = 4;
  auto r = cutting_search(lv, 3, 2, prm, 1);
  CHECK(r.truncated);
  CHECK(r.pairs.size() == 4);
}

TEST_CASE("a fixed seed reproduces the run") {
  std::mt19937_64 rng(12);
  auto a = random_level(rng, 300, 300, 0);
  const PseudolineOracle* lv[] = {a.get()};
  CuttingParams prm{2, 2, 4, 200, false};
  auto r1 = cutting_search(lv, 300, 300, prm, 77);
  auto r2 = cutting_search(lv, 300, 300, prm, 77);
  CHECK(r1.pairs == r2.pairs);
  CHECK(r1.stats.trials == r2.stats.trials);
  CHECK(r1.stats.nodes == r2.stats.nodes);
}
