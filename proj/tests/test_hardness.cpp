#include <doctest.h>

#include "gdiam/hardness.hpp"
#include "gdiam/oracle.hpp"
#include "test_util.hpp"

#include <algorithm>

using namespace gdiam;
using namespace testutil;

namespace {

const Target kTripartite[] = {Target::Balls3d, Target::Hypercubes4d, Target::Cubes3d, Target::Rects2d};
const Target kClique[] = {Target::Hypercubes6d, Target::Hypercubes4dDiam2, Target::Balls7d, Target::Hypercubes10d};

SourceGraph graph(SourceKind k, std::vector<int> sizes, std::vector<std::vector<int>> edges) {
  SourceGraph g;
  g.kind = k;
  g.part_sizes = std::move(sizes);
  g.edges = std::move(edges);
  g.validate();
  return g;
}

// Sizes and densities that give both answers often.
SourceGraph random_for(Target t, std::mt19937_64& rng) {
  const SourceKind k = source_kind_for(t);
  std::vector<int> sizes;
  double p = 0;
  auto frac = [&] { return std::uniform_real_distribution<double>(0, 1)(rng); };
  switch (k) {
    case SourceKind::Tripartite:
      sizes = {uniform_int(rng, 1, 6), uniform_int(rng, 1, 12), uniform_int(rng, 1, 6)};
      p = 0.15 + 0.8 * frac();
      break;
    case SourceKind::Hypergraph6:
      for (int i = 0; i < 6; ++i) sizes.push_back(uniform_int(rng, 1, 3));
      p = 0.75 + 0.24 * frac();
      break;
    case SourceKind::Fourpartite:
      for (int i = 0; i < 4; ++i) sizes.push_back(uniform_int(rng, 1, 4));
      p = 0.4 + 0.55 * frac();
      break;
    case SourceKind::TripartiteSimple:
      for (int i = 0; i < 3; ++i) sizes.push_back(uniform_int(rng, 1, 5));
      p = 0.3 + 0.6 * frac();
      break;
  }
  return random_source_graph(k, sizes, p, rng());
}

Observation suite_for(Target t) {
  switch (t) {
    case Target::Balls3d: return Observation::Ball3D;
    case Target::Hypercubes10d: return Observation::Cube10D;
    default: return target_threshold(t) == 3 ? Observation::Cube4D : Observation::Cube6D;
  }
}

int label_value(const SourceLabel& l, int part) {
  for (std::size_t i = 0; i + 1 < l.ids.size(); i += 2)
    if (l.ids[i] == part) return l.ids[i + 1];
  return -1;
}

}  // namespace

TEST_CASE("source graph validation and text round trip") {
  auto g = graph(SourceKind::Tripartite, {2, 2, 1}, {{0, 2}, {1, 3}, {2, 4}});
  auto back = parse_source_graph(format_source_graph(g));
  CHECK(back.kind == g.kind);
  CHECK(back.part_sizes == g.part_sizes);
  CHECK(back.edges == g.edges);
  CHECK(g.part_of(4) == 2);
  CHECK(g.local_index(3) == 1);
  CHECK(g.global_id(1, 1) == 3);

  CHECK_THROWS_AS(graph(SourceKind::Tripartite, {1, 1, 1}, {{0, 2}}), std::invalid_argument);  // A-C
  CHECK_THROWS_AS(graph(SourceKind::Tripartite, {1, 1, 1}, {{0, 1}, {0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(graph(SourceKind::Tripartite, {2, 1, 1}, {{0, 1}}), std::invalid_argument);  // inside A
  CHECK_THROWS_AS(graph(SourceKind::Hypergraph6, {1, 1, 1, 1, 1, 1}, {{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(graph(SourceKind::Fourpartite, {1, 1, 1}, {}), std::invalid_argument);
  CHECK_THROWS_AS(parse_source_graph("\n\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_source_graph("octopus 1 2"), std::invalid_argument);

  auto h = parse_source_graph("# comment\nhypergraph-3uniform-6partite 1 1 1 1 1 1\n2 1 0\n");
  CHECK(h.edges == std::vector<std::vector<int>>{{0, 1, 2}});
}

TEST_CASE("random source graphs are reproducible") {
  for (auto k : {SourceKind::Tripartite, SourceKind::Fourpartite, SourceKind::TripartiteSimple, SourceKind::Hypergraph6}) {
    std::vector<int> sizes(k == SourceKind::Fourpartite ? 4 : k == SourceKind::Hypergraph6 ? 6 : 3, 3);
    auto a = random_source_graph(k, sizes, 0.5, 99);
    auto b = random_source_graph(k, sizes, 0.5, 99);
    CHECK(a.edges == b.edges);
    CHECK(random_source_graph(k, sizes, 0.0, 1).edges.empty());
    if (k == SourceKind::Tripartite) CHECK(random_source_graph(k, sizes, 1.0, 1).edges.size() == 18u);
  }
}

TEST_CASE("default parameters meet their ranges and gap bounds") {
  std::mt19937_64 rng(11);
  for (Target t : {Target::Balls3d, Target::Hypercubes4d, Target::Cubes3d, Target::Rects2d, Target::Hypercubes10d,
                   Target::Hypercubes6d, Target::Hypercubes4dDiam2, Target::Balls7d}) {
    const SourceKind k = source_kind_for(t);
    for (int trial = 0; trial < 20; ++trial) {
      const int parts = k == SourceKind::Fourpartite ? 4 : k == SourceKind::Hypergraph6 ? 6 : 3;
      std::vector<int> sizes;
      for (int i = 0; i < parts; ++i) sizes.push_back(uniform_int(rng, 0, 40 / parts));
      auto g = random_source_graph(k, sizes, 0.3, rng());
      auto p = default_params(g, t);
      CHECK_NOTHROW(check_params(g, t, p));
    }
  }
  // delta is tiny but positive, eps = 1/(16 n'^4) with n' = 16 for small graphs.
  auto g = graph(SourceKind::Tripartite, {1, 1, 1}, {{0, 1}, {1, 2}});
  auto p = default_params(g, Target::Balls3d);
  CHECK(p.epsilon == Rat(1, 16 * 65536));
  CHECK(p.sin_delta > 0);
  CHECK(p.sin_delta * p.sin_delta + p.cos_delta * p.cos_delta == 1);

  auto bad = p;
  bad.values[0][0] = 3 * p.epsilon;
  CHECK_THROWS_AS(check_params(g, Target::Balls3d, bad), std::invalid_argument);
  CHECK_THROWS_AS(reduce_tripartite(g, Target::Balls3d, bad), std::invalid_argument);
  bad.unchecked = true;
  CHECK_NOTHROW(reduce_tripartite(g, Target::Balls3d, bad));

  auto big = graph(SourceKind::Tripartite, {3, 1, 1}, {});
  auto q = default_params(big, Target::Cubes3d);
  q.values[0][1] = q.values[0][0];
  CHECK_THROWS_AS(check_params(big, Target::Cubes3d, q), std::invalid_argument);
}

TEST_CASE("tripartite reductions on a single path") {
  // a = 0, b = 1, c = 2.
  auto g = graph(SourceKind::Tripartite, {1, 1, 1}, {{0, 1}, {1, 2}});
  for (Target t : kTripartite) {
    CAPTURE(target_name(t));
    auto inst = reduce_tripartite(g, t);
    for (const char* name : {"B1", "B2", "B3", "B4"}) REQUIRE(inst.find_part(name)->objects.size() == 1u);
    const auto& s = inst.find_part("B1")->objects[0];
    const auto& p = inst.find_part("B2")->objects[0];
    const auto& q = inst.find_part("B3")->objects[0];
    const auto& tt = inst.find_part("B4")->objects[0];
    CHECK(objects_intersect(s, p));
    CHECK(objects_intersect(p, q));
    CHECK(objects_intersect(q, tt));
    CHECK_FALSE(objects_intersect(s, q));
    CHECK_FALSE(objects_intersect(p, tt));
    CHECK_FALSE(objects_intersect(s, tt));
    CHECK(instance_diameter_at_most(inst, 3));
    CHECK_FALSE(instance_diameter_at_most(inst, 2));
  }
  auto inst = reduce_tripartite(g, Target::Balls3d);
  CHECK(inst.kind == ObjKind::Ball);
  CHECK(std::get<BallD<Rat>>(inst.parts[0].objects[0]).radius_sq == Rat(1, 4));
}

TEST_CASE("tripartite reductions without edges") {
  auto g = graph(SourceKind::Tripartite, {2, 3, 2}, {});
  for (Target t : kTripartite) {
    auto inst = reduce_tripartite(g, t);
    CHECK(inst.find_part("B2")->objects.empty());
    CHECK(inst.find_part("B3")->objects.empty());
    auto G = build_intersection_graph(inst.all_objects());
    auto d = bfs_distances(G, 0);  // s_a
    CHECK(d.dist[2] == kUnreachable);
    CHECK(d.dist[3] == kUnreachable);
    CHECK_FALSE(check_equivalence(g, t).source);
    CHECK(check_equivalence(g, t).agree());
  }
}

TEST_CASE("tripartite equivalence on random sparse graphs") {
  std::mt19937_64 rng(2024);
  for (Target t : kTripartite) {
    int trues = 0;
    for (int trial = 0; trial < 60; ++trial) {
      auto g = random_for(t, rng);
      auto e = check_equivalence(g, t);
      CHECK_MESSAGE(e.agree(), target_name(t) << " trial " << trial << "\n" << format_source_graph(g));
      trues += e.source;
    }
    CHECK(trues > 10);
    CHECK(trues < 50);
  }
}

TEST_CASE("10D hyperclique reduction") {
  const std::vector<int> ones(6, 1);
  SourceGraph full;
  full.kind = SourceKind::Hypergraph6;
  full.part_sizes = ones;
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b)
      for (int c = b + 1; c < 6; ++c) full.edges.push_back({a, b, c});
  REQUIRE(has_six_hyperclique(full));
  auto inst = reduce_hyperclique_10d(full);
  CHECK(inst.dim == 10);
  CHECK_FALSE(instance_diameter_at_most(inst, 2));

  // One missing triple per pattern blocks the clique.
  for (std::size_t drop = 0; drop < full.edges.size(); ++drop) {
    auto h = full;
    h.edges.erase(h.edges.begin() + static_cast<long>(drop));
    CHECK_FALSE(has_six_hyperclique(h));
    CHECK(check_equivalence(h, Target::Hypercubes10d).agree());
  }

  SourceGraph empty = full;
  empty.edges.clear();
  auto e = reduce_hyperclique_10d(empty);
  CHECK(e.find_part("S")->objects.empty());
  CHECK(e.find_part("T")->objects.empty());
  CHECK(instance_diameter_at_most(e, 2));

  std::mt19937_64 rng(6);
  int cliques = 0;
  for (int trial = 0; trial < 12; ++trial) {
    auto h = random_for(Target::Hypercubes10d, rng);
    auto r = check_equivalence(h, Target::Hypercubes10d);
    CHECK(r.agree());
    cliques += !r.source;
  }
  CHECK(cliques > 0);
}

TEST_CASE("clique variant reductions") {
  auto k4 = graph(SourceKind::Fourpartite, {1, 1, 1, 1}, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  for (Target t : {Target::Hypercubes6d, Target::Balls7d}) {
    CHECK(has_four_clique(k4));
    CHECK_FALSE(instance_diameter_at_most(reduce_clique_variants(k4, t), 2));
  }
  // Tiny complete 4-partite graphs.
  for (int k = 1; k <= 2; ++k) {
    auto g = random_source_graph(SourceKind::Fourpartite, {k, k, k, k}, 1.0, 0);
    for (Target t : {Target::Hypercubes6d, Target::Balls7d}) CHECK(check_equivalence(g, t).agree());
  }
  // Triangle-free: all A-B and A-C edges, no B-C edges.
  auto tf = random_source_graph(SourceKind::TripartiteSimple, {2, 2, 2}, 1.0, 0);
  std::erase_if(tf.edges, [&](const std::vector<int>& e) { return tf.part_of(e[0]) == 1; });
  CHECK_FALSE(has_triangle(tf));
  CHECK(instance_diameter_at_most(reduce_clique_variants(tf, Target::Hypercubes4dDiam2), 2));

  CHECK_THROWS_AS(reduce_clique_variants(tf, Target::Hypercubes6d), std::invalid_argument);
  CHECK_THROWS_AS(reduce_clique_variants(k4, Target::Rects2d), std::invalid_argument);

  std::mt19937_64 rng(8);
  for (Target t : {Target::Hypercubes6d, Target::Hypercubes4dDiam2, Target::Balls7d}) {
    int cliques = 0;
    for (int trial = 0; trial < 60; ++trial) {
      auto g = random_for(t, rng);
      auto r = check_equivalence(g, t);
      CHECK_MESSAGE(r.agree(), target_name(t) << "\n" << format_source_graph(g));
      cliques += !r.source;
    }
    CHECK(cliques > 5);
    CHECK(cliques < 55);
  }
}

TEST_CASE("literal clique construction needs the isolated padding") {
  // A = {a, a'}, B = {b}, C = {c}; edges ab and ac. No triangle, yet without
  // padding s_ab and p_a'c have no common neighbor.
  auto g = graph(SourceKind::TripartiteSimple, {2, 1, 1}, {{0, 2}, {0, 3}});
  CHECK_FALSE(has_triangle(g));
  auto p = default_params(g, Target::Hypercubes4dDiam2);
  p.pad_isolated = false;
  auto literal = reduce_clique_variants(g, Target::Hypercubes4dDiam2, p);
  CHECK_FALSE(instance_diameter_at_most(literal, 2));
  CHECK(verify_observations(literal, Observation::Cube6D).ok);
  auto padded = reduce_clique_variants(g, Target::Hypercubes4dDiam2);
  CHECK(instance_diameter_at_most(padded, 2));
  CHECK(padded.find_part("T")->objects.size() == 2u);  // t_c and the padding t
}

TEST_CASE("observation suites pass on generated instances") {
  std::mt19937_64 rng(31);
  for (Target t : kTripartite)
    for (int trial = 0; trial < 25; ++trial) {
      auto inst = reduce(random_for(t, rng), t);
      auto r = verify_observations(inst, suite_for(t));
      CHECK_MESSAGE(r.ok, target_name(t) << ": " << r.message);
      CHECK(r.checks > 0);
    }
  for (Target t : kClique)
    for (int trial = 0; trial < (t == Target::Hypercubes10d ? 5 : 25); ++trial) {
      auto inst = reduce(random_for(t, rng), t);
      auto r = verify_observations(inst, suite_for(t));
      CHECK_MESSAGE(r.ok, target_name(t) << ": " << r.message);
    }
}

TEST_CASE("observation suites report corrupted instances") {
  auto path = graph(SourceKind::Tripartite, {2, 2, 2}, {{0, 2}, {0, 3}, {1, 2}, {2, 4}, {3, 4}, {3, 5}});

  SUBCASE("ball reduction with delta = 0 breaks item 2") {
    auto p = default_params(path, Target::Balls3d);
    p.sin_delta = 0;
    p.cos_delta = 1;
    p.unchecked = true;
    auto r = verify_observations(reduce_tripartite(path, Target::Balls3d, p), Observation::Ball3D);
    CHECK_FALSE(r.ok);
    CHECK(r.item == 2);
  }
  SUBCASE("ball reduction with repeated A values breaks item 1") {
    auto p = default_params(path, Target::Balls3d);
    p.values[0][1] = p.values[0][0];
    p.unchecked = true;
    auto r = verify_observations(reduce_tripartite(path, Target::Balls3d, p), Observation::Ball3D);
    CHECK_FALSE(r.ok);
    CHECK(r.item == 1);
  }
  SUBCASE("ball reduction with B off the circle") {
    auto p = default_params(path, Target::Balls3d);
    p.circle_w[1][0] += Rat(1, 4);
    p.unchecked = true;
    CHECK_FALSE(verify_observations(reduce_tripartite(path, Target::Balls3d, p), Observation::Ball3D).ok);
  }
  SUBCASE("hypercube with a mislabeled p") {
    auto inst = reduce_tripartite(path, Target::Hypercubes4d);
    auto& B2 = inst.part("B2");
    auto it = std::find_if(B2.labels.begin(), B2.labels.end(), [](const SourceLabel& l) { return label_value(l, 0) == 0; });
    REQUIRE(it != B2.labels.end());
    it->ids[1] = 1;  // now claims a'
    auto r = verify_observations(inst, Observation::Cube4D);
    CHECK_FALSE(r.ok);
    CHECK(r.item == 1);
  }
  SUBCASE("hypercube with a far-away t") {
    auto inst = reduce_tripartite(path, Target::Hypercubes4d);
    auto& c = std::get<UnitCubeObj<Rat>>(inst.part("B4").objects[0]).center;
    c[2] += 5;
    auto r = verify_observations(inst, Observation::Cube4D);
    CHECK_FALSE(r.ok);
    CHECK(r.item == 3);
  }
  SUBCASE("3D cubes with a large epsilon") {
    auto p = default_params(path, Target::Cubes3d);
    p.epsilon = Rat(1, 2);
    p.values = {{Rat(1, 2), Rat(1, 4)}, {Rat(1, 2), Rat(3, 4)}, {Rat(1, 2), Rat(1, 4)}};
    p.unchecked = true;
    CHECK_FALSE(verify_observations(reduce_tripartite(path, Target::Cubes3d, p), Observation::Cube4D).ok);
  }
  SUBCASE("rectangles with an A value out of range") {
    // a1 is isolated, so only its s rectangle moves; item 4 then fails.
    auto g = graph(SourceKind::Tripartite, {2, 1, 1}, {{0, 2}, {2, 3}});
    auto p = default_params(g, Target::Rects2d);
    p.values[0][1] = Rat(3, 2);
    p.unchecked = true;
    auto r = verify_observations(reduce_tripartite(g, Target::Rects2d, p), Observation::Cube4D);
    CHECK_FALSE(r.ok);
    CHECK(r.item == 4);
  }
  SUBCASE("10D with z0 at the center meets s") {
    SourceGraph h = random_source_graph(SourceKind::Hypergraph6, std::vector<int>(6, 1), 1.0, 0);
    auto inst = reduce_hyperclique_10d(h);
    auto& z = std::get<UnitCubeObj<Rat>>(inst.part("Z").objects[0]).center;
    for (int i = 0; i < 10; ++i) z[i] = Rat(1, 2);
    auto r = verify_observations(inst, Observation::Cube10D);
    CHECK_FALSE(r.ok);
    CHECK(r.item == 4);
  }
  SUBCASE("6D with a mislabeled t") {
    auto g = random_source_graph(SourceKind::Fourpartite, {2, 2, 2, 2}, 0.6, 5);
    auto inst = reduce_clique_variants(g, Target::Hypercubes6d);
    auto& T = inst.part("T");
    REQUIRE(!T.labels.empty());
    T.labels[0].ids[3] ^= 1;  // swap d
    auto r = verify_observations(inst, Observation::Cube6D);
    CHECK_FALSE(r.ok);
    CHECK(r.item == 2);
  }
  SUBCASE("7D balls with squared radius 2 overlap everywhere") {
    auto g = random_source_graph(SourceKind::Fourpartite, {2, 2, 2, 2}, 0.6, 5);
    auto inst = reduce_clique_variants(g, Target::Balls7d);
    for (auto& part : inst.parts)
      for (auto& o : part.objects) std::get<BallD<Rat>>(o).radius_sq = 2;
    auto r = verify_observations(inst, Observation::Cube6D);
    CHECK_FALSE(r.ok);
  }
  SUBCASE("missing labels") {
    auto inst = reduce_tripartite(path, Target::Rects2d);
    inst.part("B3").labels.clear();
    CHECK_THROWS_AS(verify_observations(inst, Observation::Cube4D), std::invalid_argument);
    CHECK_THROWS_AS(verify_observations(inst, Observation::Cube10D), std::invalid_argument);
  }
}

TEST_CASE("generators are exact and deterministic") {
  std::mt19937_64 rng(17);
  for (Target t : {Target::Balls3d, Target::Hypercubes4d, Target::Cubes3d, Target::Rects2d, Target::Hypercubes6d,
                   Target::Hypercubes4dDiam2, Target::Balls7d}) {
    auto g = random_for(t, rng);
    auto inst = reduce(g, t);
    CHECK(to_json(inst).dump() == to_json(reduce(g, t)).dump());
    // The rational JSON form reloads to the same instance, labels included.
    auto back = instance_from_json(to_json(inst));
    CHECK(to_json(back).dump() == to_json(inst).dump());
    CHECK(back.parts.size() == inst.parts.size());
    CHECK(back.parts[0].labels == inst.parts[0].labels);
  }
}
