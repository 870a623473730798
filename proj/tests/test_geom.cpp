#include <doctest.h>

#include "gdiam/geom.hpp"
#include "gdiam/instance.hpp"

#include <random>

using namespace gdiam;

namespace {

PointD<double> P3(double x, double y, double z) { return PointD<double>({x, y, z}); }

bool intervals_overlap(double a0, double a1, double b0, double b1) { return std::max(a0, b0) <= std::min(a1, b1); }

}  // namespace

TEST_CASE("unit cubes sharing a face intersect") {
  CHECK(boxes_intersect(unit_cube(P3(0, 0, 0)), unit_cube(P3(1, 0, 0))));
  CHECK_FALSE(boxes_intersect(unit_cube(P3(0, 0, 0)), unit_cube(P3(1.01, 0, 0))));
}

TEST_CASE("box intersection equals per-axis interval overlap") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-2, 2), L(0, 1.5);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> alo(3), ahi(3), blo(3), bhi(3);
    bool expect = true;
    for (int i = 0; i < 3; ++i) {
      alo[i] = U(rng), ahi[i] = alo[i] + L(rng);
      blo[i] = U(rng), bhi[i] = blo[i] + L(rng);
      expect = expect && intervals_overlap(alo[i], ahi[i], blo[i], bhi[i]);
    }
    AxisBoxD<double> a{PointD<double>(alo), PointD<double>(ahi)}, b{PointD<double>(blo), PointD<double>(bhi)};
    CHECK(boxes_intersect(a, b) == expect);
    CHECK(boxes_intersect(a, b) == boxes_intersect(b, a));
    CHECK(boxes_intersect(a, a));
  }
}

TEST_CASE("mixed dimensions are rejected") {
  AxisBoxD<double> a(PointD<double>({0, 0}), PointD<double>({1, 1}));
  auto b = unit_cube(P3(0, 0, 0));
  CHECK_THROWS_AS(boxes_intersect(a, b), DimensionError);
  CHECK_THROWS_AS(AxisBoxD<double>(PointD<double>({1, 0}), PointD<double>({0, 1})), std::invalid_argument);
}

TEST_CASE("tangent balls intersect") {
  Rat half(1, 2);
  BallD<Rat> a(PointD<Rat>({0, 0, 0}), half), b(PointD<Rat>({1, 0, 0}), half);
  CHECK(balls_intersect(a, b));
  CHECK(balls_intersect(a, a));
  BallD<Rat> c(PointD<Rat>({Rat(1) + rat(1, 1000000), 0, 0}), half);
  CHECK_FALSE(balls_intersect(a, c));
}

TEST_CASE("ball test with squared radii matches exact recomputation") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> C(-40, 40), R(1, 30);
  for (int t = 0; t < 1000; ++t) {
    std::vector<Rat> c1(3), c2(3);
    for (int i = 0; i < 3; ++i) c1[i] = rat(C(rng), 16), c2[i] = rat(C(rng), 16);
    Rat r1(R(rng), 8), r2(R(rng), 8);
    BallD<Rat> a(PointD<Rat>(c1), r1), b(PointD<Rat>(c2), r2);
    Rat d2 = 0;
    for (int i = 0; i < 3; ++i) d2 += (c1[i] - c2[i]) * (c1[i] - c2[i]);
    Rat rr = (r1 + r2) * (r1 + r2);
    CHECK(balls_intersect(a, b) == (d2 <= rr));
  }
  // sqrt(2)-radius balls: centers at squared distance exactly 8 touch.
  auto a = BallD<Rat>::from_radius_sq(PointD<Rat>({0, 0}), Rat(2));
  auto b = BallD<Rat>::from_radius_sq(PointD<Rat>({2, 2}), Rat(2));
  auto c = BallD<Rat>::from_radius_sq(PointD<Rat>({2, rat(201, 100)}), Rat(2));
  CHECK(balls_intersect(a, b));
  CHECK_FALSE(balls_intersect(a, c));
}

TEST_CASE("generalized dominance examples") {
  GeneralizedDominance any{Rel::ANY, Rel::ANY, Rel::ANY};
  CHECK(gd_holds(P3(3, -1, 2), P3(0, 0, 0), any));
  CHECK(gd_holds(P3(0, 0, 0), P3(1, 1, 1), GeneralizedDominance{Rel::LT, Rel::LT, Rel::LT}));
  CHECK(gd_holds(P3(1, 5, 0), P3(0, -3, 1), GeneralizedDominance{Rel::GT, Rel::ANY, Rel::LT}));
  CHECK_FALSE(gd_holds(P3(1, 5, 2), P3(0, -3, 1), GeneralizedDominance{Rel::GT, Rel::ANY, Rel::LT}));
}

TEST_CASE("flip swaps the roles of the two points") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  std::uniform_int_distribution<int> Rd(0, 2);
  for (int t = 0; t < 2000; ++t) {
    GeneralizedDominance g{Rel(Rd(rng)), Rel(Rd(rng)), Rel(Rd(rng))};
    auto p = P3(U(rng), U(rng), U(rng)), q = P3(U(rng), U(rng), U(rng));
    CHECK(gd_holds(p, q, g) == gd_holds(q, p, flip(g)));
  }
}

TEST_CASE("cell relation reproduces cube intersection") {
  std::int64_t z[3] = {0, 0, 0};
  std::int64_t x1[3] = {1, 0, 0};
  CHECK(dominance_rel_for_cells(z, z) == GeneralizedDominance{Rel::ANY, Rel::ANY, Rel::ANY});
  CHECK(dominance_rel_for_cells(z, x1) == GeneralizedDominance{Rel::GT, Rel::ANY, Rel::ANY});
  std::int64_t far[3] = {2, 0, 0};
  CHECK_THROWS(dominance_rel_for_cells(z, far));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0, 1);
  std::uniform_int_distribution<int> C(-3, 3), D(-1, 1);
  for (int t = 0; t < 10000; ++t) {
    std::int64_t aP[3], aQ[3];
    for (int i = 0; i < 3; ++i) aP[i] = C(rng), aQ[i] = aP[i] + D(rng);
    auto rel = dominance_rel_for_cells(aP, aQ);
    std::vector<double> p(3), q(3), pr(3), qr(3);
    for (int i = 0; i < 3; ++i) {
      pr[i] = U(rng), qr[i] = U(rng);
      p[i] = double(aP[i]) + pr[i];
      q[i] = double(aQ[i]) + qr[i];
    }
    bool direct = boxes_intersect(unit_cube(PointD<double>(p)), unit_cube(PointD<double>(q)));
    CHECK(direct == gd_holds(PointD<double>(pr), PointD<double>(qr), rel));
  }
}

TEST_CASE("rational circle points") {
  auto [b1, w1] = rational_circle_point(rat(1, 2));
  CHECK(b1 == rat(4, 5));
  CHECK(w1 == rat(3, 5));
  auto [b2, w2] = rational_circle_point(rat(1, 3));
  CHECK(b2 == rat(3, 5));
  CHECK(w2 == rat(4, 5));
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> N(1, 999);
  for (int t = 0; t < 100; ++t) {
    Rat tt(N(rng), 1000);
    auto [b, w] = rational_circle_point(tt);
    CHECK(b * b + w * w == 1);
    CHECK(b > 0);
    CHECK(b < 1);
  }
  CHECK_THROWS(rational_circle_point(Rat(0)));
  CHECK_THROWS(rational_circle_point(Rat(1)));
}

TEST_CASE("rational text round trip") {
  CHECK(parse_rational("3/6") == rat(1, 2));
  CHECK(parse_rational("-0.125") == rat(-1, 8));
  CHECK(parse_rational("2.5e-1") == rat(1, 4));
  CHECK(parse_rational("7") == Rat(7));
  CHECK(format_rational(rat(-2, 4)) == "-1/2");
  CHECK(format_rational(Rat(3)) == "3/1");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("instance JSON round trip keeps exact values") {
  Instance inst;
  inst.kind = ObjKind::Box;
  inst.dim = 2;
  auto& P = inst.part("P");
  P.objects.emplace_back(AxisBoxD<Rat>(PointD<Rat>({rat(1, 3), 0}), PointD<Rat>({rat(2, 3), rat(1, 7)})));
  P.labels.push_back(SourceLabel{"s", {4}});
  auto back = instance_from_json(to_json(inst));
  REQUIRE(back.parts.size() == 1);
  CHECK(std::get<1>(back.parts[0].objects[0]) == std::get<1>(P.objects[0]));
  CHECK(back.parts[0].labels[0] == P.labels[0]);
  CHECK(to_json(back) == to_json(inst));
}
