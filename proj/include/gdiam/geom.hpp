#pragma once

#include "gdiam/rational.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gdiam {

inline constexpr int kMaxDim = 10;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class T>
struct PointD {
  std::vector<T> coords;

  PointD() = default;
  explicit PointD(std::vector<T> c) : coords(std::move(c)) {
    if (coords.size() < 1 || coords.size() > kMaxDim) throw DimensionError("point dimension out of range");
  }
  PointD(std::initializer_list<T> c) : PointD(std::vector<T>(c)) {}

  int dim() const { return static_cast<int>(coords.size()); }
  const T& operator[](int i) const { return coords[i]; }
  T& operator[](int i) { return coords[i]; }
  bool operator==(const PointD&) const = default;
};

template <class T>
struct AxisBoxD {
  PointD<T> lo, hi;

  AxisBoxD() = default;
  AxisBoxD(PointD<T> l, PointD<T> h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo.dim() != hi.dim()) throw DimensionError("box corners differ in dimension");
    for (int i = 0; i < lo.dim(); ++i)
      if (hi[i] < lo[i]) throw std::invalid_argument("box with lo > hi");
  }
  int dim() const { return lo.dim(); }
  bool operator==(const AxisBoxD&) const = default;
};

// Stores the squared radius so that irrational radii such as sqrt(2) stay exact.
template <class T>
struct BallD {
  PointD<T> center;
  T radius_sq;

  BallD() = default;
  BallD(PointD<T> c, const T& radius) : center(std::move(c)), radius_sq(radius * radius) {
    if (!(radius > 0)) throw std::invalid_argument("ball radius must be positive");
  }
  static BallD from_radius_sq(PointD<T> c, T r2) {
    if (!(r2 > 0)) throw std::invalid_argument("ball radius must be positive");
    BallD b;
    b.center = std::move(c);
    b.radius_sq = std::move(r2);
    return b;
  }
  int dim() const { return center.dim(); }
};

// Axis-aligned cube of side 1 centered at c.
template <class T>
AxisBoxD<T> unit_cube(const PointD<T>& c) {
  std::vector<T> lo(c.dim()), hi(c.dim());
  for (int i = 0; i < c.dim(); ++i) {
    lo[i] = c[i] - T(1) / T(2);
    hi[i] = c[i] + T(1) / T(2);
  }
  return AxisBoxD<T>(PointD<T>(std::move(lo)), PointD<T>(std::move(hi)));
}

inline void require_same_dim(int a, int b) {
  if (a != b) throw DimensionError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

// Closed boxes: touching faces count.
template <class T>
bool boxes_intersect(const AxisBoxD<T>& a, const AxisBoxD<T>& b) {
  require_same_dim(a.dim(), b.dim());
  for (int i = 0; i < a.dim(); ++i)
    if (a.hi[i] < b.lo[i] || b.hi[i] < a.lo[i]) return false;
  return true;
}

template <class T>
T squared_distance(const PointD<T>& a, const PointD<T>& b) {
  require_same_dim(a.dim(), b.dim());
  T s = 0;
  for (int i = 0; i < a.dim(); ++i) {
    T d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// |c1-c2|^2 <= (r1+r2)^2 evaluated without square roots:
// with L = |c1-c2|^2 - r1^2 - r2^2 the test is L <= 0 or L^2 <= 4 r1^2 r2^2.
template <class T>
bool balls_intersect(const BallD<T>& a, const BallD<T>& b) {
  T L = squared_distance(a.center, b.center);
  L -= a.radius_sq;
  L -= b.radius_sq;
  if (L <= 0) return true;
  T lhs = L * L;
  T rhs = 4 * a.radius_sq * b.radius_sq;
  return lhs <= rhs;
}

enum class Rel : std::uint8_t { LT, GT, ANY };

inline Rel flip(Rel r) { return r == Rel::LT ? Rel::GT : r == Rel::GT ? Rel::LT : Rel::ANY; }
char rel_char(Rel r);

// p ◁ q iff every axis relation holds between p and q.
struct GeneralizedDominance {
  std::array<Rel, kMaxDim> axis{};
  int dim = 3;

  GeneralizedDominance() { axis.fill(Rel::ANY); }
  GeneralizedDominance(std::initializer_list<Rel> rels);

  Rel operator[](int i) const { return axis[i]; }
  Rel& operator[](int i) { return axis[i]; }
  bool operator==(const GeneralizedDominance& o) const;
  std::string str() const;
};

GeneralizedDominance flip(const GeneralizedDominance& g);

inline bool rel_holds(Rel r, double a, double b) {
  return r == Rel::ANY || (r == Rel::LT ? a < b : a > b);
}

template <class T>
bool rel_holds(Rel r, const T& a, const T& b) {
  return r == Rel::ANY || (r == Rel::LT ? a < b : b < a);
}

template <class T>
bool gd_holds(const PointD<T>& p, const PointD<T>& q, const GeneralizedDominance& rel) {
  require_same_dim(p.dim(), q.dim());
  require_same_dim(p.dim(), rel.dim);
  for (int i = 0; i < p.dim(); ++i)
    if (!rel_holds(rel[i], p[i], q[i])) return false;
  return true;
}

// For p in alphaP+(0,1)^d and q in alphaQ+(0,1)^d:
// cube(p) meets cube(q) iff gd_holds(p - alphaP, q - alphaQ, result).
GeneralizedDominance dominance_rel_for_cells(std::span<const std::int64_t> alphaP,
                                             std::span<const std::int64_t> alphaQ);

// b = 2t/(1+t^2), w = (1-t^2)/(1+t^2), so b^2 + w^2 = 1 exactly.
std::pair<Rat, Rat> rational_circle_point(const Rat& t);

}  // namespace gdiam
