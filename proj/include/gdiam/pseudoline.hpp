#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace gdiam {

// Ordered ground elements p_0..p_{n-1} and ordered sets S_0..S_{m-1}, stored as a bit matrix.
class MembershipSystem {
 public:
  MembershipSystem() = default;
  MembershipSystem(int n, int m);

  int ground_size() const { return n_; }
  int set_count() const { return m_; }
  bool contains(int set, int k) const { return (row(set)[k >> 6] >> (k & 63)) & 1u; }
  void insert(int set, int k) { bits_[static_cast<std::size_t>(set) * words_ + (k >> 6)] |= std::uint64_t{1} << (k & 63); }
  std::span<const std::uint64_t> row(int set) const {
    return {bits_.data() + static_cast<std::size_t>(set) * words_, static_cast<std::size_t>(words_)};
  }

  // Smallest k with p_k in S_i \ S_j, or ground_size() if there is none.
  int first_difference(int i, int j) const;

 private:
  int n_ = 0, m_ = 0, words_ = 0;
  std::vector<std::uint64_t> bits_;
};

// p_k in S_j \ S_i and p_h in S_i \ S_j with k < h, yet i > j.
struct StarViolation {
  int k = 0, h = 0, i = 0, j = 0;
  bool operator==(const StarViolation&) const = default;
};

// Both checkers return the same violation: smallest h, then smallest j, then smallest i.
struct StarCheck {
  bool ok = true;
  std::optional<StarViolation> violation;
};

// Pairwise scan, O(n m^2).
StarCheck check_star_property_reference(const MembershipSystem& sys);
// Left-to-right sweep of the curve order, O(n m log m). A pair of curves crosses
// twice exactly when the running crossing count exceeds the inversion count.
StarCheck check_star_property(const MembershipSystem& sys);

class StarPropertyError : public std::invalid_argument {
 public:
  explicit StarPropertyError(const StarViolation& v);
  StarViolation violation;
};

// Explicit curves: rank of every curve at x = 0..n. Point p_k sits at (k+1, 0);
// x = 0 lies left of all points, where curve i has rank i.
struct PseudolineSystem {
  int n = 0, m = 0;
  std::vector<int> rank;        // rank[x * m + i], 0 = lowest
  std::vector<int> zero_level;  // zero_level[x]: number of curves below y = 0 at x

  int rank_at(int x, int i) const { return rank[static_cast<std::size_t>(x) * m + i]; }
  bool point_below(int k, int i) const { return rank_at(k + 1, i) >= zero_level[k + 1]; }
  bool curve_below(int x, int i, int j) const { return rank_at(x, i) < rank_at(x, j); }
  int crossings(int i, int j) const;
};

// Throws StarPropertyError when the system is not ABA-free.
PseudolineSystem build_pseudoline_system(const MembershipSystem& sys);

// Curve order at point k, computed from first differences alone:
// for i < j, curve i is below curve j at p_k iff k < first_difference(i, j).
bool curve_below_by_rule(const MembershipSystem& sys, int k, int i, int j);

struct Interval {
  int lo = 0, hi = 0;  // inclusive
  bool operator==(const Interval&) const = default;
};

// Disjoint, sorted, maximal index intervals.
struct IntervalRepr {
  std::vector<Interval> iv;

  bool contains(int k) const;
  // Smallest member >= k, or -1.
  int next_member(int k) const;
  // Smallest non-member >= k (may equal the ground size).
  int next_gap(int k) const;
  std::size_t count() const;
  static IntervalRepr from_sorted(std::span<const int> members);
  static IntervalRepr from_bits(std::span<const std::uint64_t> bits, int n);
};

// Abstract point-pseudoline system accessed only through the two oracles.
class PseudolineOracle {
 public:
  virtual ~PseudolineOracle() = default;
  virtual int point_count() const = 0;
  virtual int curve_count() const = 0;
  // Points are processed left to right in this order.
  virtual double x_of(int p) const = 0;
  // O1: point p lies below curve s.
  virtual bool below(int p, int s) const = 0;
  // O2: curve a lies below curve b at the x-coordinate of p.
  virtual bool curve_below(int p, int a, int b) const = 0;

  std::uint64_t o1_calls() const { return o1_; }
  std::uint64_t o2_calls() const { return o2_; }

 protected:
  mutable std::uint64_t o1_ = 0, o2_ = 0;
};

// Sets given by interval representations over a ground order. External point
// and curve ids are mapped to ground positions and to the (ABA-free) set order.
// Sets with at most the median interval count are good; the first difference of
// two sets walks the intervals of a good one, and falls back to a bit scan when
// both are bad.
class IntervalOracle final : public PseudolineOracle {
 public:
  IntervalOracle(int ground, std::vector<IntervalRepr> sets, std::vector<int> point_pos, std::vector<int> curve_pos);

  int point_count() const override { return static_cast<int>(point_pos_.size()); }
  int curve_count() const override { return static_cast<int>(curve_pos_.size()); }
  double x_of(int p) const override { return point_pos_[p]; }
  bool below(int p, int s) const override;
  bool curve_below(int p, int a, int b) const override;

  // Smallest ground position in set i \ set j (set order indices), or ground size.
  int first_difference(int i, int j) const;
  bool good(int i) const { return good_[i]; }

 private:
  int ground_;
  std::vector<IntervalRepr> sets_;
  std::vector<int> point_pos_, curve_pos_;
  std::vector<char> good_;
  std::vector<std::vector<std::uint64_t>> bad_bits_;
};

// Points at (p, phi[p]) and horizontal curves at psi[s]. A point touching a
// curve counts as below when closed is set.
class ScalarOracle final : public PseudolineOracle {
 public:
  ScalarOracle(std::vector<double> phi, std::vector<double> psi, bool closed);

  int point_count() const override { return static_cast<int>(phi_.size()); }
  int curve_count() const override { return static_cast<int>(psi_.size()); }
  double x_of(int p) const override { return p; }
  bool below(int p, int s) const override;
  bool curve_below(int p, int a, int b) const override;

 private:
  std::vector<double> phi_, psi_;
  bool closed_;
};

// Explicit lines y = slope * x + offset and explicit points.
class LineOracle final : public PseudolineOracle {
 public:
  struct Line {
    double slope = 0, offset = 0;
  };
  LineOracle(std::vector<std::array<double, 2>> points, std::vector<Line> lines);

  int point_count() const override { return static_cast<int>(pts_.size()); }
  int curve_count() const override { return static_cast<int>(lines_.size()); }
  double x_of(int p) const override { return pts_[p][0]; }
  bool below(int p, int s) const override;
  bool curve_below(int p, int a, int b) const override;

 private:
  double at(int s, double x) const { return lines_[s].slope * x + lines_[s].offset; }
  std::vector<std::array<double, 2>> pts_;
  std::vector<Line> lines_;
};

}  // namespace gdiam
