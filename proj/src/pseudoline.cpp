#include "gdiam/pseudoline.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace gdiam {

MembershipSystem::MembershipSystem(int n, int m) : n_(n), m_(m), words_((n + 63) / 64) {
  if (n < 0 || m < 0) throw std::invalid_argument("negative membership system size");
  bits_.assign(static_cast<std::size_t>(m) * words_, 0);
}

int MembershipSystem::first_difference(int i, int j) const {
  auto a = row(i), b = row(j);
  for (int w = 0; w < words_; ++w) {
    std::uint64_t d = a[w] & ~b[w];
    if (d) return w * 64 + std::countr_zero(d);
  }
  return n_;
}

namespace {

// First member of S_i \ S_j strictly after position k, or n.
int next_difference_after(const MembershipSystem& sys, int i, int j, int k) {
  for (int x = k + 1; x < sys.ground_size(); ++x)
    if (sys.contains(i, x) && !sys.contains(j, x)) return x;
  return sys.ground_size();
}

class Fenwick {
 public:
  explicit Fenwick(int n) : t_(n + 1, 0) {}
  void add(int i) {
    for (++i; i < static_cast<int>(t_.size()); i += i & -i) ++t_[i];
  }
  int prefix(int i) const {  // count of entries < i
    int s = 0;
    for (; i > 0; i -= i & -i) s += t_[i];
    return s;
  }
  void clear() { std::fill(t_.begin(), t_.end(), 0); }

 private:
  std::vector<int> t_;
};

long long inversions(const std::vector<int>& seq, Fenwick& fw) {
  fw.clear();
  long long inv = 0;
  for (std::size_t t = 0; t < seq.size(); ++t) {
    inv += static_cast<long long>(t) - fw.prefix(seq[t] + 1);
    fw.add(seq[t]);
  }
  return inv;
}

// One sweep step: curves regrouped as D, B, C, A by membership of p_{k-1}, p_k.
void regroup(const MembershipSystem& sys, int k, const std::vector<int>& ord, std::vector<char>& prev_in,
             std::vector<int>& next, int& zero) {
  std::vector<int> g[4];
  for (int c : ord) {
    bool now = sys.contains(c, k);
    g[(prev_in[c] ? 1 : 0) + (now ? 2 : 0)].push_back(c);
  }
  // index: 0 = D (out,out), 1 = B (in,out), 2 = C (out,in), 3 = A (in,in)
  next.clear();
  for (int t = 0; t < 4; ++t) next.insert(next.end(), g[t].begin(), g[t].end());
  zero = static_cast<int>(g[0].size() + g[1].size());
  for (int c : ord) prev_in[c] = sys.contains(c, k);
}

}  // namespace

StarCheck check_star_property_reference(const MembershipSystem& sys) {
  const int n = sys.ground_size(), m = sys.set_count();
  StarCheck out;
  int best_h = n;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      int k0 = sys.first_difference(a, b);
      if (k0 >= n) continue;
      int h = next_difference_after(sys, b, a, k0);
      if (h < best_h) {
        best_h = h;
        out.ok = false;
        out.violation = StarViolation{k0, h, b, a};
      }
    }
  return out;
}

StarCheck check_star_property(const MembershipSystem& sys) {
  const int n = sys.ground_size(), m = sys.set_count();
  std::vector<int> ord(m), next, pos_old(m), pos_new(m), seq(m);
  for (int i = 0; i < m; ++i) ord[i] = i;
  std::vector<char> prev_in(m, 0);
  Fenwick fw(m);
  long long total = 0;
  for (int k = 0; k < n; ++k) {
    int zero = 0;
    regroup(sys, k, ord, prev_in, next, zero);
    for (int t = 0; t < m; ++t) {
      pos_old[ord[t]] = t;
      pos_new[next[t]] = t;
    }
    for (int t = 0; t < m; ++t) seq[t] = pos_new[ord[t]];
    total += inversions(seq, fw);
    if (total > inversions(next, fw)) {
      // Some pair crossed for the second time at this step.
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
          bool crossed_before = pos_old[b] < pos_old[a];
          bool crosses_now = (pos_old[a] < pos_old[b]) != (pos_new[a] < pos_new[b]);
          if (crossed_before && crosses_now)
            return StarCheck{false, StarViolation{sys.first_difference(a, b), k, b, a}};
        }
    }
    ord.swap(next);
  }
  return StarCheck{};
}

StarPropertyError::StarPropertyError(const StarViolation& v)
    : std::invalid_argument("set system violates the pseudoline order condition at (k=" + std::to_string(v.k) +
                            ", h=" + std::to_string(v.h) + ", i=" + std::to_string(v.i) +
                            ", j=" + std::to_string(v.j) + ")"),
      violation(v) {}

int PseudolineSystem::crossings(int i, int j) const {
  int c = 0;
  for (int x = 1; x <= n; ++x)
    if (curve_below(x - 1, i, j) != curve_below(x, i, j)) ++c;
  return c;
}

PseudolineSystem build_pseudoline_system(const MembershipSystem& sys) {
  auto chk = check_star_property(sys);
  if (!chk.ok) throw StarPropertyError(*chk.violation);
  const int n = sys.ground_size(), m = sys.set_count();
  PseudolineSystem ps;
  ps.n = n;
  ps.m = m;
  ps.rank.resize(static_cast<std::size_t>(n + 1) * m);
  ps.zero_level.assign(n + 1, m);
  std::vector<int> ord(m), next;
  for (int i = 0; i < m; ++i) ord[i] = i, ps.rank[i] = i;
  std::vector<char> prev_in(m, 0);
  for (int k = 0; k < n; ++k) {
    regroup(sys, k, ord, prev_in, next, ps.zero_level[k + 1]);
    ord.swap(next);
    for (int t = 0; t < m; ++t) ps.rank[static_cast<std::size_t>(k + 1) * m + ord[t]] = t;
  }
  return ps;
}

bool curve_below_by_rule(const MembershipSystem& sys, int k, int i, int j) {
  if (i == j) return false;
  if (i < j) return k < sys.first_difference(i, j);
  return k >= sys.first_difference(j, i);
}

bool IntervalRepr::contains(int k) const {
  auto it = std::upper_bound(iv.begin(), iv.end(), k, [](int v, const Interval& x) { return v < x.lo; });
  return it != iv.begin() && std::prev(it)->hi >= k;
}

int IntervalRepr::next_member(int k) const {
  auto it = std::lower_bound(iv.begin(), iv.end(), k, [](const Interval& x, int v) { return x.hi < v; });
  if (it == iv.end()) return -1;
  return std::max(it->lo, k);
}

int IntervalRepr::next_gap(int k) const {
  auto it = std::lower_bound(iv.begin(), iv.end(), k, [](const Interval& x, int v) { return x.hi < v; });
  if (it == iv.end() || it->lo > k) return k;
  return it->hi + 1;
}

std::size_t IntervalRepr::count() const {
  std::size_t c = 0;
  for (const auto& x : iv) c += x.hi - x.lo + 1;
  return c;
}

IntervalRepr IntervalRepr::from_sorted(std::span<const int> members) {
  IntervalRepr r;
  for (int k : members) {
    if (!r.iv.empty() && r.iv.back().hi + 1 == k) r.iv.back().hi = k;
    else r.iv.push_back({k, k});
  }
  return r;
}

IntervalRepr IntervalRepr::from_bits(std::span<const std::uint64_t> bits, int n) {
  IntervalRepr r;
  for (int k = 0; k < n; ++k) {
    if (!((bits[k >> 6] >> (k & 63)) & 1u)) continue;
    if (!r.iv.empty() && r.iv.back().hi + 1 == k) r.iv.back().hi = k;
    else r.iv.push_back({k, k});
  }
  return r;
}

IntervalOracle::IntervalOracle(int ground, std::vector<IntervalRepr> sets, std::vector<int> point_pos,
                               std::vector<int> curve_pos)
    : ground_(ground), sets_(std::move(sets)), point_pos_(std::move(point_pos)), curve_pos_(std::move(curve_pos)) {
  const std::size_t m = sets_.size();
  good_.assign(m, 1);
  bad_bits_.resize(m);
  if (m == 0) return;
  std::vector<std::size_t> counts(m);
  for (std::size_t i = 0; i < m; ++i) counts[i] = sets_[i].iv.size();
  auto sorted = counts;
  std::nth_element(sorted.begin(), sorted.begin() + (m - 1) / 2, sorted.end());
  std::size_t median = sorted[(m - 1) / 2];
  const int words = (ground_ + 63) / 64;
  for (std::size_t i = 0; i < m; ++i) {
    if (counts[i] <= median) continue;
    good_[i] = 0;
    auto& b = bad_bits_[i];
    b.assign(words, 0);
    for (const auto& x : sets_[i].iv)
      for (int k = x.lo; k <= x.hi; ++k) b[k >> 6] |= std::uint64_t{1} << (k & 63);
  }
}

bool IntervalOracle::below(int p, int s) const {
  ++o1_;
  return sets_[curve_pos_[s]].contains(point_pos_[p]);
}

int IntervalOracle::first_difference(int i, int j) const {
  const auto& A = sets_[i];
  const auto& B = sets_[j];
  if (good_[i]) {
    for (const auto& x : A.iv) {
      int g = B.next_gap(x.lo);
      if (g <= x.hi) return g;
    }
    return ground_;
  }
  if (good_[j]) {
    int start = 0;
    for (const auto& x : B.iv) {
      if (start < x.lo) {
        int y = A.next_member(start);
        if (y >= 0 && y < x.lo) return y;
      }
      start = x.hi + 1;
    }
    if (start < ground_) {
      int y = A.next_member(start);
      if (y >= 0) return y;
    }
    return ground_;
  }
  const auto& a = bad_bits_[i];
  const auto& b = bad_bits_[j];
  for (std::size_t w = 0; w < a.size(); ++w) {
    std::uint64_t d = a[w] & ~b[w];
    if (d) return static_cast<int>(w * 64) + std::countr_zero(d);
  }
  return ground_;
}

bool IntervalOracle::curve_below(int p, int a, int b) const {
  ++o2_;
  int i = curve_pos_[a], j = curve_pos_[b], k = point_pos_[p];
  if (i == j) return false;
  if (i < j) return k < first_difference(i, j);
  return k >= first_difference(j, i);
}

ScalarOracle::ScalarOracle(std::vector<double> phi, std::vector<double> psi, bool closed)
    : phi_(std::move(phi)), psi_(std::move(psi)), closed_(closed) {}

bool ScalarOracle::below(int p, int s) const {
  ++o1_;
  return closed_ ? phi_[p] <= psi_[s] : phi_[p] < psi_[s];
}

bool ScalarOracle::curve_below(int, int a, int b) const {
  ++o2_;
  return psi_[a] < psi_[b] || (psi_[a] == psi_[b] && a < b);
}

LineOracle::LineOracle(std::vector<std::array<double, 2>> points, std::vector<Line> lines)
    : pts_(std::move(points)), lines_(std::move(lines)) {}

bool LineOracle::below(int p, int s) const {
  ++o1_;
  return pts_[p][1] < at(s, pts_[p][0]);
}

bool LineOracle::curve_below(int p, int a, int b) const {
  ++o2_;
  double x = pts_[p][0];
  double ya = at(a, x), yb = at(b, x);
  return ya < yb || (ya == yb && a < b);
}

}  // namespace gdiam
