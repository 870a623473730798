#include "gdiam/cutting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

namespace gdiam {

int CuttingParams::sample_size() const {
  return static_cast<int>(std::ceil(c0 * rho * std::log2(static_cast<double>(rho))));
}

void CuttingParams::validate() const {
  if (c0 < 1 || rho < 2 || m0 < 1 || max_trials < 1) throw std::invalid_argument("invalid cutting parameters");
}

namespace {

enum class Side { Below, Above, Cross };

struct Trapezoid {
  std::vector<int> pts;  // left to right
  int lo = -1, hi = -1;  // bounding sample curves (ids), -1 when unbounded
  std::vector<int> below, cross;
};

class Search {
 public:
  Search(std::span<const PseudolineOracle* const> levels, int n, const CuttingParams& prm, std::uint64_t seed,
         bool report_all, CuttingResult& out)
      : levels_(levels), prm_(prm), rng_(seed), report_all_(report_all), out_(out), sample_pos_(n, -1) {}

  void run(int D, std::vector<int> pts, std::vector<int> crv) {
    if (stop_ || pts.empty() || crv.empty()) return;
    ++out_.stats.nodes;
    if (D == 0) {
      for (int p : pts)
        for (int s : crv) emit(p, s);
      return;
    }
    if (static_cast<int>(pts.size()) <= prm_.m0) {
      ++out_.stats.naive_nodes;
      for (int p : pts)
        for (int s : crv)
          if (above_all(D, p, s)) emit(p, s);
      return;
    }
    const PseudolineOracle& L = *levels_[D - 1];
    std::stable_sort(pts.begin(), pts.end(), [&](int a, int b) { return L.x_of(a) < L.x_of(b); });

    std::vector<Trapezoid> traps = cut(L, pts, crv);

    const std::size_t cap = std::max<std::size_t>(1, pts.size() / (static_cast<std::size_t>(prm_.rho) * prm_.rho));
    for (auto& tz : traps) {
      for (std::size_t b = 0; b < tz.pts.size() && !stop_; b += cap) {
        std::size_t e = std::min(tz.pts.size(), b + cap);
        std::vector<int> chunk(tz.pts.begin() + b, tz.pts.begin() + e);
        std::vector<int> below = tz.below, cross;
        if (b == 0 && e == tz.pts.size()) {
          cross = tz.cross;
        } else {
          for (int s : tz.cross) {
            Side sd = classify(L, chunk.front(), chunk.back(), tz.lo, tz.hi, s);
            if (sd == Side::Below) below.push_back(s);
            else if (sd == Side::Cross) cross.push_back(s);
          }
        }
        run(D, chunk, std::move(cross));
        run(D - 1, std::move(chunk), std::move(below));
      }
    }
  }

 private:
  void emit(int p, int s) {
    if (stop_) return;
    out_.exists = true;
    out_.pairs.emplace_back(p, s);
    if (!report_all_) stop_ = true;
    if (out_.pairs.size() >= prm_.report_limit) {
      out_.truncated = true;
      stop_ = true;
    }
  }

  bool above_all(int D, int p, int s) const {
    for (int j = D - 1; j >= 0; --j)
      if (levels_[j]->below(p, s)) return false;
    return true;
  }

  // A curve outside the sample is below the trapezoid iff it is below the
  // lower boundary at both ends; it cannot dip back in without a second crossing.
  static Side classify(const PseudolineOracle& L, int pl, int pr, int lo, int hi, int s) {
    if (lo >= 0 && L.curve_below(pl, s, lo) && L.curve_below(pr, s, lo)) return Side::Below;
    if (hi >= 0 && L.curve_below(pl, hi, s) && L.curve_below(pr, hi, s)) return Side::Above;
    return Side::Cross;
  }

  std::vector<Trapezoid> cut(const PseudolineOracle& L, const std::vector<int>& pts, const std::vector<int>& crv) {
    const int r = prm_.sample_size();
    const std::size_t limit_num = crv.size();  // crossing * rho must stay <= |S|
    for (int trial = 1;; ++trial) {
      ++out_.stats.trials;
      std::vector<int> sample;
      if (static_cast<int>(crv.size()) <= r) {
        sample = crv;
      } else {
        sample.reserve(r);
        std::sample(crv.begin(), crv.end(), std::back_inserter(sample), r, rng_);
      }
      for (std::size_t t = 0; t < sample.size(); ++t) sample_pos_[sample[t]] = static_cast<int>(t);

      std::vector<Trapezoid> traps = locate(L, pts, sample);
      std::size_t worst = 0;
      for (auto& tz : traps) {
        for (int s : crv) {
          Side sd;
          int t = sample_pos_[s];
          if (t >= 0) sd = below_sample_[&tz - traps.data()][t] ? Side::Below : Side::Above;
          else sd = classify(L, tz.pts.front(), tz.pts.back(), tz.lo, tz.hi, s);
          if (sd == Side::Below) tz.below.push_back(s);
          else if (sd == Side::Cross) tz.cross.push_back(s);
        }
        worst = std::max(worst, tz.cross.size());
      }
      for (int s : sample) sample_pos_[s] = -1;

      bool ok = worst * static_cast<std::size_t>(prm_.rho) <= limit_num;
      if (ok) {
        ++out_.stats.samples_accepted;
        out_.stats.trapezoids += traps.size();
        double ratio = static_cast<double>(worst) * prm_.rho / static_cast<double>(limit_num);
        out_.stats.max_crossing_ratio = std::max(out_.stats.max_crossing_ratio, ratio);
        if (prm_.test_mode) audit(L, traps, crv);
        return traps;
      }
      if (trial >= prm_.max_trials)
        throw CuttingError("cutting: no acceptable sample after " + std::to_string(trial) +
                           " trials (oracle does not describe pseudolines?)");
    }
  }

  // Groups points by (sample curves below, curve just below, curve just above).
  std::vector<Trapezoid> locate(const PseudolineOracle& L, const std::vector<int>& pts, const std::vector<int>& sample) {
    const int r = static_cast<int>(sample.size());
    std::map<std::vector<int>, int> key_to_trap;
    std::vector<Trapezoid> traps;
    below_sample_.clear();
    std::vector<char> key(r);
    for (int p : pts) {
      int lo = -1, hi = -1;
      for (int t = 0; t < r; ++t) {
        int s = sample[t];
        bool under = !L.below(p, s);
        key[t] = under;
        if (under) {
          if (lo < 0 || L.curve_below(p, sample[lo], s)) lo = t;
        } else {
          if (hi < 0 || L.curve_below(p, s, sample[hi])) hi = t;
        }
      }
      std::vector<int> full(key.begin(), key.end());
      full.push_back(lo);
      full.push_back(hi);
      auto [it, fresh] = key_to_trap.emplace(std::move(full), static_cast<int>(traps.size()));
      if (fresh) {
        Trapezoid tz;
        tz.lo = lo >= 0 ? sample[lo] : -1;
        tz.hi = hi >= 0 ? sample[hi] : -1;
        traps.push_back(std::move(tz));
        below_sample_.push_back(key);
      }
      traps[it->second].pts.push_back(p);
    }
    return traps;
  }

  void audit(const PseudolineOracle& L, const std::vector<Trapezoid>& traps, const std::vector<int>& crv) {
    for (const auto& tz : traps) {
      std::size_t mixed = 0;
      std::vector<char> is_below(sample_pos_.size(), 0), is_cross(sample_pos_.size(), 0);
      for (int s : tz.below) is_below[s] = 1;
      for (int s : tz.cross) is_cross[s] = 1;
      for (int s : crv) {
        bool any_below = false, any_above = false;
        for (int p : tz.pts) (L.below(p, s) ? any_below : any_above) = true;
        if (any_below && any_above) ++mixed;
        if (is_cross[s]) continue;
        // Below the trapezoid means every point is above the curve.
        if (is_below[s] && any_below) ++out_.stats.classification_errors;
        if (!is_below[s] && any_above) ++out_.stats.classification_errors;
      }
      if (mixed * static_cast<std::size_t>(prm_.rho) > crv.size()) ++out_.stats.quality_violations;
    }
  }

  std::span<const PseudolineOracle* const> levels_;
  const CuttingParams& prm_;
  std::mt19937_64 rng_;
  bool report_all_;
  CuttingResult& out_;
  std::vector<int> sample_pos_;
  std::vector<std::vector<char>> below_sample_;  // per trapezoid: sample curve t lies below it
  bool stop_ = false;
};

}  // namespace

CuttingResult cutting_search(std::span<const PseudolineOracle* const> levels, int m, int n,
                             const CuttingParams& params, std::uint64_t seed, bool report_all) {
  params.validate();
  for (const auto* L : levels)
    if (L->point_count() < m || L->curve_count() < n) throw std::invalid_argument("cutting: level smaller than input");
  CuttingResult out;
  std::vector<int> pts(m), crv(n);
  for (int i = 0; i < m; ++i) pts[i] = i;
  for (int i = 0; i < n; ++i) crv[i] = i;
  Search search(levels, n, params, seed, report_all, out);
  search.run(static_cast<int>(levels.size()), std::move(pts), std::move(crv));
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

std::vector<std::pair<int, int>> naive_above_all(std::span<const PseudolineOracle* const> levels, int m, int n) {
  std::vector<std::pair<int, int>> out;
  for (int p = 0; p < m; ++p)
    for (int s = 0; s < n; ++s) {
      bool ok = true;
      for (const auto* L : levels)
        if (L->below(p, s)) {
          ok = false;
          break;
        }
      if (ok) out.emplace_back(p, s);
    }
  return out;
}

}  // namespace gdiam
