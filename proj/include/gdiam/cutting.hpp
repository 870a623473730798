#pragma once

#include "gdiam/pseudoline.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gdiam {

struct CuttingParams {
  int c0 = 8;           // sample size is ceil(c0 * rho * log2(rho))
  int rho = 4;          // branching
  int m0 = 64;          // at most this many points: naive scan
  int max_trials = 50;  // re-sampling hard cap per sample
  bool test_mode = false;
  std::size_t report_limit = std::numeric_limits<std::size_t>::max();

  int sample_size() const;
  void validate() const;
};

struct CuttingStats {
  std::uint64_t nodes = 0;
  std::uint64_t naive_nodes = 0;
  std::uint64_t samples_accepted = 0;
  std::uint64_t trials = 0;  // sampling attempts, accepted or not
  std::uint64_t trapezoids = 0;
  // Largest (curves meeting a trapezoid) / (|S| / rho) over accepted samples; <= 1 by construction.
  double max_crossing_ratio = 0;
  // Test mode only: trapezoids whose direct recount exceeds |S| / rho, and
  // curves whose below/above classification disagrees with a brute-force O1 scan.
  std::uint64_t quality_violations = 0;
  std::uint64_t classification_errors = 0;

  double mean_trials() const { return samples_accepted ? double(trials) / samples_accepted : 0.0; }
};

class CuttingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CuttingResult {
  bool exists = false;
  std::vector<std::pair<int, int>> pairs;  // (point, curve), sorted
  bool truncated = false;                  // report_limit reached
  CuttingStats stats;
};

// Pairs (p, s) with point p above curve s in every level. All levels share the
// point ids 0..m-1 and curve ids 0..n-1. Level D (the last) is cut first; curves
// entirely below a trapezoid drop to level D-1 with the trapezoid's points.
// With report_all unset the search stops at the first pair.
CuttingResult cutting_search(std::span<const PseudolineOracle* const> levels, int m, int n,
                             const CuttingParams& params, std::uint64_t seed, bool report_all = true);

// Reference: every pair against every level through O1.
std::vector<std::pair<int, int>> naive_above_all(std::span<const PseudolineOracle* const> levels, int m, int n);

}  // namespace gdiam
