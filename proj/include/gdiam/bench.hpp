#pragma once

#include "gdiam/instance.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gdiam {

// diam2-unitcube-bare is the unit-cube decider with retire_covered off.
enum class Alg { Diam2UnitCube, Diam2UnitCubeBare, Diam3UnitCube, Diam2Boxes, Diam2Rects, Diam2Cubes3d };

const char* alg_name(Alg a);
Alg parse_alg(const std::string& s);
std::vector<Alg> all_algs();

struct GenOptions {
  double cube_side = 1.5;   // diam2 unit-cube centers uniform in [0, side)^3
  double cube_side3 = 2.5;  // same for diam3
  // One Q box spanning the whole domain (box algorithms). Without it random
  // multi-scale instances are almost always false and the decider stops at
  // the first witness.
  bool hub = true;
};

// Parts P, Q, R (and S for diam3). Coordinates are multiples of 2^-20, so the
// double deciders and the exact oracle read the same numbers.
// Boxes: sides log-uniform in [0.2, L], corners uniform in [0, L), L = n^(1/3).
Instance random_instance(Alg a, int n, std::uint64_t seed, const GenOptions& opt = {});

struct SolveOptions {
  int g = 0;               // grid parameter; 0 keeps the decider's default
  std::uint64_t seed = 1;  // diam3 cutting stage
  // Rational: every coordinate must convert to double exactly (else throw).
  // Float: coordinates are rounded.
  NumericMode numeric = NumericMode::Rational;
};

struct SolveOutcome {
  bool result = true;
  // (index in the first part, index in the last part) of a failing pair.
  std::optional<std::pair<int, int>> witness;
  std::string stats;  // "key=value" counters separated by spaces
};

// Parts P, Q, R (diam2) or P, Q, R, S (diam3); a single part plays every role.
// Throws std::invalid_argument on a kind, dimension or part mismatch.
SolveOutcome run_solve(const Instance& inst, Alg a, const SolveOptions& opt = {});

struct OracleOutcome {
  bool result = true;
  std::string mode;  // "tripartite", "fourpartite" or "graph"
  std::optional<std::pair<int, int>> witness;
};

// Exact BFS oracle. Parts P, Q, R: common-neighbor check; P, Q, R, S: chain
// check; anything else: whole intersection graph has diameter <= delta.
OracleOutcome run_oracle(const Instance& inst, int delta = 2);

struct BenchRecord {
  std::string alg;
  int n = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  std::int64_t ns = 1;  // > 0
  bool result = false;
  std::string aux;
};

// (n, seed) -> (nanoseconds, result bit).
using TimedRun = std::function<std::pair<std::int64_t, bool>(int n, std::uint64_t seed)>;

std::uint64_t bench_seed(std::uint64_t seed, int n, int rep);

// Throws std::invalid_argument unless ns is strictly increasing and reps >= 3.
std::vector<BenchRecord> run_bench(const std::string& alg, const std::vector<int>& ns, int reps, std::uint64_t seed,
                                   const TimedRun& run);
// Generation and conversion are outside the timed region.
std::vector<BenchRecord> run_bench(Alg a, const std::vector<int>& ns, int reps, std::uint64_t seed,
                                   const SolveOptions& opt = {}, const GenOptions& gen = {});

// Header alg,n,rep,seed,ns,result.
std::string bench_csv(const std::vector<BenchRecord>& records);

double median(std::vector<double> v);

struct ScalingFit {
  double exponent = 0, intercept = 0, r2 = 0;
  std::vector<int> ns;             // every n, increasing
  std::vector<double> median_ns;   // per n
  int skipped = 0;                 // smallest n left out of the fit
};

// Least squares of log(median time) on log n, leaving out the `skip` smallest n.
// Throws std::invalid_argument with fewer than two n left.
ScalingFit fit_scaling(const std::vector<BenchRecord>& records, int skip = 2);

}  // namespace gdiam
