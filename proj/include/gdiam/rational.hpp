#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace gdiam {

using Rat = mpq_class;

// gmpxx leaves Rat(n, d) unreduced; comparisons need canonical values.
inline Rat rat(long n, long d) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

// Accepts "num/den", a plain integer, or a decimal literal such as "0.25".
Rat parse_rational(std::string_view text);

// Always "num/den", canonical (reduced, positive denominator).
std::string format_rational(const Rat& r);

inline double to_double(const Rat& r) { return r.get_d(); }
inline double to_double(double v) { return v; }

// Exact conversion; every finite double is a dyadic rational.
inline Rat to_rational(double v) { return Rat(v); }

}  // namespace gdiam
