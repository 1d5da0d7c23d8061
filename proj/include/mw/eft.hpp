#pragma once

// Error-free transformations on FP64.
//
// Every routine here assumes IEEE binary64 with round-to-nearest-even and a
// correctly rounded fma. NaN and Inf propagate; nothing traps.
//
// All functions are templates over the scalar type so that the same code can
// be instantiated with mw::CountingScalar to audit operation counts. The only
// requirements on T are +, -, *, unary -, comparisons, and an fma(T, T, T)
// reachable by unqualified lookup.

#include <cassert>
#include <cmath>

namespace mw {

/// Unit round-off of FP64 under round-to-nearest.
inline constexpr double unit_roundoff = 0x1p-53;

inline double fma(double a, double b, double c) { return std::fma(a, b, c); }
inline double magnitude(double a) { return std::fabs(a); }

template <typename T>
struct Pair {
  T hi;
  T lo;
};

// x = fl(a+b), y = a + b - x.  6 flops.
template <typename T>
inline Pair<T> two_sum(T a, T b) {
  T x = a + b;
  T z = x - a;
  T y = (a - (x - z)) + (b - z);
  return {x, y};
}

// Requires |a| >= |b| (or b == 0).  3 flops.
template <typename T>
inline Pair<T> quick_two_sum(T a, T b) {
  assert(!(magnitude(a) < magnitude(b)) || b == T(0));
  T x = a + b;
  T y = (a - x) + b;
  return {x, y};
}

// x = fl(a*b), y = a*b - x.  2 flops.  Exact unless a*b is subnormal or
// overflows.
template <typename T>
inline Pair<T> two_prod_fma(T a, T b) {
  T x = a * b;
  T y = fma(a, b, -x);
  return {x, y};
}

}  // namespace mw
