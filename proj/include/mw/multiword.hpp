#pragma once

// Double-word and triple-word arithmetic built from the error-free
// transformations in eft.hpp, together with their quasi variants.
//
// A DoubleWord holds w0 + w1 and a TripleWord holds w0 + w1 + w2 as
// unevaluated sums. Values come in two states that are not tracked at run
// time:
//
//   normalized  fl(w0 + w1) == w0 (and fl(w1 + w2) == w1 for three words).
//               Produced by the dw_* and tw_* operations.
//   quasi       words may overlap; only the represented value is meaningful.
//               Produced by the qdw_* and qtw_* operations, which skip the
//               trailing renormalization to save flops.
//
// Flop counts (FMA = 1):
//   dw_add 11, dw_mul 7, qdw_add 8, qdw_mul 4,
//   qtw_add 21, qtw_mul 24, dxqtw_mul 12,
//   tw_add <= 48 and tw_mul <= 42 plus magnitude comparisons.
//
// Subtraction is addition of the negated operand. Everything assumes
// round-to-nearest-even and propagates NaN/Inf.

#include <array>
#include <cstddef>

#include "mw/eft.hpp"

namespace mw {

template <typename T>
struct BasicDoubleWord {
  T w0{};
  T w1{};
};

template <typename T>
struct BasicTripleWord {
  T w0{};
  T w1{};
  T w2{};
};

using DoubleWord = BasicDoubleWord<double>;
using TripleWord = BasicTripleWord<double>;

template <typename T>
constexpr bool operator==(const BasicDoubleWord<T>& a, const BasicDoubleWord<T>& b) {
  return a.w0 == b.w0 && a.w1 == b.w1;
}

template <typename T>
constexpr bool operator==(const BasicTripleWord<T>& a, const BasicTripleWord<T>& b) {
  return a.w0 == b.w0 && a.w1 == b.w1 && a.w2 == b.w2;
}

template <typename T>
inline BasicDoubleWord<T> operator-(const BasicDoubleWord<T>& a) {
  return {-a.w0, -a.w1};
}

template <typename T>
inline BasicTripleWord<T> operator-(const BasicTripleWord<T>& a) {
  return {-a.w0, -a.w1, -a.w2};
}

// High-to-low summation in FP64.
template <typename T>
inline T to_fp64(const BasicDoubleWord<T>& a) {
  return a.w0 + a.w1;
}

template <typename T>
inline T to_fp64(const BasicTripleWord<T>& a) {
  return (a.w0 + a.w1) + a.w2;
}

namespace detail {

// QuickTwoSum without the debug precondition check; callers guarantee the
// ordering structurally.
template <typename T>
inline Pair<T> fast_two_sum(T a, T b) {
  T x = a + b;
  T y = (a - x) + b;
  return {x, y};
}

// Stable insertion sort by decreasing magnitude. Comparisons only.
template <typename T, std::size_t N>
inline void sort_by_magnitude(std::array<T, N>& v) {
  for (std::size_t i = 1; i < N; ++i) {
    T key = v[i];
    std::size_t j = i;
    while (j > 0 && magnitude(v[j - 1]) < magnitude(key)) {
      v[j] = v[j - 1];
      --j;
    }
    v[j] = key;
  }
}

// Bottom-up chain of TwoSums. e[0] is fl(sum); e[1..] are the rounding
// errors, e[k] belonging to the addition of x[k-1].
template <typename T, std::size_t N>
inline std::array<T, N> vec_sum(const std::array<T, N>& x) {
  std::array<T, N> e{};
  T s = x[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) {
    auto [hi, lo] = two_sum(x[i], s);
    s = hi;
    e[i + 1] = lo;
  }
  e[0] = s;
  return e;
}

// Top-down Fast2Sum renormalization producing M words. The first Count
// entries of e are used. A word is closed as soon as a nonzero error falls
// out of it; zero errors keep accumulating into the current word.
template <std::size_t M, std::size_t Count, typename T, std::size_t N>
inline std::array<T, M> vec_sum_err_branch(const std::array<T, N>& e) {
  static_assert(Count <= N && Count >= 2);
  std::array<T, M> r{};
  std::size_t j = 0;
  T eps = e[0];
  for (std::size_t i = 0; i + 1 < Count; ++i) {
    auto [s, err] = fast_two_sum(eps, e[i + 1]);
    r[j] = s;
    if (err != T(0)) {
      if (j + 1 >= M) return r;
      ++j;
      eps = err;
    } else {
      eps = s;
    }
  }
  r[j] = eps;
  return r;
}

// The renormalization above only leaves the words ulp-nonoverlapping. Two
// more Fast2Sums give fl(w0 + w1) == w0 and fl(w1 + w2) == w1.
template <typename T>
inline BasicTripleWord<T> tighten(const std::array<T, 3>& r) {
  auto [w0, t] = fast_two_sum(r[0], r[1]);
  auto [w1, w2] = fast_two_sum(t, r[2]);
  return {w0, w1, w2};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Double-word

template <typename T>
inline BasicDoubleWord<T> dw_add(const BasicDoubleWord<T>& a, const BasicDoubleWord<T>& b) {
  auto [s, e] = two_sum(a.w0, b.w0);
  e = e + a.w1 + b.w1;
  auto [c0, c1] = detail::fast_two_sum(s, e);
  return {c0, c1};
}

template <typename T>
inline BasicDoubleWord<T> dw_mul(const BasicDoubleWord<T>& a, const BasicDoubleWord<T>& b) {
  auto [p, e] = two_prod_fma(a.w0, b.w0);
  e = fma(a.w0, b.w1, e);
  e = fma(a.w1, b.w0, e);
  auto [c0, c1] = detail::fast_two_sum(p, e);
  return {c0, c1};
}

template <typename T>
inline BasicDoubleWord<T> qdw_add(const BasicDoubleWord<T>& a, const BasicDoubleWord<T>& b) {
  auto [s, e] = two_sum(a.w0, b.w0);
  e = e + a.w1 + b.w1;
  return {s, e};
}

template <typename T>
inline BasicDoubleWord<T> qdw_mul(const BasicDoubleWord<T>& a, const BasicDoubleWord<T>& b) {
  auto [p, e] = two_prod_fma(a.w0, b.w0);
  e = fma(a.w0, b.w1, e);
  e = fma(a.w1, b.w0, e);
  return {p, e};
}

// Mixed FP64 x double-word: the full algorithms with the absent low word of
// `a` set to zero and the dead operations removed.

template <typename T>
inline BasicDoubleWord<T> dxdw_add(T a, const BasicDoubleWord<T>& b) {
  auto [s, e] = two_sum(a, b.w0);
  e = e + b.w1;
  auto [c0, c1] = detail::fast_two_sum(s, e);
  return {c0, c1};
}

template <typename T>
inline BasicDoubleWord<T> dxqdw_add(T a, const BasicDoubleWord<T>& b) {
  auto [s, e] = two_sum(a, b.w0);
  e = e + b.w1;
  return {s, e};
}

template <typename T>
inline BasicDoubleWord<T> dxdw_mul(T a, const BasicDoubleWord<T>& b) {
  auto [p, e] = two_prod_fma(a, b.w0);
  e = fma(a, b.w1, e);
  auto [c0, c1] = detail::fast_two_sum(p, e);
  return {c0, c1};
}

template <typename T>
inline BasicDoubleWord<T> dxqdw_mul(T a, const BasicDoubleWord<T>& b) {
  auto [p, e] = two_prod_fma(a, b.w0);
  e = fma(a, b.w1, e);
  return {p, e};
}

// Error-free. The larger-magnitude word is moved to the front first so the
// QuickTwoSum precondition holds even for heavily overlapped quasi values.
template <typename T>
inline BasicDoubleWord<T> normalize_dw(const BasicDoubleWord<T>& a) {
  T hi = a.w0;
  T lo = a.w1;
  if (magnitude(hi) < magnitude(lo)) {
    T t = hi;
    hi = lo;
    lo = t;
  }
  auto [c0, c1] = detail::fast_two_sum(hi, lo);
  return {c0, c1};
}

// ---------------------------------------------------------------------------
// Triple-word

// Merge by magnitude, VecSum over all six words, then renormalize the five
// leading terms into three words. The last VecSum error lies below the
// triple-word precision and is dropped.
template <typename T>
inline BasicTripleWord<T> tw_add(const BasicTripleWord<T>& a, const BasicTripleWord<T>& b) {
  std::array<T, 6> z{a.w0, a.w1, a.w2, b.w0, b.w1, b.w2};
  detail::sort_by_magnitude(z);
  auto e = detail::vec_sum(z);
  return detail::tighten(detail::vec_sum_err_branch<3, 5>(e));
}

// Fast triple-word product. Terms of order u^3 and below (a1*b2, a2*b1,
// a2*b2 and the errors of the third-order products) are not formed.
template <typename T>
inline BasicTripleWord<T> tw_mul(const BasicTripleWord<T>& a, const BasicTripleWord<T>& b) {
  auto [z00, z00e] = two_prod_fma(a.w0, b.w0);
  auto [z01, z01e] = two_prod_fma(a.w0, b.w1);
  auto [z10, z10e] = two_prod_fma(a.w1, b.w0);
  auto v = detail::vec_sum(std::array<T, 3>{z00, z01, z10});
  auto [c1, c2] = two_sum(v[1], z00e);
  T t = fma(a.w0, b.w2, fma(a.w1, b.w1, fma(a.w2, b.w0, z01e + z10e)));
  T c3 = (t + v[2]) + c2;
  return detail::tighten(detail::vec_sum_err_branch<3, 3>(std::array<T, 3>{v[0], c1, c3}));
}

template <typename T>
inline BasicTripleWord<T> qtw_add(const BasicTripleWord<T>& a, const BasicTripleWord<T>& b) {
  auto [c1, e1] = two_sum(a.w0, b.w0);
  auto [t2, e2] = two_sum(a.w1, b.w1);
  auto [c2, e3] = two_sum(t2, e1);
  T c3 = a.w2 + b.w2 + e2 + e3;
  return {c1, c2, c3};
}

template <typename T>
inline BasicTripleWord<T> qtw_mul(const BasicTripleWord<T>& a, const BasicTripleWord<T>& b) {
  auto [c1, e1] = two_prod_fma(a.w0, b.w0);
  auto [t2, e2] = two_prod_fma(a.w0, b.w1);
  auto [t3, e3] = two_prod_fma(a.w1, b.w0);
  auto [s2, e4] = two_sum(t2, t3);
  auto [c2, e5] = two_sum(s2, e1);
  T c3 = fma(a.w2, b.w0, e2) + fma(a.w1, b.w1, e3) + fma(a.w0, b.w2, e4) + e5;
  return {c1, c2, c3};
}

template <typename T>
inline BasicTripleWord<T> dxtw_add(T a, const BasicTripleWord<T>& b) {
  std::array<T, 4> z{a, b.w0, b.w1, b.w2};
  detail::sort_by_magnitude(z);
  auto e = detail::vec_sum(z);
  return detail::tighten(detail::vec_sum_err_branch<3, 4>(e));
}

template <typename T>
inline BasicTripleWord<T> dxtw_mul(T a, const BasicTripleWord<T>& b) {
  auto [z00, z00e] = two_prod_fma(a, b.w0);
  auto [z01, z01e] = two_prod_fma(a, b.w1);
  auto [v0, v1] = two_sum(z00, z01);
  auto [c1, c2] = two_sum(v1, z00e);
  T c3 = fma(a, b.w2, z01e) + c2;
  return detail::tighten(detail::vec_sum_err_branch<3, 3>(std::array<T, 3>{v0, c1, c3}));
}

template <typename T>
inline BasicTripleWord<T> dxqtw_add(T a, const BasicTripleWord<T>& b) {
  auto [c1, e1] = two_sum(a, b.w0);
  auto [c2, e3] = two_sum(b.w1, e1);
  T c3 = b.w2 + e3;
  return {c1, c2, c3};
}

template <typename T>
inline BasicTripleWord<T> dxqtw_mul(T a, const BasicTripleWord<T>& b) {
  auto [c1, e1] = two_prod_fma(a, b.w0);
  auto [t2, e2] = two_prod_fma(a, b.w1);
  auto [c2, e5] = two_sum(t2, e1);
  T c3 = fma(a, b.w2, e2) + e5;
  return {c1, c2, c3};
}

// VecSum3: two chained TwoSums. Error-free; reduces but does not eliminate
// overlap.
template <typename T>
inline BasicTripleWord<T> normalize_tw(const BasicTripleWord<T>& a) {
  auto [c1, t2] = two_sum(a.w0, a.w1);
  auto [c2, c3] = two_sum(t2, a.w2);
  return {c1, c2, c3};
}

// ---------------------------------------------------------------------------
// Division
//
// Long division on the leading word: each quotient digit is the FP64
// quotient of the current remainder's leading value by b's, and the
// remainder is updated with the mixed multiply and the same-family add.
// One digit beyond the output width is produced before recombination.

template <typename T>
inline BasicDoubleWord<T> dw_div(const BasicDoubleWord<T>& a, const BasicDoubleWord<T>& b) {
  T den = to_fp64(b);
  if (den == T(0)) return {to_fp64(a) / den, T(0)};
  T q0 = a.w0 / den;
  auto r = dw_add(a, dxdw_mul(-q0, b));
  T q1 = r.w0 / den;
  r = dw_add(r, dxdw_mul(-q1, b));
  T q2 = r.w0 / den;
  auto q = detail::fast_two_sum(q0, q1);
  return dxdw_add(q2, BasicDoubleWord<T>{q.hi, q.lo});
}

template <typename T>
inline BasicDoubleWord<T> qdw_div(const BasicDoubleWord<T>& a, const BasicDoubleWord<T>& b) {
  T den = to_fp64(b);
  if (den == T(0)) return {to_fp64(a) / den, T(0)};
  T q0 = to_fp64(a) / den;
  auto r = qdw_add(a, dxqdw_mul(-q0, b));
  T q1 = to_fp64(r) / den;
  r = qdw_add(r, dxqdw_mul(-q1, b));
  T q2 = to_fp64(r) / den;
  return dxqdw_add(q2, BasicDoubleWord<T>{q0, q1});
}

template <typename T>
inline BasicTripleWord<T> tw_div(const BasicTripleWord<T>& a, const BasicTripleWord<T>& b) {
  T den = to_fp64(b);
  if (den == T(0)) return {to_fp64(a) / den, T(0), T(0)};
  T q0 = a.w0 / den;
  auto r = tw_add(a, dxtw_mul(-q0, b));
  T q1 = r.w0 / den;
  r = tw_add(r, dxtw_mul(-q1, b));
  T q2 = r.w0 / den;
  r = tw_add(r, dxtw_mul(-q2, b));
  T q3 = r.w0 / den;
  auto q = dxtw_add(q1, BasicTripleWord<T>{q0, T(0), T(0)});
  q = dxtw_add(q2, q);
  return dxtw_add(q3, q);
}

template <typename T>
inline BasicTripleWord<T> qtw_div(const BasicTripleWord<T>& a, const BasicTripleWord<T>& b) {
  T den = to_fp64(b);
  if (den == T(0)) return {to_fp64(a) / den, T(0), T(0)};
  T q0 = to_fp64(a) / den;
  auto r = qtw_add(a, dxqtw_mul(-q0, b));
  T q1 = to_fp64(r) / den;
  r = qtw_add(r, dxqtw_mul(-q1, b));
  T q2 = to_fp64(r) / den;
  r = qtw_add(r, dxqtw_mul(-q2, b));
  T q3 = to_fp64(r) / den;
  auto [s0, s1] = two_sum(q0, q1);
  auto q = dxqtw_add(q2, BasicTripleWord<T>{s0, s1, T(0)});
  return dxqtw_add(q3, q);
}

}  // namespace mw
