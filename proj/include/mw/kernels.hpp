#pragma once

// SpMV and BLAS-1 kernels over the five arithmetics.
//
// Vectors are contiguous arrays of the policy's value_type (array of
// structures). Matrix entries stay FP64 and enter through the policy's mixed
// FP64 x multiword multiply; all accumulation happens in the policy's
// arithmetic.
//
// Reproducibility rules:
//   spmv   each output element is accumulated left to right over its row,
//          so the result does not depend on the thread count.
//   dot    the index range is cut into `partitions` contiguous blocks, each
//          summed in order, and the block sums are combined in ascending
//          block order. One partition is the plain sequential sum.
//
// Unless documented as in-place, inputs and outputs must not alias.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "mw/arithmetic.hpp"
#include "mw/multiword.hpp"
#include "mw/sparse.hpp"

namespace mw {

template <typename V>
using MultiwordVector = std::vector<V>;

namespace detail {

inline void require_same_length(std::size_t a, std::size_t b, const char* op) {
  if (a != b) throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}

inline int clamp_threads(int threads) { return threads < 1 ? 1 : threads; }

}  // namespace detail

template <typename A>
MultiwordVector<typename A::value_type> promote(std::span<const double> x) {
  MultiwordVector<typename A::value_type> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = A::from_fp64(x[i]);
  return out;
}

template <typename A>
std::vector<double> collapse(std::span<const typename A::value_type> x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = A::to_fp64(x[i]);
  return out;
}

// y = A x
template <typename A>
void spmv(const CsrMatrix& m, std::span<const typename A::value_type> x,
          std::span<typename A::value_type> y, int threads = 1) {
  using V = typename A::value_type;
  detail::require_same_length(m.cols(), x.size(), "spmv");
  detail::require_same_length(m.rows(), y.size(), "spmv");
  const auto rp = m.row_ptr();
  const auto ci = m.col_idx();
  const auto val = m.values();
  const auto rows = static_cast<std::ptrdiff_t>(m.rows());
#pragma omp parallel for schedule(static) num_threads(detail::clamp_threads(threads))
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const std::size_t begin = rp[static_cast<std::size_t>(i)];
    const std::size_t end = rp[static_cast<std::size_t>(i) + 1];
    V acc = A::from_fp64(0.0);
    if (begin != end) {
      acc = A::scale(val[begin], x[ci[begin]]);
      for (std::size_t k = begin + 1; k < end; ++k) acc = A::add(acc, A::scale(val[k], x[ci[k]]));
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
}

template <typename A>
typename A::value_type dot(std::span<const typename A::value_type> x,
                           std::span<const typename A::value_type> y, int partitions = 1) {
  using V = typename A::value_type;
  detail::require_same_length(x.size(), y.size(), "dot");
  const std::size_t n = x.size();
  const int parts = detail::clamp_threads(partitions);
  std::vector<V> partial(static_cast<std::size_t>(parts), A::from_fp64(0.0));
#pragma omp parallel for schedule(static, 1) num_threads(parts)
  for (int p = 0; p < parts; ++p) {
    const std::size_t begin = n * static_cast<std::size_t>(p) / static_cast<std::size_t>(parts);
    const std::size_t end = n * static_cast<std::size_t>(p + 1) / static_cast<std::size_t>(parts);
    if (begin == end) continue;
    V acc = A::mul(x[begin], y[begin]);
    for (std::size_t i = begin + 1; i < end; ++i) acc = A::add(acc, A::mul(x[i], y[i]));
    partial[static_cast<std::size_t>(p)] = acc;
  }
  V total = partial[0];
  for (std::size_t p = 1; p < partial.size(); ++p) total = A::add(total, partial[p]);
  return total;
}

// y <- y + alpha x, in place on y.
template <typename A>
void axpy(const typename A::value_type& alpha, std::span<const typename A::value_type> x,
          std::span<typename A::value_type> y, int threads = 1) {
  detail::require_same_length(x.size(), y.size(), "axpy");
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) num_threads(detail::clamp_threads(threads))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    y[k] = A::add(y[k], A::mul(alpha, x[k]));
  }
}

// p <- r + beta p, in place on p.
template <typename A>
void scal_then_add(const typename A::value_type& beta, std::span<typename A::value_type> p,
                   std::span<const typename A::value_type> r, int threads = 1) {
  detail::require_same_length(p.size(), r.size(), "scal_then_add");
  const auto n = static_cast<std::ptrdiff_t>(p.size());
#pragma omp parallel for schedule(static) num_threads(detail::clamp_threads(threads))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    p[k] = A::add(r[k], A::mul(beta, p[k]));
  }
}

// r <- b - q with b in FP64.
template <typename A>
void residual_from(std::span<const double> b, std::span<const typename A::value_type> q,
                   std::span<typename A::value_type> r, int threads = 1) {
  detail::require_same_length(b.size(), q.size(), "residual_from");
  detail::require_same_length(b.size(), r.size(), "residual_from");
  const auto n = static_cast<std::ptrdiff_t>(b.size());
#pragma omp parallel for schedule(static) num_threads(detail::clamp_threads(threads))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    r[k] = A::add_fp64(b[k], -q[k]);
  }
}

// Error-free per element; a no-op outside the quasi modes.
template <typename A>
void normalize_vector(std::span<typename A::value_type> v, int threads = 1) {
  if constexpr (A::quasi) {
    const auto n = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for schedule(static) num_threads(detail::clamp_threads(threads))
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      v[k] = A::normalize(v[k]);
    }
  } else {
    (void)v;
    (void)threads;
  }
}

// sqrt of the FP64 sum of squared collapsed elements, sequential order.
template <typename A>
double norm2_fp64(std::span<const typename A::value_type> x) {
  double s = 0.0;
  for (const auto& v : x) {
    const double c = A::to_fp64(v);
    s += c * c;
  }
  return std::sqrt(s);
}

inline double norm2_fp64(std::span<const double> x) { return norm2_fp64<Fp64Arith>(x); }

// ---------------------------------------------------------------------------
// Triple-word reporting metrics. These never feed back into a solver's
// control flow.

namespace detail {

// Quasi inputs may overlap; fold the words through triple-word addition so
// the operands of tw_add/tw_mul are normalized.
inline TripleWord renormalized(const TripleWord& x) {
  TripleWord t{x.w0, 0.0, 0.0};
  t = dxtw_add(x.w1, t);
  return dxtw_add(x.w2, t);
}

inline double tw_ratio_sqrt(const TripleWord& num, const TripleWord& den) {
  if (to_fp64(den) == 0.0) return to_fp64(num) == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(to_fp64(tw_div(num, den)));
}

}  // namespace detail

// ||x - x_star||_2 / ||x_star||_2 accumulated in triple-word.
template <typename A>
double relative_error_norm_tw(std::span<const typename A::value_type> x,
                              std::span<const double> x_star) {
  detail::require_same_length(x.size(), x_star.size(), "relative_error_norm_tw");
  TripleWord num{}, den{};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const TripleWord xi = detail::renormalized(A::to_triple(x[i]));
    const TripleWord d = dxtw_add(-x_star[i], xi);
    num = tw_add(num, tw_mul(d, d));
    const TripleWord s{x_star[i], 0.0, 0.0};
    den = tw_add(den, tw_mul(s, s));
  }
  return detail::tw_ratio_sqrt(num, den);
}

// ||b - A x||_2 / ||b||_2 accumulated in triple-word.
template <typename A>
double true_residual_norm_tw(const CsrMatrix& m, std::span<const typename A::value_type> x,
                             std::span<const double> b, int threads = 1) {
  detail::require_same_length(m.cols(), x.size(), "true_residual_norm_tw");
  detail::require_same_length(m.rows(), b.size(), "true_residual_norm_tw");
  std::vector<TripleWord> xt(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xt[i] = detail::renormalized(A::to_triple(x[i]));

  std::vector<TripleWord> res(m.rows());
  const auto rp = m.row_ptr();
  const auto ci = m.col_idx();
  const auto val = m.values();
  const auto rows = static_cast<std::ptrdiff_t>(m.rows());
#pragma omp parallel for schedule(static) num_threads(detail::clamp_threads(threads))
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    TripleWord acc{b[i], 0.0, 0.0};
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) acc = tw_add(acc, dxtw_mul(-val[k], xt[ci[k]]));
    res[i] = acc;
  }
  TripleWord num{}, den{};
  for (std::size_t i = 0; i < res.size(); ++i) {
    num = tw_add(num, tw_mul(res[i], res[i]));
    const TripleWord s{b[i], 0.0, 0.0};
    den = tw_add(den, tw_mul(s, s));
  }
  return detail::tw_ratio_sqrt(num, den);
}

}  // namespace mw
