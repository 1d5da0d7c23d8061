#include "mw/problemgen.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>

#include "mw/exact.hpp"

namespace mw {

namespace {

// log2 |x| for a nonzero power of two.
int power_of_two_exponent(double x) {
  int e = 0;
  const double f = std::frexp(std::fabs(x), &e);
  if (f != 0.5 || !std::isfinite(x)) {
    throw std::invalid_argument("generate_problem: x_star entries must be nonzero powers of two");
  }
  return e - 1;
}

ExactValue divide_by_power_of_two(const ExactValue& v, double x) {
  const ExactValue s = v.scaled(-power_of_two_exponent(x));
  return x < 0 ? -s : s;
}

ExactValue exact_row_product(const CsrMatrix& a, std::span<const double> x, std::size_t i) {
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  ExactValue s;
  for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) s = s + exact(v[k]) * exact(x[ci[k]]);
  return s;
}

// Adds explicit zero diagonals where the pattern lacks them.
CsrMatrix with_diagonal(const CsrMatrix& a) {
  std::vector<Triplet> t;
  t.reserve(a.nnz() + a.rows());
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    bool has_diag = false;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      t.push_back({i, ci[k], v[k]});
      has_diag = has_diag || ci[k] == i;
    }
    if (!has_diag) t.push_back({i, i, 0.0});
  }
  return csr_from_triplets(a.rows(), a.cols(), std::move(t));
}

std::size_t diagonal_position(const CsrMatrix& a, std::size_t i) {
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  auto first = ci.begin() + static_cast<std::ptrdiff_t>(rp[i]);
  auto last = ci.begin() + static_cast<std::ptrdiff_t>(rp[i + 1]);
  return static_cast<std::size_t>(std::lower_bound(first, last, i) - ci.begin());
}

// Returns nullopt (and the failing row) when some row cannot be corrected.
std::optional<GeneratedProblem> try_diagonal(const CsrMatrix& a_orig, std::span<const double> x,
                                             std::size_t* failed_row) {
  const CsrMatrix a = with_diagonal(a_orig);
  std::vector<double> vals(a.values().begin(), a.values().end());
  std::vector<double> b(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const ExactValue s = exact_row_product(a, x, i);
    const std::size_t d = diagonal_position(a, i);
    const ExactValue diag = exact(vals[d]);

    const double nearest = s.to_fp64();
    bool done = false;
    for (int step = 0; step <= 8 && !done; ++step) {
      // 0, +1, -1, +2, -2, ... ulps around the nearest value
      const int offset = (step + 1) / 2 * (step % 2 == 1 ? 1 : -1);
      double candidate = nearest;
      const double toward = offset > 0 ? INFINITY : -INFINITY;
      for (int k = 0; k < std::abs(offset); ++k) candidate = std::nextafter(candidate, toward);
      if (!std::isfinite(candidate)) continue;
      const ExactValue corrected = diag + divide_by_power_of_two(exact(candidate) - s, x[i]);
      const double c = corrected.to_fp64();
      if (std::isfinite(c) && exact(c) == corrected) {
        vals[d] = c;
        b[i] = candidate;
        done = true;
      }
    }
    if (!done) {
      if (failed_row) *failed_row = i;
      return std::nullopt;
    }
  }
  GeneratedProblem p;
  p.matrix = CsrMatrix(a.rows(), a.cols(), {a.row_ptr().begin(), a.row_ptr().end()},
                       {a.col_idx().begin(), a.col_idx().end()}, std::move(vals));
  p.rhs = std::move(b);
  p.strategy = GenerationStrategy::diagonal;
  return p;
}

GeneratedProblem grid(const CsrMatrix& a, std::span<const double> x) {
  const std::size_t n = a.rows();
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();

  constexpr int kNoGrid = INT_MIN / 4;
  std::vector<int> row_grid(n, kNoGrid);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) s += std::fabs(v[k] * x[ci[k]]);
    // any multiple of 2^g below 2^(g+53) >= 4 s is representable
    if (s > 0.0) row_grid[i] = std::ilogb(s) + 3 - 53;
  }

  std::vector<double> vals(v.begin(), v.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      const std::size_t j = ci[k];
      const int e = std::max(row_grid[i] - power_of_two_exponent(x[j]),
                             row_grid[j] - power_of_two_exponent(x[i]));
      if (e == kNoGrid || vals[k] == 0.0) continue;
      vals[k] = std::ldexp(std::nearbyint(std::ldexp(vals[k], -e)), e);
    }
  }

  GeneratedProblem p;
  p.matrix = CsrMatrix(n, n, {rp.begin(), rp.end()}, {ci.begin(), ci.end()}, std::move(vals));
  p.rhs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ExactValue s = exact_row_product(p.matrix, x, i);
    const double b = s.to_fp64();
    if (!std::isfinite(b) || exact(b) != s) throw GenerationError(i, "row sum not representable after rounding");
    p.rhs[i] = b;
  }
  p.strategy = GenerationStrategy::grid;
  return p;
}

double max_relative_change(const CsrMatrix& before, const CsrMatrix& after) {
  double worst = 0.0;
  const auto rp = after.row_ptr();
  const auto ci = after.col_idx();
  const auto v = after.values();
  for (std::size_t i = 0; i < after.rows(); ++i) {
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      const double old = before.at(i, ci[k]);
      if (old == v[k]) continue;
      worst = std::max(worst, old == 0.0 ? INFINITY : std::fabs((v[k] - old) / old));
    }
  }
  return worst;
}

}  // namespace

std::string_view to_string(GenerationStrategy s) {
  switch (s) {
    case GenerationStrategy::automatic: return "automatic";
    case GenerationStrategy::diagonal: return "diagonal";
    case GenerationStrategy::grid: return "grid";
  }
  return "?";
}

GeneratedProblem generate_problem(const CsrMatrix& a_orig, GenerationStrategy strategy,
                                  std::optional<std::span<const double>> x_star) {
  if (a_orig.rows() != a_orig.cols()) throw std::invalid_argument("generate_problem: matrix must be square");
  if (!is_symmetric(a_orig)) throw std::invalid_argument("generate_problem: matrix must be symmetric");
  std::vector<double> x(a_orig.rows(), 1.0);
  if (x_star) {
    if (x_star->size() != x.size()) throw std::invalid_argument("generate_problem: x_star length mismatch");
    x.assign(x_star->begin(), x_star->end());
    for (double xi : x) (void)power_of_two_exponent(xi);
  }

  GeneratedProblem p;
  if (strategy == GenerationStrategy::grid) {
    p = grid(a_orig, x);
  } else {
    std::size_t failed = 0;
    auto diag = try_diagonal(a_orig, x, &failed);
    if (diag) {
      p = std::move(*diag);
    } else if (strategy == GenerationStrategy::diagonal) {
      throw GenerationError(failed, "diagonal correction not representable within 4 ulps of b");
    } else {
      p = grid(a_orig, x);
    }
  }
  p.x_star = std::move(x);
  p.perturbation_norm = max_relative_change(a_orig, p.matrix);
  return p;
}

bool residual_is_exactly_zero(const CsrMatrix& a, std::span<const double> x, std::span<const double> b) {
  if (a.cols() != x.size() || a.rows() != b.size()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (exact_row_product(a, x, i) != exact(b[i])) return false;
  }
  return true;
}

}  // namespace mw
