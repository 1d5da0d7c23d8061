#pragma once

// Linear systems with an exactly known solution.
//
// Given a symmetric A_orig and x* (all ones by default), produce a slightly
// perturbed symmetric A and an FP64 vector b with A x* == b in exact
// arithmetic.
//
// Two constructions are available:
//
//   diagonal  b_i is the rounded exact row sum and the rounding error is
//             pushed into a_ii. Exact only when the corrected diagonal is
//             representable, which holds for matrices whose entries share
//             a coarse enough binary grid (integer stencils, for example).
//             Up to four ulps of adjustment of b_i are tried per row.
//   grid      every entry is rounded to a power-of-two grid chosen per row
//             pair (i, j) as the coarser of the two rows' grids, so that
//             each row sum is a multiple of its row grid and fits in 53
//             bits. Works for any finite matrix; perturbs off-diagonals by
//             at most about 2u times the row's absolute sum.
//
// `automatic` tries the diagonal construction and falls back to the grid
// construction when any row fails.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mw/sparse.hpp"

namespace mw {

enum class GenerationStrategy { automatic, diagonal, grid };

std::string_view to_string(GenerationStrategy s);

struct GeneratedProblem {
  CsrMatrix matrix;
  std::vector<double> rhs;
  std::vector<double> x_star;
  // max over entries of |a_ij - a_orig_ij| / |a_orig_ij|
  double perturbation_norm = 0.0;
  GenerationStrategy strategy = GenerationStrategy::diagonal;
};

class GenerationError : public std::runtime_error {
 public:
  GenerationError(std::size_t row, const std::string& what)
      : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// x_star defaults to all ones; when given, each entry must be a nonzero
// power of two (so that products with it stay exact scalings). Throws
// std::invalid_argument for a non-square or non-symmetric matrix and
// GenerationError when the diagonal construction is forced and fails.
GeneratedProblem generate_problem(const CsrMatrix& a_orig,
                                  GenerationStrategy strategy = GenerationStrategy::automatic,
                                  std::optional<std::span<const double>> x_star = std::nullopt);

// Exact check of A x == b using the dyadic oracle.
bool residual_is_exactly_zero(const CsrMatrix& a, std::span<const double> x, std::span<const double> b);

}  // namespace mw
