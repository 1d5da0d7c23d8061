#pragma once

// Compressed sparse row storage and Matrix Market ingestion.
//
// Matrix values are always FP64; only vectors carry multiword types.
// Indices are zero-based; Matrix Market's one-based indices are converted at
// the file boundary.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mw {

class CsrMatrix {
 public:
  CsrMatrix() = default;

  // Validates the CSR invariants eagerly and throws std::invalid_argument:
  // row_ptr has rows+1 non-decreasing entries starting at 0 and ending at
  // nnz, columns are strictly increasing within each row and below cols.
  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
            std::vector<std::size_t> col_idx, std::vector<double> values);

  static CsrMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::size_t> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  // Entry (i, j), or 0 if not stored. Binary search within the row.
  double at(std::size_t i, std::size_t j) const;

  // Bitwise structural and value equality.
  bool operator==(const CsrMatrix& other) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Sorts by (row, col) and sums duplicates in input order.
CsrMatrix csr_from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);

class MatrixMarketError : public std::runtime_error {
 public:
  MatrixMarketError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct MatrixMarketData {
  CsrMatrix matrix;
  // True when the banner said "symmetric"; `matrix` then holds only the
  // stored triangle.
  bool symmetric = false;
};

// Coordinate format, real or integer field, general or symmetric.
MatrixMarketData read_matrix_market(std::istream& in);
MatrixMarketData read_matrix_market(const std::filesystem::path& path);

// With symmetric = true only the lower triangle is written.
void write_matrix_market(std::ostream& out, const CsrMatrix& m, bool symmetric = false);
// Dense column in "array real general" form.
void write_matrix_market_vector(std::ostream& out, std::span<const double> v);
std::vector<double> read_matrix_market_vector(std::istream& in);
std::vector<double> read_matrix_market_vector(const std::filesystem::path& path);

// One stored triangle to general form. Throws std::invalid_argument if the
// input has entries on both sides of the diagonal.
CsrMatrix expand_symmetric(const CsrMatrix& triangle);

bool is_symmetric(const CsrMatrix& m);

// 5-point Poisson stencil on a k x k grid with Dirichlet boundary, k >= 2.
CsrMatrix laplacian_2d(std::size_t k);

// a_ij <- (d_i * d_j) * a_ij. The scale product is formed first so that the
// result stays bitwise symmetric.
CsrMatrix scale_symmetric(const CsrMatrix& m, std::span<const double> d);

// Laplacian scaled by d_i = 10^(decades * (u_i - 0.5)), u_i uniform in
// [0, 1) from a seeded generator. The condition number can grow by up to
// 10^(2 decades) over the unscaled matrix.
CsrMatrix scaled_laplacian_2d(std::size_t k, double decades, std::uint64_t seed);

// Random symmetric, strictly diagonally dominant (hence SPD) matrix with
// about `per_row` off-diagonal entries per row, values with full 53-bit
// mantissas and varied exponents.
CsrMatrix random_spd(std::size_t n, std::size_t per_row, std::uint64_t seed);

}  // namespace mw
