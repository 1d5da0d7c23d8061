#include "mw/sparse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <set>
#include <utility>

namespace mw {

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                     std::vector<std::size_t> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1) throw std::invalid_argument("CSR: row_ptr must have rows+1 entries");
  if (row_ptr_.front() != 0) throw std::invalid_argument("CSR: row_ptr[0] must be 0");
  if (col_idx_.size() != values_.size()) {
    throw std::invalid_argument("CSR: col_idx and values differ in length");
  }
  if (row_ptr_.back() != values_.size()) throw std::invalid_argument("CSR: row_ptr[rows] must equal nnz");
  for (std::size_t i = 0; i < rows_; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1]) throw std::invalid_argument("CSR: row_ptr must be non-decreasing");
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] >= cols_) throw std::invalid_argument("CSR: column index out of range");
      if (k > row_ptr_[i] && col_idx_[k - 1] >= col_idx_[k]) {
        throw std::invalid_argument("CSR: columns must be strictly increasing within a row");
      }
    }
  }
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  std::vector<std::size_t> rp(n + 1), ci(n);
  for (std::size_t i = 0; i < n; ++i) {
    rp[i + 1] = i + 1;
    ci[i] = i;
  }
  return CsrMatrix(n, n, std::move(rp), std::move(ci), std::vector<double>(n, 1.0));
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

bool CsrMatrix::operator==(const CsrMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || row_ptr_ != o.row_ptr_ || col_idx_ != o.col_idx_) return false;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (std::bit_cast<std::uint64_t>(values_[k]) != std::bit_cast<std::uint64_t>(o.values_[k])) return false;
  }
  return true;
}

CsrMatrix csr_from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> rp(rows + 1, 0), ci;
  std::vector<double> vals;
  ci.reserve(entries.size());
  vals.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& t = entries[k];
    if (t.row >= rows || t.col >= cols) throw std::invalid_argument("triplet index out of range");
    if (k > 0 && entries[k - 1].row == t.row && entries[k - 1].col == t.col) {
      vals.back() += t.value;
      continue;
    }
    ci.push_back(t.col);
    vals.push_back(t.value);
    ++rp[t.row + 1];
  }
  for (std::size_t i = 0; i < rows; ++i) rp[i + 1] += rp[i];
  return CsrMatrix(rows, cols, std::move(rp), std::move(ci), std::move(vals));
}

CsrMatrix expand_symmetric(const CsrMatrix& t) {
  if (t.rows() != t.cols()) throw std::invalid_argument("expand_symmetric: matrix must be square");
  bool lower = false, upper = false;
  const auto rp = t.row_ptr();
  const auto ci = t.col_idx();
  const auto v = t.values();
  std::vector<Triplet> entries;
  entries.reserve(2 * t.nnz());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      const std::size_t j = ci[k];
      entries.push_back({i, j, v[k]});
      if (j < i) lower = true;
      if (j > i) upper = true;
      if (j != i) entries.push_back({j, i, v[k]});
    }
  }
  if (lower && upper) {
    throw std::invalid_argument("expand_symmetric: input has entries in both triangles");
  }
  return csr_from_triplets(t.rows(), t.cols(), std::move(entries));
}

bool is_symmetric(const CsrMatrix& m) {
  if (m.rows() != m.cols()) return false;
  const auto rp = m.row_ptr();
  const auto ci = m.col_idx();
  const auto v = m.values();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      const double mirrored = m.at(ci[k], i);
      if (std::bit_cast<std::uint64_t>(mirrored) != std::bit_cast<std::uint64_t>(v[k])) {
        // a stored zero and a missing entry are the same value
        if (!(v[k] == 0.0 && mirrored == 0.0)) return false;
      }
    }
  }
  return true;
}

CsrMatrix laplacian_2d(std::size_t k) {
  if (k < 2) throw std::invalid_argument("laplacian_2d: grid size must be at least 2");
  const std::size_t n = k * k;
  std::vector<std::size_t> rp(n + 1, 0), ci;
  std::vector<double> vals;
  ci.reserve(5 * n);
  vals.reserve(5 * n);
  for (std::size_t gi = 0; gi < k; ++gi) {
    for (std::size_t gj = 0; gj < k; ++gj) {
      const std::size_t row = gi * k + gj;
      auto push = [&](std::size_t col, double value) {
        ci.push_back(col);
        vals.push_back(value);
      };
      if (gi > 0) push(row - k, -1.0);
      if (gj > 0) push(row - 1, -1.0);
      push(row, 4.0);
      if (gj + 1 < k) push(row + 1, -1.0);
      if (gi + 1 < k) push(row + k, -1.0);
      rp[row + 1] = ci.size();
    }
  }
  return CsrMatrix(n, n, std::move(rp), std::move(ci), std::move(vals));
}

CsrMatrix scale_symmetric(const CsrMatrix& m, std::span<const double> d) {
  if (d.size() != m.rows() || m.rows() != m.cols()) {
    throw std::invalid_argument("scale_symmetric: scale vector length must match a square matrix");
  }
  std::vector<double> vals(m.values().begin(), m.values().end());
  const auto rp = m.row_ptr();
  const auto ci = m.col_idx();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      const double s = d[i] * d[ci[k]];
      vals[k] = s * vals[k];
    }
  }
  return CsrMatrix(m.rows(), m.cols(), {rp.begin(), rp.end()}, {ci.begin(), ci.end()}, std::move(vals));
}

namespace {

// Uniform in [0, 1) with 53 random bits; std::uniform_real_distribution is
// not reproducible across standard libraries.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

}  // namespace

CsrMatrix scaled_laplacian_2d(std::size_t k, double decades, std::uint64_t seed) {
  CsrMatrix base = laplacian_2d(k);
  std::mt19937_64 rng(seed);
  std::vector<double> d(base.rows());
  for (auto& x : d) x = std::pow(10.0, decades * (unit_uniform(rng) - 0.5));
  return scale_symmetric(base, d);
}

CsrMatrix random_spd(std::size_t n, std::size_t per_row, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random_spd: n must be positive");
  std::mt19937_64 rng(seed);
  std::set<std::pair<std::size_t, std::size_t>> pattern;
  const std::size_t pairs = n * per_row / 2;
  for (std::size_t t = 0; t < pairs && n > 1; ++t) {
    std::size_t i = rng() % n;
    std::size_t j = rng() % n;
    if (i == j) continue;
    if (i < j) std::swap(i, j);
    pattern.emplace(i, j);
  }
  std::vector<Triplet> entries;
  std::vector<double> abs_row_sum(n, 0.0);
  for (auto [i, j] : pattern) {
    // magnitudes spread over about six binades, signs mixed
    const double mag = std::ldexp(0.5 + 0.5 * unit_uniform(rng), -static_cast<int>(rng() % 6));
    const double value = (rng() & 1) ? mag : -mag;
    entries.push_back({i, j, value});
    entries.push_back({j, i, value});
    abs_row_sum[i] += mag;
    abs_row_sum[j] += mag;
  }
  for (std::size_t i = 0; i < n; ++i) {
    entries.push_back({i, i, abs_row_sum[i] * (1.0 + unit_uniform(rng)) + 1.0 + unit_uniform(rng)});
  }
  return csr_from_triplets(n, n, std::move(entries));
}

}  // namespace mw
