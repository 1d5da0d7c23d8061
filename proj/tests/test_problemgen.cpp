#include <doctest.h>

#include <cmath>
#include <vector>

#include "mw/exact.hpp"
#include "mw/problemgen.hpp"
#include "support.hpp"

using namespace mw;

namespace {

void check_exact(const GeneratedProblem& p) {
  CHECK(is_symmetric(p.matrix));
  CHECK(residual_is_exactly_zero(p.matrix, p.x_star, p.rhs));
}

CsrMatrix dense_symmetric(std::size_t n, support::Rng& rng) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, rng.positive(2, 4)});
    for (std::size_t j = 0; j < i; ++j) {
      const double v = rng.fp64(-8, 0);
      t.push_back({i, j, v});
      t.push_back({j, i, v});
    }
  }
  return csr_from_triplets(n, n, std::move(t));
}

}  // namespace

TEST_CASE("integer stencils need no perturbation") {
  for (const CsrMatrix& m : {CsrMatrix::identity(7), laplacian_2d(9)}) {
    const GeneratedProblem p = generate_problem(m);
    check_exact(p);
    CHECK(p.strategy == GenerationStrategy::diagonal);
    CHECK(p.perturbation_norm == 0.0);
    CHECK(p.matrix == m);
    CHECK(p.x_star == std::vector<double>(m.rows(), 1.0));
  }
}

TEST_CASE("rounding error of the row sum moves into the diagonal") {
  const double big = std::ldexp(1.0, 53);
  const CsrMatrix m = csr_from_triplets(2, 2, {{0, 0, big}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, big}});
  const GeneratedProblem p = generate_problem(m, GenerationStrategy::diagonal);
  check_exact(p);
  CHECK(p.matrix.at(0, 0) == big - 1.0);
  CHECK(p.matrix.at(1, 1) == big - 1.0);
  CHECK(p.matrix.at(0, 1) == 1.0);
  CHECK(p.rhs == std::vector<double>{big, big});
  // |delta| bounded by n u sum |a_ij|
  CHECK(1.0 <= 2 * std::ldexp(1.0, -53) * (big + 1.0));
}

TEST_CASE("diagonal construction reports the row it cannot fix") {
  const double third = 1.0 / 3.0;
  const CsrMatrix m = csr_from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, third}, {1, 0, third}, {1, 1, 1.0}});
  try {
    generate_problem(m, GenerationStrategy::diagonal);
    FAIL("expected GenerationError");
  } catch (const GenerationError& e) {
    CHECK(e.row() == 0);
  }
  const GeneratedProblem p = generate_problem(m);
  CHECK(p.strategy == GenerationStrategy::grid);
  check_exact(p);
  CHECK(p.perturbation_norm > 0.0);
  CHECK(p.perturbation_norm < 1e-14);
}

TEST_CASE("random dense symmetric matrices get exact right-hand sides") {
  support::Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const CsrMatrix m = dense_symmetric(static_cast<std::size_t>(rng.integer(2, 30)), rng);
    const GeneratedProblem p = generate_problem(m);
    check_exact(p);
  }
}

TEST_CASE("grid perturbation stays within a few units of roundoff of the row scale") {
  const CsrMatrix m = random_spd(150, 6, 21);
  const GeneratedProblem p = generate_problem(m, GenerationStrategy::grid);
  check_exact(p);
  std::vector<double> row_abs(m.rows(), 0.0);
  const auto rp = m.row_ptr();
  const auto ci = m.col_idx();
  const auto v = m.values();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) row_abs[i] += std::fabs(v[k]);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      const std::size_t j = ci[k];
      const double change = std::fabs(p.matrix.values()[k] - v[k]);
      CHECK(change <= std::ldexp(1.0, -49) * std::max(row_abs[i], row_abs[j]));
    }
  }
}

TEST_CASE("powers of two as the known solution") {
  const CsrMatrix m = random_spd(40, 4, 8);
  std::vector<double> xs(m.rows());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = std::ldexp(i % 2 ? -1.0 : 1.0, static_cast<int>(i % 7) - 3);
  const GeneratedProblem p = generate_problem(m, GenerationStrategy::automatic, std::span<const double>(xs));
  CHECK(p.x_star == xs);
  check_exact(p);

  std::vector<double> bad(m.rows(), 1.0);
  bad[3] = 3.0;
  CHECK_THROWS_AS(generate_problem(m, GenerationStrategy::automatic, std::span<const double>(bad)),
                  std::invalid_argument);
}

TEST_CASE("missing diagonals are added") {
  const CsrMatrix m = csr_from_triplets(2, 2, {{0, 1, 0.1}, {1, 0, 0.1}});
  const GeneratedProblem p = generate_problem(m);
  check_exact(p);
  CHECK(p.matrix.nnz() >= 2);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(generate_problem(csr_from_triplets(2, 3, {})), std::invalid_argument);
  CHECK_THROWS_AS(generate_problem(csr_from_triplets(2, 2, {{0, 1, 1.0}})), std::invalid_argument);
  CHECK(to_string(GenerationStrategy::grid) == "grid");
}

TEST_CASE("residual check is exact") {
  const CsrMatrix m = CsrMatrix::identity(2);
  const std::vector<double> x{1.0, 1.0};
  CHECK(residual_is_exactly_zero(m, x, std::vector<double>{1.0, 1.0}));
  CHECK_FALSE(residual_is_exactly_zero(m, x, std::vector<double>{1.0, std::nextafter(1.0, 2.0)}));
}
