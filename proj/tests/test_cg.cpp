#include <doctest.h>

#include <cmath>
#include <vector>

#include "mw/cg.hpp"

using namespace mw;

namespace {

SolverConfig config(Mode mode, double eps) {
  SolverConfig cfg;
  cfg.mode = mode;
  cfg.epsilon = eps;
  return cfg;
}

}  // namespace

TEST_CASE("identity converges in one iteration in every mode") {
  const CsrMatrix m = CsrMatrix::identity(5);
  const std::vector<double> b{1.0, 2.0, 3.0, 4.0, 5.0};
  const std::vector<double> x0(5, 0.0);
  for (Mode mode : all_modes) {
    const SolverResult r = cg_solve(m, b, x0, config(mode, 1e-30));
    CHECK(r.converged);
    CHECK(r.iterations == 1);
    CHECK(r.solution == b);
  }
}

TEST_CASE("2x2 system reaches the exact solution") {
  const CsrMatrix m = csr_from_triplets(2, 2, {{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}});
  const std::vector<double> b{1.0, 2.0};
  const std::vector<double> x0(2, 0.0);
  const std::vector<double> expected{1.0 / 11.0, 7.0 / 11.0};
  for (Mode mode : all_modes) {
    const SolverResult r = cg_solve(m, b, x0, config(mode, 1e-15));
    CHECK(r.converged);
    CHECK(r.iterations <= 2);
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::fabs(r.solution[i] - expected[i]) <= 2e-16);
  }
}

TEST_CASE("triple-word CG on a Laplacian gets far below FP64 accuracy") {
  const CsrMatrix m = laplacian_2d(16);
  const std::vector<double> xs(m.rows(), 1.0);
  std::vector<double> b(m.rows());
  spmv<Fp64Arith>(m, xs, b);
  const std::vector<double> x0(m.rows(), 0.0);
  for (Mode mode : {Mode::tw, Mode::qtw}) {
    const SolverResult r = cg_solve(m, b, x0, config(mode, 1e-32), std::span<const double>(xs));
    CHECK(r.converged);
    REQUIRE(r.final_error_norm);
    CHECK(*r.final_error_norm <= 1e-28);
    CHECK(r.final_true_residual <= 1e-30);
  }
  const SolverResult f = cg_solve(m, b, x0, config(Mode::fp64, 1e-32), std::span<const double>(xs));
  // the recurrence residual may keep falling, the true error cannot
  REQUIRE(f.final_error_norm);
  CHECK(*f.final_error_norm > 1e-20);
  CHECK(f.final_true_residual > 1e-20);
}

TEST_CASE("history rows land on the stride and the final iteration") {
  const CsrMatrix m = laplacian_2d(10);
  const std::vector<double> xs(m.rows(), 1.0);
  std::vector<double> b(m.rows());
  spmv<Fp64Arith>(m, xs, b);
  const std::vector<double> x0(m.rows(), 0.0);
  SolverConfig cfg = config(Mode::dw, 1e-28);
  cfg.history_stride = 7;
  const SolverResult r = cg_solve(m, b, x0, cfg, std::span<const double>(xs));
  REQUIRE(r.converged);
  const std::size_t expected_rows = (r.iterations + cfg.history_stride - 1) / cfg.history_stride + 1;
  CHECK(r.history.size() == expected_rows);
  CHECK(r.history.front().iteration == 0);
  CHECK(r.history.front().recurrence_residual == 1.0);
  CHECK(*r.history.front().error_norm == 1.0);
  CHECK(r.history.back().iteration == r.iterations);
  for (std::size_t k = 1; k + 1 < r.history.size(); ++k) CHECK(r.history[k].iteration == 7 * k);

  cfg.record_history = false;
  CHECK(cg_solve(m, b, x0, cfg).history.empty());
}

TEST_CASE("zero right-hand side") {
  const CsrMatrix m = laplacian_2d(3);
  const std::vector<double> b(9, 0.0);
  const std::vector<double> x0(9, 1.0);
  const SolverResult r = cg_solve(m, b, x0, config(Mode::tw, 1e-20));
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.solution == std::vector<double>(9, 0.0));
}

TEST_CASE("exact initial guess stops before the first iteration") {
  const CsrMatrix m = CsrMatrix::identity(3);
  const std::vector<double> b{1.0, 2.0, 3.0};
  const SolverResult r = cg_solve(m, b, b, config(Mode::qdw, 1e-20));
  CHECK(r.converged);
  CHECK(r.iterations == 0);
}

TEST_CASE("singular operator breaks down") {
  const CsrMatrix m(2, 2, {0, 0, 0}, {}, {});
  const std::vector<double> b{1.0, 1.0};
  const std::vector<double> x0(2, 0.0);
  for (Mode mode : all_modes) {
    const SolverResult r = cg_solve(m, b, x0, config(mode, 1e-10));
    CHECK(r.status == Termination::breakdown);
    CHECK_FALSE(r.converged);
  }
}

TEST_CASE("iteration limit is honoured") {
  const CsrMatrix m = laplacian_2d(12);
  const std::vector<double> b(m.rows(), 1.0);
  const std::vector<double> x0(m.rows(), 0.0);
  SolverConfig cfg = config(Mode::dw, 1e-30);
  cfg.max_iterations = 5;
  const SolverResult r = cg_solve(m, b, x0, cfg);
  CHECK(r.status == Termination::max_iterations);
  CHECK(r.iterations == 5);
}

TEST_CASE("invalid configurations are rejected") {
  const CsrMatrix m = CsrMatrix::identity(2);
  const std::vector<double> b{1.0, 1.0};
  const std::vector<double> x0(2, 0.0);
  SolverConfig cfg;
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(cg_solve(m, b, x0, cfg), std::invalid_argument);
  cfg.epsilon = NAN;
  CHECK_THROWS_AS(cg_solve(m, b, x0, cfg), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.threads = 0;
  CHECK_THROWS_AS(cg_solve(m, b, x0, cfg), std::invalid_argument);
  cfg = SolverConfig{};
  CHECK_THROWS_AS(cg_solve(m, std::vector<double>{1.0}, x0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(cg_solve(csr_from_triplets(2, 3, {}), b, x0, cfg), std::invalid_argument);
}

TEST_CASE("repeated runs are bitwise identical") {
  const CsrMatrix m = random_spd(80, 5, 2);
  std::vector<double> b(m.rows(), 1.0);
  const std::vector<double> x0(m.rows(), 0.0);
  for (Mode mode : all_modes) {
    SolverConfig cfg = config(mode, 1e-25);
    cfg.history_stride = 3;
    const SolverResult a = cg_solve(m, b, x0, cfg);
    const SolverResult c = cg_solve(m, b, x0, cfg);
    CHECK(a.iterations == c.iterations);
    CHECK(a.solution == c.solution);
    REQUIRE(a.history.size() == c.history.size());
    for (std::size_t k = 0; k < a.history.size(); ++k) {
      CHECK(a.history[k].recurrence_residual == c.history[k].recurrence_residual);
      CHECK(a.history[k].true_residual == c.history[k].true_residual);
    }
  }
}

TEST_CASE("normalization policies in the quasi modes") {
  const CsrMatrix m = laplacian_2d(8);
  const std::vector<double> xs(m.rows(), 1.0);
  std::vector<double> b(m.rows());
  spmv<Fp64Arith>(m, xs, b);
  const std::vector<double> x0(m.rows(), 0.0);
  for (Normalization nz : {Normalization::after_residual_axpy, Normalization::every_vector_op}) {
    for (Mode mode : {Mode::qdw, Mode::qtw}) {
      SolverConfig cfg = config(mode, mode == Mode::qdw ? 1e-28 : 1e-32);
      cfg.normalization = nz;
      const SolverResult r = cg_solve(m, b, x0, cfg, std::span<const double>(xs));
      CHECK(r.converged);
    }
  }
  CHECK(parse_normalization("every-op") == Normalization::every_vector_op);
  CHECK(parse_normalization(to_string(Normalization::none)) == Normalization::none);
  CHECK_FALSE(parse_normalization("sometimes"));
}

TEST_CASE("kernel timings are collected") {
  const CsrMatrix m = laplacian_2d(4);
  const std::vector<double> b(m.rows(), 1.0);
  const std::vector<double> x0(m.rows(), 0.0);
  const SolverResult r = cg_solve(m, b, x0, config(Mode::qdw, 1e-20));
  CHECK(r.kernel_seconds.count("spmv") == 1);
  CHECK(r.kernel_seconds.count("dot") == 1);
  CHECK(r.kernel_seconds.count("normalize") == 1);
  CHECK(r.elapsed_seconds >= 0.0);
}
