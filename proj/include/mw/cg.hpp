#pragma once

// Unpreconditioned Conjugate Gradient over any of the five arithmetics.
//
// A and b are FP64; x, r, p, q and the scalars rho, alpha, beta live in the
// selected arithmetic. The stopping test ||r||_2 / ||b||_2 < epsilon is
// evaluated in FP64 on collapsed values in every mode. Triple-word accurate
// metrics are recorded for the history but never influence control flow.
//
// In the quasi modes the residual is renormalized right after its AXPY
// update unless the configuration says otherwise.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mw/arithmetic.hpp"
#include "mw/kernels.hpp"
#include "mw/sparse.hpp"

namespace mw {

enum class Normalization { after_residual_axpy, none, every_vector_op };

std::string_view to_string(Normalization n);
std::optional<Normalization> parse_normalization(std::string_view s);

struct SolverConfig {
  Mode mode = Mode::dw;
  double epsilon = 1e-16;
  // 0 selects 10 * n.
  std::size_t max_iterations = 0;
  Normalization normalization = Normalization::after_residual_axpy;
  std::size_t history_stride = 100;
  bool record_history = true;
  int threads = 1;

  // Throws std::invalid_argument.
  void validate() const;
};

struct ConvergenceRecord {
  std::size_t iteration = 0;
  double recurrence_residual = 0.0;  // ||r_k|| / ||b||, FP64
  double true_residual = 0.0;        // ||b - A x_k|| / ||b||, triple-word
  std::optional<double> error_norm;  // ||x_k - x*|| / ||x*||, triple-word
};

enum class Termination { converged, max_iterations, breakdown };

std::string_view to_string(Termination t);

struct SolverResult {
  bool converged = false;
  Termination status = Termination::max_iterations;
  std::size_t iterations = 0;
  double final_recurrence_residual = 0.0;
  double elapsed_seconds = 0.0;
  std::map<std::string, double> kernel_seconds;
  std::vector<ConvergenceRecord> history;

  std::vector<double> solution;  // collapsed to FP64
  double final_true_residual = 0.0;
  std::optional<double> final_error_norm;
};

template <typename A>
struct SolverState {
  using value_type = typename A::value_type;
  MultiwordVector<value_type> x, r, p, q;
  value_type rho{}, alpha{}, beta{};
  std::size_t iteration = 0;
};

template <typename A>
ConvergenceRecord record_metrics(const SolverState<A>& state, const CsrMatrix& m,
                                 std::span<const double> b,
                                 std::optional<std::span<const double>> x_star, double norm_b,
                                 int threads = 1) {
  ConvergenceRecord rec;
  rec.iteration = state.iteration;
  rec.recurrence_residual = norm2_fp64<A>(state.r) / norm_b;
  rec.true_residual = true_residual_norm_tw<A>(m, state.x, b, threads);
  if (x_star) rec.error_norm = relative_error_norm_tw<A>(state.x, *x_star);
  return rec;
}

namespace detail {

class KernelClock {
 public:
  explicit KernelClock(std::map<std::string, double>& sink) : sink_(sink) {}

  template <typename F>
  void time(const char* kernel, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    sink_[kernel] += std::chrono::duration<double>(t1 - t0).count();
  }

 private:
  std::map<std::string, double>& sink_;
};

}  // namespace detail

template <typename A>
SolverResult conjugate_gradient(const CsrMatrix& m, std::span<const double> b,
                                std::span<const double> x0, const SolverConfig& cfg,
                                std::optional<std::span<const double>> x_star = std::nullopt) {
  using V = typename A::value_type;
  cfg.validate();
  if (m.rows() != m.cols()) throw std::invalid_argument("conjugate_gradient: matrix must be square");
  detail::require_same_length(m.rows(), b.size(), "conjugate_gradient");
  detail::require_same_length(m.rows(), x0.size(), "conjugate_gradient");
  if (x_star) detail::require_same_length(m.rows(), x_star->size(), "conjugate_gradient");

  const std::size_t n = m.rows();
  const std::size_t max_iter = cfg.max_iterations == 0 ? 10 * n : cfg.max_iterations;
  const int threads = cfg.threads;
  const bool quasi_norm_r = A::quasi && cfg.normalization != Normalization::none;
  const bool quasi_norm_all = A::quasi && cfg.normalization == Normalization::every_vector_op;

  SolverResult result;
  detail::KernelClock clock(result.kernel_seconds);
  SolverState<A> st;
  st.x = promote<A>(x0);
  st.r.assign(n, A::from_fp64(0.0));
  st.q.assign(n, A::from_fp64(0.0));

  auto finish = [&]() {
    result.solution = collapse<A>(st.x);
    const double nb = norm2_fp64(b);
    result.final_true_residual = nb == 0.0 ? 0.0 : true_residual_norm_tw<A>(m, st.x, b, threads);
    if (x_star) result.final_error_norm = relative_error_norm_tw<A>(st.x, *x_star);
    return result;
  };

  const double norm_b = norm2_fp64(b);
  if (norm_b == 0.0) {
    st.x.assign(n, A::from_fp64(0.0));
    result.converged = true;
    result.status = Termination::converged;
    return finish();
  }

  auto record = [&]() {
    if (!cfg.record_history) return;
    result.history.push_back(record_metrics<A>(st, m, b, x_star, norm_b, threads));
  };

  const auto t_start = std::chrono::steady_clock::now();
  double metrics_seconds = 0.0;
  auto timed_record = [&]() {
    const auto t0 = std::chrono::steady_clock::now();
    record();
    metrics_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  // p0 = r0 = b - A x0
  clock.time("spmv", [&] { spmv<A>(m, st.x, st.q, threads); });
  clock.time("axpy", [&] { residual_from<A>(b, st.q, st.r, threads); });
  if (quasi_norm_all) clock.time("normalize", [&] { normalize_vector<A>(st.r, threads); });
  st.p = st.r;
  clock.time("dot", [&] { st.rho = dot<A>(st.r, st.r, threads); });

  double res = 0.0;
  clock.time("norm", [&] { res = norm2_fp64<A>(st.r) / norm_b; });
  result.final_recurrence_residual = res;
  timed_record();

  if (res < cfg.epsilon) {
    result.converged = true;
    result.status = Termination::converged;
  } else {
    for (std::size_t i = 1; i <= max_iter; ++i) {
      clock.time("spmv", [&] { spmv<A>(m, st.p, st.q, threads); });
      if (quasi_norm_all) clock.time("normalize", [&] { normalize_vector<A>(st.q, threads); });

      V pq{};
      clock.time("dot", [&] { pq = dot<A>(st.p, st.q, threads); });
      if (quasi_norm_all) pq = A::normalize(pq);
      const double pq64 = A::to_fp64(pq);
      if (pq64 == 0.0 || std::isnan(pq64)) {
        result.status = Termination::breakdown;
        break;
      }
      st.alpha = A::div(st.rho, pq);

      clock.time("axpy", [&] { axpy<A>(st.alpha, st.p, st.x, threads); });
      if (quasi_norm_all) clock.time("normalize", [&] { normalize_vector<A>(st.x, threads); });
      clock.time("axpy", [&] { axpy<A>(-st.alpha, st.q, st.r, threads); });
      if (quasi_norm_r) clock.time("normalize", [&] { normalize_vector<A>(st.r, threads); });

      V rho_next{};
      clock.time("dot", [&] { rho_next = dot<A>(st.r, st.r, threads); });
      if (quasi_norm_all) rho_next = A::normalize(rho_next);
      clock.time("norm", [&] { res = norm2_fp64<A>(st.r) / norm_b; });
      st.iteration = i;
      result.iterations = i;
      result.final_recurrence_residual = res;

      if (std::isnan(res) || std::isnan(A::to_fp64(rho_next))) {
        result.status = Termination::breakdown;
        break;
      }
      if (cfg.history_stride > 0 && i % cfg.history_stride == 0) timed_record();
      if (res < cfg.epsilon) {
        result.converged = true;
        result.status = Termination::converged;
        break;
      }

      st.beta = A::div(rho_next, st.rho);
      clock.time("scal", [&] { scal_then_add<A>(st.beta, st.p, st.r, threads); });
      if (quasi_norm_all) clock.time("normalize", [&] { normalize_vector<A>(st.p, threads); });
      st.rho = rho_next;
    }
  }

  const auto t_end = std::chrono::steady_clock::now();
  result.elapsed_seconds = std::chrono::duration<double>(t_end - t_start).count() - metrics_seconds;
  if (cfg.record_history && (result.history.empty() || result.history.back().iteration != st.iteration)) {
    record();
  }
  return finish();
}

// Runtime dispatch on cfg.mode.
SolverResult cg_solve(const CsrMatrix& m, std::span<const double> b, std::span<const double> x0,
                      const SolverConfig& cfg,
                      std::optional<std::span<const double>> x_star = std::nullopt);

}  // namespace mw
