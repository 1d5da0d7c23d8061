#include "mw/cg.hpp"

#include <stdexcept>

namespace mw {

std::string_view to_string(Normalization n) {
  switch (n) {
    case Normalization::after_residual_axpy: return "after-axpy";
    case Normalization::none: return "none";
    case Normalization::every_vector_op: return "every-op";
  }
  return "?";
}

std::optional<Normalization> parse_normalization(std::string_view s) {
  for (auto n : {Normalization::after_residual_axpy, Normalization::none, Normalization::every_vector_op}) {
    if (to_string(n) == s) return n;
  }
  return std::nullopt;
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iterations: return "max-iterations";
    case Termination::breakdown: return "breakdown";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("SolverConfig: epsilon must be positive");
  if (threads < 1) throw std::invalid_argument("SolverConfig: threads must be at least 1");
}

SolverResult cg_solve(const CsrMatrix& m, std::span<const double> b, std::span<const double> x0,
                      const SolverConfig& cfg, std::optional<std::span<const double>> x_star) {
  return dispatch(cfg.mode, [&](auto arith) {
    return conjugate_gradient<decltype(arith)>(m, b, x0, cfg, x_star);
  });
}

}  // namespace mw
