#include "mw/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mw/cg.hpp"
#include "mw/counting_scalar.hpp"
#include "mw/exact.hpp"
#include "mw/multiword.hpp"
#include "mw/problemgen.hpp"
#include "mw/sparse.hpp"

namespace mw {

namespace {

// Primitives as seen by the suites, with the optional injected fault.
struct Primitives {
  Fault fault = Fault::none;

  template <typename T>
  Pair<T> two_sum(T a, T b) const {
    if (fault == Fault::two_sum) {
      T x = a + b;
      T y = (a - x) + b;
      return {x, y};
    }
    return mw::two_sum(a, b);
  }

  template <typename T>
  BasicDoubleWord<T> dw_add(const BasicDoubleWord<T>& a, const BasicDoubleWord<T>& b) const {
    if (fault == Fault::dw_add) {
      auto [s, e] = mw::two_sum(a.w0, b.w0);
      e = e + a.w1;
      auto r = mw::quick_two_sum(s, e);
      return {r.hi, r.lo};
    }
    return mw::dw_add(a, b);
  }

  DoubleWord normalize_dw(const DoubleWord& a) const {
    if (fault == Fault::normalize_dw) {
      double x = a.w0 + a.w1;
      return {x, a.w1 - (x - a.w0)};
    }
    return mw::normalize_dw(a);
  }

  template <typename T>
  BasicTripleWord<T> qtw_mul(const BasicTripleWord<T>& a, const BasicTripleWord<T>& b) const {
    if (fault == Fault::qtw_mul) {
      auto [c1, e1] = two_prod_fma(a.w0, b.w0);
      auto [t2, e2] = two_prod_fma(a.w0, b.w1);
      auto [t3, e3] = two_prod_fma(a.w1, b.w0);
      auto [s2, e4] = mw::two_sum(t2, t3);
      auto [c2, e5] = mw::two_sum(s2, e1);
      (void)e5;
      T c3 = fma(a.w2, b.w0, e2) + fma(a.w1, b.w1, e3) + fma(a.w0, b.w2, e4);
      return {c1, c2, c3};
    }
    return mw::qtw_mul(a, b);
  }
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return (rng_() & 1) != 0; }

  // Full 53-bit mantissa, exponent in [lo, hi], random sign.
  double fp64(int lo, int hi) {
    const double m = 1.0 + static_cast<double>(rng_() >> 12) * 0x1p-52;
    const double x = std::ldexp(m, integer(lo, hi));
    return coin() ? -x : x;
  }

  DoubleWord dw(double hi) {
    const double lo = std::ldexp(fp64(0, 0), std::ilogb(hi) - 53 - integer(0, 3));
    const auto p = two_sum(hi, lo);
    return {p.hi, p.lo};
  }

  TripleWord tw(double hi) {
    const DoubleWord d = dw(hi);
    const double lo = std::ldexp(fp64(0, 0), std::ilogb(d.w1) - 53 - integer(0, 3));
    const auto t = two_sum(d.w1, lo);
    const auto h = quick_two_sum(d.w0, t.hi);
    const auto m = quick_two_sum(h.lo, t.lo);
    return {h.hi, m.hi, m.lo};
  }

  // Overlapping words of similar magnitude, either order.
  DoubleWord quasi_dw() {
    const double a = fp64(-20, 20);
    return {a, std::ldexp(fp64(0, 0), std::ilogb(a) + integer(-30, 8))};
  }

  TripleWord quasi_tw() {
    const double a = fp64(-20, 20);
    return {a, std::ldexp(fp64(0, 0), std::ilogb(a) + integer(-30, 8)),
            std::ldexp(fp64(0, 0), std::ilogb(a) + integer(-60, 8))};
  }

 private:
  std::mt19937_64 rng_;
};

std::string format_bits(double rel) {
  std::ostringstream os;
  if (rel == 0.0) {
    os << "0";
  } else {
    os << "2^" << std::log2(rel);
  }
  return os.str();
}

// ---------------------------------------------------------------------------

SuiteResult suite_eft(const VerifyOptions& opts, const Primitives& prim) {
  SuiteResult r{"eft", true, {}};
  Sampler s(opts.seed);
  std::size_t bad_sum = 0, bad_prod = 0, bad_quick = 0;
  for (std::size_t i = 0; i < opts.samples; ++i) {
    const double a = s.fp64(-500, 500);
    const double b = s.fp64(-500, 500);
    const auto ts = prim.two_sum(a, b);
    if (exact(ts.hi) + exact(ts.lo) != exact(a) + exact(b) || ts.hi != a + b) ++bad_sum;

    const double c = s.fp64(-250, 250);
    const double d = s.fp64(-250, 250);
    const auto tp = two_prod_fma(c, d);
    if (exact(tp.hi) + exact(tp.lo) != exact(c) * exact(d)) ++bad_prod;

    const double big = std::fabs(a) >= std::fabs(b) ? a : b;
    const double small = std::fabs(a) >= std::fabs(b) ? b : a;
    const auto q = quick_two_sum(big, small);
    const auto t = prim.two_sum(big, small);
    if (q.hi != t.hi || q.lo != t.lo) ++bad_quick;
  }
  r.details.push_back("two_sum failures: " + std::to_string(bad_sum));
  r.details.push_back("two_prod_fma failures: " + std::to_string(bad_prod));
  r.details.push_back("quick_two_sum disagreements: " + std::to_string(bad_quick));
  r.passed = bad_sum == 0 && bad_prod == 0 && bad_quick == 0;
  return r;
}

SuiteResult suite_counts(const VerifyOptions&, const Primitives& prim) {
  using C = CountingScalar;
  using CD = BasicDoubleWord<C>;
  using CT = BasicTripleWord<C>;
  SuiteResult r{"counts", true, {}};
  const C x(1.5), y(-0.375);
  const CD a{C(1.0), C(0x1p-60)}, b{C(3.0), C(-0x1p-58)};
  const CT ta{C(1.0), C(0x1p-60), C(0x1p-115)}, tb{C(3.0), C(-0x1p-58), C(0x1p-112)};

  struct Expect {
    const char* name;
    std::uint64_t got;
    std::uint64_t want;
    bool at_most;
  };
  const Expect table[] = {
      {"two_sum", count_operations([&] { (void)prim.two_sum(x, y); }), 6, false},
      {"quick_two_sum", count_operations([&] { (void)quick_two_sum(x, y); }), 3, false},
      {"two_prod_fma", count_operations([&] { (void)two_prod_fma(x, y); }), 2, false},
      {"dw_add", count_operations([&] { (void)prim.dw_add(a, b); }), 11, false},
      {"dw_mul", count_operations([&] { (void)dw_mul(a, b); }), 7, false},
      {"qdw_add", count_operations([&] { (void)qdw_add(a, b); }), 8, false},
      {"qdw_mul", count_operations([&] { (void)qdw_mul(a, b); }), 4, false},
      {"qtw_add", count_operations([&] { (void)qtw_add(ta, tb); }), 21, false},
      {"qtw_mul", count_operations([&] { (void)prim.qtw_mul(ta, tb); }), 24, false},
      {"dxqtw_mul", count_operations([&] { (void)dxqtw_mul(x, tb); }), 12, false},
      {"tw_add", count_operations([&] { (void)tw_add(ta, tb); }), 48, true},
      {"tw_mul", count_operations([&] { (void)tw_mul(ta, tb); }), 42, true},
  };
  for (const auto& e : table) {
    const bool ok = e.at_most ? e.got <= e.want : e.got == e.want;
    r.details.push_back(std::string(e.name) + " = " + std::to_string(e.got) + (e.at_most ? " (<= " : " (expected ") +
                        std::to_string(e.want) + ")" + (ok ? "" : "  MISMATCH"));
    r.passed = r.passed && ok;
  }
  return r;
}

SuiteResult suite_precision(const VerifyOptions& opts, const Primitives& prim) {
  SuiteResult r{"precision", true, {}};
  Sampler s(opts.seed + 1);
  double dw_add_err = 0, dw_mul_err = 0, qdw_add_err = 0, qdw_mul_err = 0;
  double tw_add_err = 0, tw_mul_err = 0, qtw_add_err = 0, qtw_mul_err = 0;
  const std::size_t n = opts.samples;
  for (std::size_t i = 0; i < n; ++i) {
    // Same-sign addends: well-scaled, no cancellation.
    const double h0 = s.fp64(-20, 20);
    double h1 = s.fp64(-20, 20);
    if ((h0 < 0) != (h1 < 0)) h1 = -h1;
    const DoubleWord a = s.dw(h0), b = s.dw(h1);
    const ExactValue ea = exact(a), eb = exact(b);
    dw_add_err = std::max(dw_add_err, relative_error(exact(prim.dw_add(a, b)), ea + eb));
    dw_mul_err = std::max(dw_mul_err, relative_error(exact(dw_mul(a, b)), ea * eb));
    qdw_add_err = std::max(qdw_add_err, relative_error(exact(qdw_add(a, b)), ea + eb));
    qdw_mul_err = std::max(qdw_mul_err, relative_error(exact(qdw_mul(a, b)), ea * eb));

    const TripleWord ta = s.tw(h0), tb = s.tw(h1);
    const ExactValue eta = exact(ta), etb = exact(tb);
    tw_add_err = std::max(tw_add_err, relative_error(exact(tw_add(ta, tb)), eta + etb));
    tw_mul_err = std::max(tw_mul_err, relative_error(exact(tw_mul(ta, tb)), eta * etb));
    qtw_add_err = std::max(qtw_add_err, relative_error(exact(qtw_add(ta, tb)), eta + etb));
    qtw_mul_err = std::max(qtw_mul_err, relative_error(exact(prim.qtw_mul(ta, tb)), eta * etb));
  }
  auto check = [&](const char* name, double err, double bound) {
    const bool ok = err <= bound;
    r.details.push_back(std::string(name) + " max rel err " + format_bits(err) + " bound " + format_bits(bound) +
                        (ok ? "" : "  EXCEEDED"));
    r.passed = r.passed && ok;
  };
  check("dw_add", dw_add_err, 0x1p-100);
  check("dw_mul", dw_mul_err, 0x1p-100);
  check("tw_add", tw_add_err, 0x1p-150);
  check("tw_mul", tw_mul_err, 0x1p-150);
  check("qdw_add", qdw_add_err, 8 * dw_add_err);
  check("qdw_mul", qdw_mul_err, 8 * dw_mul_err);
  check("qtw_add", qtw_add_err, 8 * tw_add_err);
  check("qtw_mul", qtw_mul_err, 8 * tw_mul_err);
  return r;
}

SuiteResult suite_normalization(const VerifyOptions& opts, const Primitives& prim) {
  SuiteResult r{"normalization", true, {}};
  Sampler s(opts.seed + 2);
  std::size_t bad_dw = 0, bad_tw = 0, not_normalized = 0;
  for (std::size_t i = 0; i < opts.samples; ++i) {
    const DoubleWord q = s.quasi_dw();
    const DoubleWord n = prim.normalize_dw(q);
    if (exact(n) != exact(q)) ++bad_dw;
    if (n.w0 + n.w1 != n.w0) ++not_normalized;
    const TripleWord t = s.quasi_tw();
    if (exact(normalize_tw(t)) != exact(t)) ++bad_tw;
  }
  r.details.push_back("normalize_dw value changes: " + std::to_string(bad_dw));
  r.details.push_back("normalize_dw outputs not normalized: " + std::to_string(not_normalized));
  r.details.push_back("normalize_tw value changes: " + std::to_string(bad_tw));
  r.passed = bad_dw == 0 && bad_tw == 0 && not_normalized == 0;
  return r;
}

SuiteResult suite_mixed(const VerifyOptions& opts, const Primitives& prim) {
  SuiteResult r{"mixed", true, {}};
  Sampler s(opts.seed + 3);
  std::size_t mismatches = 0;
  double dxqtw_mul_gap = 0;
  const std::size_t n = std::max<std::size_t>(1, opts.samples / 10);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = s.fp64(-20, 20);
    const DoubleWord b = s.dw(s.fp64(-20, 20));
    const TripleWord t = s.tw(s.fp64(-20, 20));
    const DoubleWord ad{a, 0.0};
    const TripleWord at{a, 0.0, 0.0};
    if (!(dxdw_add(a, b) == prim.dw_add(ad, b))) ++mismatches;
    if (!(dxdw_mul(a, b) == dw_mul(ad, b))) ++mismatches;
    if (!(dxqdw_add(a, b) == qdw_add(ad, b))) ++mismatches;
    if (!(dxqdw_mul(a, b) == qdw_mul(ad, b))) ++mismatches;
    if (!(dxtw_add(a, t) == tw_add(at, t))) ++mismatches;
    if (!(dxtw_mul(a, t) == tw_mul(at, t))) ++mismatches;
    if (!(dxqtw_add(a, t) == qtw_add(at, t))) ++mismatches;
    const ExactValue p = exact(a) * exact(t);
    dxqtw_mul_gap = std::max(dxqtw_mul_gap, relative_error(exact(dxqtw_mul(a, t)), p));
    dxqtw_mul_gap = std::max(dxqtw_mul_gap, relative_error(exact(prim.qtw_mul(at, t)), p));
  }
  r.details.push_back("componentwise mismatches vs full-width ops: " + std::to_string(mismatches));
  r.details.push_back("dxqtw_mul / qtw_mul max rel err " + format_bits(dxqtw_mul_gap));
  r.passed = mismatches == 0 && dxqtw_mul_gap <= 0x1p-147;
  return r;
}

SuiteResult suite_division(const VerifyOptions& opts, const Primitives&) {
  SuiteResult r{"division", true, {}};
  Sampler s(opts.seed + 4);
  std::size_t bad = 0;
  const std::size_t n = std::max<std::size_t>(1, opts.samples / 10);
  for (std::size_t i = 0; i < n; ++i) {
    const DoubleWord a = s.dw(s.fp64(-20, 20)), b = s.dw(s.fp64(-20, 20));
    const TripleWord ta = s.tw(s.fp64(-20, 20)), tb = s.tw(s.fp64(-20, 20));
    // q = a / b  <=>  q * b = a, checked against 4x the multiplication bound
    auto dw_ok = [&](const DoubleWord& q) {
      return within_relative(exact(q) * exact(b), exact(a), 98);
    };
    auto tw_ok = [&](const TripleWord& q) {
      return within_relative(exact(q) * exact(tb), exact(ta), 148);
    };
    if (!dw_ok(dw_div(a, b))) ++bad;
    if (!dw_ok(qdw_div(a, b))) ++bad;
    if (!tw_ok(tw_div(ta, tb))) ++bad;
    if (!tw_ok(qtw_div(ta, tb))) ++bad;
  }
  r.details.push_back("quotients outside 4x multiplication bound: " + std::to_string(bad));
  r.passed = bad == 0;
  return r;
}

SuiteResult suite_problemgen(const VerifyOptions& opts, const Primitives&) {
  SuiteResult r{"problemgen", true, {}};
  for (const auto& [name, m] : {std::pair<std::string, CsrMatrix>{"laplacian2d:16", laplacian_2d(16)},
                                {"random-spd:120", random_spd(120, 6, opts.seed)}}) {
    const GeneratedProblem p = generate_problem(m);
    const bool exact_ok = residual_is_exactly_zero(p.matrix, p.x_star, p.rhs);
    const bool sym = is_symmetric(p.matrix);
    r.details.push_back(name + ": strategy " + std::string(to_string(p.strategy)) + ", residual " +
                        (exact_ok ? "exactly zero" : "NONZERO") + (sym ? "" : ", NOT symmetric"));
    r.passed = r.passed && exact_ok && sym;
  }
  return r;
}

SuiteResult suite_solver(const VerifyOptions&, const Primitives&) {
  SuiteResult r{"solver", true, {}};
  const CsrMatrix small(2, 2, {0, 2, 4}, {0, 1, 0, 1}, {4.0, 1.0, 1.0, 3.0});
  const std::vector<double> b{1.0, 2.0}, x0{0.0, 0.0};
  const GeneratedProblem lap = generate_problem(laplacian_2d(8));
  const std::vector<double> zeros(lap.rhs.size(), 0.0);
  for (Mode m : all_modes) {
    SolverConfig cfg;
    cfg.mode = m;
    cfg.epsilon = 1e-14;
    const SolverResult res = cg_solve(small, b, x0, cfg);
    const bool ok2 = res.converged && res.iterations <= 2 && std::fabs(res.solution[0] - 1.0 / 11) < 1e-14 &&
                     std::fabs(res.solution[1] - 7.0 / 11) < 1e-14;

    cfg.epsilon = m == Mode::fp64 ? 1e-12 : 1e-20;
    cfg.history_stride = 5;
    const SolverResult r1 = cg_solve(lap.matrix, lap.rhs, zeros, cfg, std::span<const double>(lap.x_star));
    const SolverResult r2 = cg_solve(lap.matrix, lap.rhs, zeros, cfg, std::span<const double>(lap.x_star));
    bool same = r1.history.size() == r2.history.size() && r1.iterations == r2.iterations;
    for (std::size_t i = 0; same && i < r1.history.size(); ++i) {
      same = r1.history[i].recurrence_residual == r2.history[i].recurrence_residual &&
             r1.history[i].true_residual == r2.history[i].true_residual &&
             r1.history[i].error_norm == r2.history[i].error_norm;
    }
    const std::string name(to_string(m));
    r.details.push_back(name + ": 2x2 " + (ok2 ? "ok" : "FAILED") + ", laplacian2d:8 " +
                        (r1.converged ? "converged in " + std::to_string(r1.iterations) : "NOT converged") +
                        (same ? ", deterministic" : ", NOT deterministic"));
    r.passed = r.passed && ok2 && r1.converged && same;
  }
  return r;
}

using SuiteFn = SuiteResult (*)(const VerifyOptions&, const Primitives&);

struct SuiteEntry {
  const char* name;
  SuiteFn fn;
};

constexpr SuiteEntry kSuites[] = {
    {"eft", suite_eft},
    {"counts", suite_counts},
    {"precision", suite_precision},
    {"normalization", suite_normalization},
    {"mixed", suite_mixed},
    {"division", suite_division},
    {"problemgen", suite_problemgen},
    {"solver", suite_solver},
};

}  // namespace

std::string_view to_string(Fault f) {
  switch (f) {
    case Fault::none: return "none";
    case Fault::two_sum: return "two_sum";
    case Fault::dw_add: return "dw_add";
    case Fault::normalize_dw: return "normalize_dw";
    case Fault::qtw_mul: return "qtw_mul";
  }
  return "?";
}

std::optional<Fault> parse_fault(std::string_view s) {
  for (Fault f : {Fault::none, Fault::two_sum, Fault::dw_add, Fault::normalize_dw, Fault::qtw_mul}) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

std::vector<std::string> verify_suite_names() {
  std::vector<std::string> names;
  for (const auto& s : kSuites) names.emplace_back(s.name);
  return names;
}

std::vector<SuiteResult> run_verification(const VerifyOptions& opts, const std::vector<std::string>& only) {
  const Primitives prim{opts.fault};
  std::vector<SuiteResult> out;
  for (const auto& s : kSuites) {
    if (!only.empty() && std::find(only.begin(), only.end(), s.name) == only.end()) continue;
    try {
      out.push_back(s.fn(opts, prim));
    } catch (const std::exception& e) {
      out.push_back({s.name, false, {std::string("exception: ") + e.what()}});
    }
  }
  return out;
}

}  // namespace mw
