#include "mw/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mw/cg.hpp"
#include "mw/kernels.hpp"
#include "mw/problemgen.hpp"
#include "mw/sparse.hpp"
#include "mw/verify.hpp"

namespace mw {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form, so equal values print equally.
std::string fmt(double v) {
  std::array<char, 40> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <typename T>
T parse_number(const std::string& s, const std::string& spec) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("bad number '" + s + "' in '" + spec + "'");
  return v;
}

// identity:n, laplacian2d:k, scaled-laplacian2d:k:decades:seed,
// random-spd:n:per_row:seed
CsrMatrix synthetic_matrix(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string& kind = parts[0];
  auto arg = [&](std::size_t i) -> const std::string& {
    if (i >= parts.size()) throw UsageError("synthetic spec '" + spec + "' is missing arguments");
    return parts[i];
  };
  auto expect = [&](std::size_t count) {
    if (parts.size() != count) throw UsageError("synthetic spec '" + spec + "' has the wrong number of fields");
  };
  if (kind == "identity") {
    expect(2);
    const auto n = parse_number<std::size_t>(arg(1), spec);
    if (n == 0) throw UsageError("identity size must be positive");
    return CsrMatrix::identity(n);
  }
  if (kind == "laplacian2d") {
    expect(2);
    const auto k = parse_number<std::size_t>(arg(1), spec);
    if (k < 2) throw UsageError("laplacian2d grid size must be at least 2");
    return laplacian_2d(k);
  }
  if (kind == "scaled-laplacian2d") {
    expect(4);
    const auto k = parse_number<std::size_t>(arg(1), spec);
    if (k < 2) throw UsageError("scaled-laplacian2d grid size must be at least 2");
    return scaled_laplacian_2d(k, parse_number<double>(arg(2), spec), parse_number<std::uint64_t>(arg(3), spec));
  }
  if (kind == "random-spd") {
    expect(4);
    const auto n = parse_number<std::size_t>(arg(1), spec);
    if (n == 0) throw UsageError("random-spd size must be positive");
    return random_spd(n, parse_number<std::size_t>(arg(2), spec), parse_number<std::uint64_t>(arg(3), spec));
  }
  throw UsageError("unknown synthetic matrix '" + kind + "'");
}

struct InputOptions {
  std::string matrix_path;
  std::string synthetic;

  void add_to(CLI::App* app) {
    auto* m = app->add_option("--matrix", matrix_path, "Matrix Market file (coordinate, real/integer)");
    auto* s = app->add_option("--synthetic", synthetic,
                              "identity:N | laplacian2d:K | scaled-laplacian2d:K:DECADES:SEED | random-spd:N:PER_ROW:SEED");
    m->excludes(s);
  }

  std::string label() const { return matrix_path.empty() ? synthetic : matrix_path; }

  CsrMatrix load() const {
    if (matrix_path.empty() == synthetic.empty()) throw UsageError("exactly one of --matrix or --synthetic is required");
    if (!synthetic.empty()) return synthetic_matrix(synthetic);
    MatrixMarketData data;
    try {
      data = read_matrix_market(std::filesystem::path(matrix_path));
    } catch (const MatrixMarketError& e) {
      throw InputError(matrix_path + ": " + e.what());
    } catch (const std::runtime_error& e) {
      throw InputError(e.what());
    }
    if (data.matrix.rows() != data.matrix.cols()) throw InputError(matrix_path + ": matrix is not square");
    if (!data.symmetric) return std::move(data.matrix);
    try {
      return expand_symmetric(data.matrix);
    } catch (const std::invalid_argument& e) {
      throw InputError(matrix_path + ": " + e.what());
    }
  }
};

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (flag < 0) throw UsageError("--threads must be positive");
  if (const char* env = std::getenv("MW_THREADS"); env && *env) {
    int v = 0;
    const std::string s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 1) {
      throw UsageError("MW_THREADS must be a positive integer, got '" + s + "'");
    }
    return v;
  }
  return 1;
}

std::vector<Mode> resolve_modes(const std::vector<std::string>& names) {
  std::vector<Mode> modes;
  for (const auto& n : names) {
    const auto m = parse_mode(n);
    if (!m) throw UsageError("unknown mode '" + n + "' (expected fp64, dw, qdw, tw or qtw)");
    modes.push_back(*m);
  }
  if (modes.empty()) modes.assign(std::begin(all_modes), std::end(all_modes));
  return modes;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  return f;
}

// ---------------------------------------------------------------------------
// solve

struct SolveOptions {
  InputOptions input;
  std::string rhs_path;
  std::vector<std::string> modes;
  std::vector<double> epsilons;
  std::string normalize = "after-axpy";
  std::string strategy = "automatic";
  int threads = 0;
  std::size_t reps = 1;
  std::size_t stride = 100;
  std::size_t max_iters = 0;
  std::string out_summary, out_history, json_path;
  bool no_timing = false;
};

struct SolveRow {
  Mode mode;
  double eps;
  SolverResult result;
  double best_seconds;
};

const char* kSummaryHeader =
    "mode,eps,normalization,iterations,converged,status,seconds,final_error_norm,final_true_residual,"
    "final_recurrence_residual,best_time,best_error";

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  const auto modes = resolve_modes(o.modes);
  const std::vector<double> epsilons = o.epsilons.empty() ? std::vector<double>{1e-16} : o.epsilons;
  for (double e : epsilons) {
    if (!(e > 0.0)) throw UsageError("--eps must be positive");
  }
  const auto norm = parse_normalization(o.normalize);
  if (!norm) throw UsageError("unknown normalization '" + o.normalize + "' (expected after-axpy, none or every-op)");
  std::optional<GenerationStrategy> strategy;
  for (auto s : {GenerationStrategy::automatic, GenerationStrategy::diagonal, GenerationStrategy::grid}) {
    if (to_string(s) == o.strategy) strategy = s;
  }
  if (!strategy) throw UsageError("unknown strategy '" + o.strategy + "'");
  if (o.reps < 1) throw UsageError("--reps must be at least 1");
  const int threads = resolve_threads(o.threads);

  CsrMatrix a = o.input.load();
  std::vector<double> b;
  std::optional<std::vector<double>> x_star;
  std::string generation = "none";
  if (!o.rhs_path.empty()) {
    try {
      b = read_matrix_market_vector(std::filesystem::path(o.rhs_path));
    } catch (const MatrixMarketError& e) {
      throw InputError(o.rhs_path + ": " + e.what());
    } catch (const std::runtime_error& e) {
      throw InputError(e.what());
    }
    if (b.size() != a.rows()) throw InputError(o.rhs_path + ": length does not match the matrix");
  } else {
    GeneratedProblem p;
    try {
      p = generate_problem(a, *strategy);
    } catch (const GenerationError& e) {
      throw InputError(std::string("problem generation failed: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("problem generation failed: ") + e.what());
    }
    a = std::move(p.matrix);
    b = std::move(p.rhs);
    x_star = std::move(p.x_star);
    generation = std::string(to_string(p.strategy));
  }
  const std::vector<double> x0(a.rows(), 0.0);

  std::vector<SolveRow> rows;
  for (double eps : epsilons) {
    for (Mode m : modes) {
      SolverConfig cfg;
      cfg.mode = m;
      cfg.epsilon = eps;
      cfg.max_iterations = o.max_iters;
      cfg.normalization = *norm;
      cfg.history_stride = o.stride;
      cfg.threads = threads;
      std::optional<std::span<const double>> xs;
      if (x_star) xs = std::span<const double>(*x_star);
      SolverResult best = cg_solve(a, b, x0, cfg, xs);
      double best_seconds = best.elapsed_seconds;
      for (std::size_t r = 1; r < o.reps; ++r) {
        cfg.record_history = false;
        best_seconds = std::min(best_seconds, cg_solve(a, b, x0, cfg, xs).elapsed_seconds);
      }
      if (o.no_timing) {
        best_seconds = 0.0;
        best.elapsed_seconds = 0.0;
        for (auto& [k, v] : best.kernel_seconds) v = 0.0;
      }
      rows.push_back({m, eps, std::move(best), best_seconds});
    }
  }

  // best markers per epsilon among converged runs
  std::vector<bool> best_time(rows.size(), false), best_error(rows.size(), false);
  for (double eps : epsilons) {
    std::optional<std::size_t> bt, be;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].eps != eps || !rows[i].result.converged) continue;
      if (!o.no_timing && (!bt || rows[i].best_seconds < rows[*bt].best_seconds)) bt = i;
      const auto& en = rows[i].result.final_error_norm;
      if (en && (!be || *en < *rows[*be].result.final_error_norm)) be = i;
    }
    if (bt) best_time[*bt] = true;
    if (be) best_error[*be] = true;
  }

  std::ostringstream summary;
  summary << kSummaryHeader << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    summary << to_string(r.mode) << ',' << fmt(r.eps) << ',' << to_string(*norm) << ',' << r.result.iterations << ','
            << (r.result.converged ? 1 : 0) << ',' << to_string(r.result.status) << ',' << fmt(r.best_seconds) << ','
            << (r.result.final_error_norm ? fmt(*r.result.final_error_norm) : "") << ','
            << fmt(r.result.final_true_residual) << ',' << fmt(r.result.final_recurrence_residual) << ','
            << (best_time[i] ? "*" : "") << ',' << (best_error[i] ? "*" : "") << '\n';
  }
  out << summary.str();
  if (!o.out_summary.empty()) open_output(o.out_summary) << summary.str();

  if (!o.out_history.empty()) {
    auto f = open_output(o.out_history);
    f << "mode,eps,iteration,recurrence_residual,true_residual,error_norm\n";
    for (const auto& r : rows) {
      for (const auto& h : r.result.history) {
        f << to_string(r.mode) << ',' << fmt(r.eps) << ',' << h.iteration << ',' << fmt(h.recurrence_residual) << ','
          << fmt(h.true_residual) << ',' << (h.error_norm ? fmt(*h.error_norm) : "") << '\n';
      }
    }
  }

  if (!o.json_path.empty()) {
    json j;
    j["command"] = "solve";
    json cfg;
    cfg["input"] = o.input.label();
    cfg["rhs"] = o.rhs_path.empty() ? json(nullptr) : json(o.rhs_path);
    cfg["generation"] = generation;
    cfg["n"] = a.rows();
    cfg["nnz"] = a.nnz();
    cfg["modes"] = json::array();
    for (Mode m : modes) cfg["modes"].push_back(std::string(to_string(m)));
    cfg["epsilons"] = epsilons;
    cfg["normalization"] = std::string(to_string(*norm));
    cfg["threads"] = threads;
    cfg["reps"] = o.reps;
    cfg["stride"] = o.stride;
    cfg["max_iters"] = o.max_iters == 0 ? 10 * a.rows() : o.max_iters;
    cfg["timing"] = !o.no_timing;
    j["config"] = cfg;
    j["runs"] = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      json run;
      run["mode"] = std::string(to_string(r.mode));
      run["eps"] = r.eps;
      run["iterations"] = r.result.iterations;
      run["converged"] = r.result.converged;
      run["status"] = std::string(to_string(r.result.status));
      run["seconds"] = r.best_seconds;
      run["final_error_norm"] = r.result.final_error_norm ? json_number(*r.result.final_error_norm) : json(nullptr);
      run["final_true_residual"] = json_number(r.result.final_true_residual);
      run["final_recurrence_residual"] = json_number(r.result.final_recurrence_residual);
      run["best_time"] = static_cast<bool>(best_time[i]);
      run["best_error"] = static_cast<bool>(best_error[i]);
      run["kernel_seconds"] = r.result.kernel_seconds;
      run["history"] = json::array();
      for (const auto& h : r.result.history) {
        run["history"].push_back({{"iteration", h.iteration},
                                  {"recurrence_residual", json_number(h.recurrence_residual)},
                                  {"true_residual", json_number(h.true_residual)},
                                  {"error_norm", h.error_norm ? json_number(*h.error_norm) : json(nullptr)}});
      }
      j["runs"].push_back(run);
    }
    open_output(o.json_path) << j.dump(2) << '\n';
  }
  (void)err;
  return exit_ok;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
  InputOptions input;
  std::vector<std::string> modes;
  std::vector<std::string> kernels;
  int threads = 0;
  std::size_t reps = 0;
  std::size_t dot_length = 0;
  std::string out_summary, json_path;
};

struct BenchRow {
  std::string kernel;
  Mode mode;
  std::size_t n, nnz;
  double seconds;
  double bytes;
};

template <typename F>
double best_of(std::size_t reps, F&& f) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

// Deterministic operands with populated lower words.
template <typename A>
MultiwordVector<typename A::value_type> bench_vector(std::size_t n) {
  MultiwordVector<typename A::value_type> v(n);
  const auto third = A::div(A::from_fp64(1.0), A::from_fp64(3.0));
  for (std::size_t i = 0; i < n; ++i) v[i] = A::mul(A::from_fp64(1.0 + 0.125 * static_cast<double>(i % 8)), third);
  return v;
}

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  const auto modes = resolve_modes(o.modes);
  std::vector<std::string> kernels = o.kernels.empty() ? std::vector<std::string>{"spmv", "dot"} : o.kernels;
  for (const auto& k : kernels) {
    if (k != "spmv" && k != "dot") throw UsageError("unknown kernel '" + k + "' (expected spmv or dot)");
  }
  const int threads = resolve_threads(o.threads);
  const CsrMatrix a = o.input.load();
  const std::size_t n = a.rows();
  const std::size_t dot_n = o.dot_length > 0 ? o.dot_length : n;

  std::vector<BenchRow> rows;
  volatile double sink = 0.0;
  for (const auto& kernel : kernels) {
    const std::size_t reps = o.reps > 0 ? o.reps : (kernel == "spmv" ? 10 : 100);
    for (Mode m : modes) {
      dispatch(m, [&](auto arith) {
        using A = decltype(arith);
        const double word_bytes = 8.0 * A::words;
        if (kernel == "spmv") {
          const auto x = bench_vector<A>(a.cols());
          MultiwordVector<typename A::value_type> y(n);
          const double t = best_of(reps, [&] { spmv<A>(a, x, y, threads); });
          sink = sink + A::to_fp64(y[0]);
          const double matrix_bytes = 8.0 * static_cast<double>(a.nnz()) +
                                      sizeof(std::size_t) * static_cast<double>(a.nnz() + n + 1);
          rows.push_back({kernel, m, n, a.nnz(), t, matrix_bytes + word_bytes * static_cast<double>(a.cols() + n)});
        } else {
          const auto x = bench_vector<A>(dot_n);
          const auto y = bench_vector<A>(dot_n);
          typename A::value_type r{};
          const double t = best_of(reps, [&] { r = dot<A>(x, y, threads); });
          sink = sink + A::to_fp64(r);
          rows.push_back({kernel, m, dot_n, 0, t, 2.0 * word_bytes * static_cast<double>(dot_n)});
        }
      });
    }
  }

  std::ostringstream csv;
  csv << "kernel,mode,n,nnz,seconds_best,bytes_model,gbps\n";
  for (const auto& r : rows) {
    const double gbps = r.seconds > 0 ? r.bytes / r.seconds * 1e-9 : 0.0;
    csv << r.kernel << ',' << to_string(r.mode) << ',' << r.n << ',' << r.nnz << ',' << fmt(r.seconds) << ','
        << fmt(r.bytes) << ',' << fmt(gbps) << '\n';
  }
  out << csv.str();
  if (!o.out_summary.empty()) open_output(o.out_summary) << csv.str();
  if (!o.json_path.empty()) {
    json j;
    j["command"] = "bench";
    j["config"] = {{"input", o.input.label()},
                   {"threads", threads},
                   {"reps", o.reps},
                   {"dot_length", dot_n},
                   {"bytes_model",
                    "spmv: 8*nnz value bytes + index bytes for col_idx and row_ptr, read once, plus x read and y "
                    "written at 8 bytes per stored word; dot: two vectors read at 8 bytes per stored word"}};
    j["results"] = json::array();
    for (const auto& r : rows) {
      j["results"].push_back({{"kernel", r.kernel},
                              {"mode", std::string(to_string(r.mode))},
                              {"n", r.n},
                              {"nnz", r.nnz},
                              {"seconds_best", r.seconds},
                              {"bytes_model", r.bytes},
                              {"gbps", r.seconds > 0 ? r.bytes / r.seconds * 1e-9 : 0.0}});
    }
    open_output(o.json_path) << j.dump(2) << '\n';
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateOptions {
  InputOptions input;
  std::string strategy = "automatic";
  std::string out_matrix, out_rhs;
};

int cmd_generate(const GenerateOptions& o, std::ostream& out) {
  std::optional<GenerationStrategy> strategy;
  for (auto s : {GenerationStrategy::automatic, GenerationStrategy::diagonal, GenerationStrategy::grid}) {
    if (to_string(s) == o.strategy) strategy = s;
  }
  if (!strategy) throw UsageError("unknown strategy '" + o.strategy + "'");
  const CsrMatrix a = o.input.load();
  GeneratedProblem p;
  try {
    p = generate_problem(a, *strategy);
  } catch (const GenerationError& e) {
    throw InputError(std::string("problem generation failed: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("problem generation failed: ") + e.what());
  }
  const bool exact_ok = residual_is_exactly_zero(p.matrix, p.x_star, p.rhs);
  out << "n=" << p.matrix.rows() << " nnz=" << p.matrix.nnz() << " strategy=" << to_string(p.strategy)
      << " perturbation=" << fmt(p.perturbation_norm) << " exact_residual_zero=" << (exact_ok ? "yes" : "no") << '\n';
  if (!o.out_matrix.empty()) {
    auto f = open_output(o.out_matrix);
    write_matrix_market(f, p.matrix, true);
  }
  if (!o.out_rhs.empty()) {
    auto f = open_output(o.out_rhs);
    write_matrix_market_vector(f, p.rhs);
  }
  return exact_ok ? exit_ok : exit_verify;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyCliOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = VerifyOptions{}.seed;
  std::vector<std::string> suites;
  std::string fault = "none";
};

int cmd_verify(const VerifyCliOptions& o, std::ostream& out) {
  VerifyOptions opts;
  opts.samples = o.samples;
  opts.seed = o.seed;
  const auto fault = parse_fault(o.fault);
  if (!fault) throw UsageError("unknown fault '" + o.fault + "'");
  opts.fault = *fault;
  const auto names = verify_suite_names();
  for (const auto& s : o.suites) {
    if (std::find(names.begin(), names.end(), s) == names.end()) throw UsageError("unknown suite '" + s + "'");
  }
  if (opts.fault != Fault::none) out << "fault injected: " << to_string(opts.fault) << '\n';

  const auto results = run_verification(opts, o.suites);
  std::vector<std::string> failed;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << '\n';
    for (const auto& d : r.details) out << "    " << d << '\n';
    if (!r.passed) failed.push_back(r.name);
  }
  if (failed.empty()) {
    out << "verify: all " << results.size() << " suites passed\n";
    return exit_ok;
  }
  out << "verify: failed suites:";
  for (const auto& f : failed) out << ' ' << f;
  out << '\n';
  return exit_verify;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiword-precision Conjugate Gradient harness", "mwcg"};
  app.require_subcommand(1);

  SolveOptions solve;
  auto* s = app.add_subcommand("solve", "Run CG on a matrix with a generated exact-solution right-hand side");
  solve.input.add_to(s);
  s->add_option("--rhs", solve.rhs_path, "Right-hand side (Matrix Market array); disables problem generation");
  s->add_option("--mode", solve.modes, "fp64, dw, qdw, tw or qtw (repeatable; default all)");
  s->add_option("--eps", solve.epsilons, "Relative residual tolerance (repeatable; default 1e-16)");
  s->add_option("--normalize", solve.normalize, "after-axpy, none or every-op")->capture_default_str();
  s->add_option("--strategy", solve.strategy, "Problem generation: automatic, diagonal or grid")->capture_default_str();
  s->add_option("--threads", solve.threads, "Worker threads (default: MW_THREADS or 1)");
  s->add_option("--reps", solve.reps, "Repetitions; best time is reported")->capture_default_str();
  s->add_option("--stride", solve.stride, "History sampling stride in iterations")->capture_default_str();
  s->add_option("--max-iters", solve.max_iters, "Iteration limit (default 10n)");
  s->add_option("--out-summary", solve.out_summary, "Summary CSV path");
  s->add_option("--out-history", solve.out_history, "Convergence history CSV path");
  s->add_option("--json", solve.json_path, "JSON output path");
  s->add_flag("--no-timing", solve.no_timing, "Report zero for all timings (byte-reproducible output)");

  BenchOptions bench;
  auto* b = app.add_subcommand("bench", "Time SpMV and DOT in each arithmetic");
  bench.input.add_to(b);
  b->add_option("--mode", bench.modes, "fp64, dw, qdw, tw or qtw (repeatable; default all)");
  b->add_option("--kernel", bench.kernels, "spmv or dot (repeatable; default both)");
  b->add_option("--threads", bench.threads, "Worker threads (default: MW_THREADS or 1)");
  b->add_option("--reps", bench.reps, "Repetitions (default 10 for spmv, 100 for dot)");
  b->add_option("--dot-length", bench.dot_length, "Vector length for dot (default: matrix size)");
  b->add_option("--out-summary", bench.out_summary, "CSV output path");
  b->add_option("--json", bench.json_path, "JSON output path");

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Emit a perturbed matrix and right-hand side with solution all ones");
  gen.input.add_to(g);
  g->add_option("--strategy", gen.strategy, "automatic, diagonal or grid")->capture_default_str();
  g->add_option("--out-matrix", gen.out_matrix, "Matrix Market output for the matrix");
  g->add_option("--out-rhs", gen.out_rhs, "Matrix Market output for the right-hand side");

  VerifyCliOptions ver;
  auto* v = app.add_subcommand("verify", "Run the built-in self-check suites");
  v->add_option("--samples", ver.samples, "Random samples per suite")->capture_default_str();
  v->add_option("--seed", ver.seed, "Random seed")->capture_default_str();
  v->add_option("--suite", ver.suites, "Run only these suites (repeatable)");
  v->add_option("--inject-fault", ver.fault, "Corrupt one primitive: two_sum, dw_add, normalize_dw or qtw_mul");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (s->parsed()) return cmd_solve(solve, out, err);
    if (b->parsed()) return cmd_bench(bench, out);
    if (g->parsed()) return cmd_generate(gen, out);
    if (v->parsed()) return cmd_verify(ver, out);
  } catch (const UsageError& e) {
    err << "mwcg: " << e.what() << '\n';
    return exit_usage;
  } catch (const InputError& e) {
    err << "mwcg: " << e.what() << '\n';
    return exit_input;
  } catch (const std::invalid_argument& e) {
    err << "mwcg: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"mwcg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mw
