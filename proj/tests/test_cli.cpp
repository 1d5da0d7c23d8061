#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mw/cli.hpp"
#include "mw/sparse.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = mw::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) v.push_back(f);
  if (!line.empty() && line.back() == ',') v.emplace_back();
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("mwcg_test_" + std::to_string(std::rand()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).code == mw::exit_usage);
  CHECK(run({"frobnicate"}).code == mw::exit_usage);
  CHECK(run({"solve"}).code == mw::exit_usage);
  CHECK(run({"solve", "--synthetic", "identity:3", "--mode", "quad"}).code == mw::exit_usage);
  CHECK(run({"solve", "--synthetic", "identity:3", "--eps", "-1"}).code == mw::exit_usage);
  CHECK(run({"solve", "--synthetic", "nonsense:3"}).code == mw::exit_usage);
  CHECK(run({"solve", "--synthetic", "identity:3", "--matrix", "x.mtx"}).code == mw::exit_usage);
  CHECK(run({"--help"}).code == mw::exit_ok);
}

TEST_CASE("identity system converges in one iteration") {
  const Run r = run({"solve", "--synthetic", "identity:4", "--mode", "fp64", "--eps", "1e-16"});
  REQUIRE(r.code == mw::exit_ok);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  const auto header = fields(ls[0]);
  const auto row = fields(ls[1]);
  CHECK(header[3] == "iterations");
  CHECK(row[0] == "fp64");
  CHECK(row[3] == "1");
  CHECK(row[4] == "1");
}

TEST_CASE("five modes give five rows and best markers") {
  const Run r = run({"solve", "--synthetic", "laplacian2d:16", "--eps", "1e-20"});
  REQUIRE(r.code == mw::exit_ok);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 6);
  const auto header = fields(ls[0]);
  const std::size_t best_time = std::find(header.begin(), header.end(), "best_time") - header.begin();
  const std::size_t best_error = std::find(header.begin(), header.end(), "best_error") - header.begin();
  REQUIRE(best_error < header.size());
  int time_marks = 0, error_marks = 0;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto f = fields(ls[i]);
    REQUIRE(f.size() == header.size());
    time_marks += f[best_time] == "*";
    error_marks += f[best_error] == "*";
  }
  CHECK(time_marks == 1);
  CHECK(error_marks == 1);
}

TEST_CASE("history file row count follows the stride") {
  TempDir dir;
  const Run r = run({"solve", "--synthetic", "laplacian2d:8", "--mode", "tw", "--eps", "1e-30", "--stride", "4",
                     "--out-history", (dir / "h.csv").string(), "--out-summary", (dir / "s.csv").string()});
  REQUIRE(r.code == mw::exit_ok);
  const auto summary = lines(slurp(dir / "s.csv"));
  REQUIRE(summary.size() == 2);
  const std::size_t iters = std::stoul(fields(summary[1])[3]);
  const auto history = lines(slurp(dir / "h.csv"));
  CHECK(history[0] == "mode,eps,iteration,recurrence_residual,true_residual,error_norm");
  CHECK(history.size() - 1 == (iters + 3) / 4 + 1);
  CHECK(fields(history[1])[2] == "0");
  CHECK(fields(history.back())[2] == std::to_string(iters));
}

TEST_CASE("malformed matrix file exits with 2 and names the line") {
  TempDir dir;
  {
    std::ofstream f(dir / "bad.mtx");
    f << "%%MatrixMarket matrix coordinate real general\n3 3 2\n1 1 1.0\n2 2 oops\n";
  }
  const Run r = run({"solve", "--matrix", (dir / "bad.mtx").string()});
  CHECK(r.code == mw::exit_input);
  CHECK(r.err.find("line 4") != std::string::npos);

  CHECK(run({"solve", "--matrix", (dir / "missing.mtx").string()}).code == mw::exit_input);
}

TEST_CASE("non-symmetric matrices are rejected as input errors") {
  TempDir dir;
  {
    std::ofstream f(dir / "ns.mtx");
    f << "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 2\n1 2 1\n2 2 2\n";
  }
  CHECK(run({"solve", "--matrix", (dir / "ns.mtx").string()}).code == mw::exit_input);
}

TEST_CASE("generate then solve with the generated right-hand side") {
  TempDir dir;
  const Run g = run({"generate", "--synthetic", "random-spd:50:4:3", "--out-matrix", (dir / "a.mtx").string(),
                     "--out-rhs", (dir / "b.mtx").string()});
  REQUIRE(g.code == mw::exit_ok);
  CHECK(g.out.find("exact_residual_zero=yes") != std::string::npos);
  const auto m = mw::read_matrix_market(dir / "a.mtx");
  CHECK(m.symmetric);
  CHECK(mw::read_matrix_market_vector(dir / "b.mtx").size() == 50);

  const Run s = run({"solve", "--matrix", (dir / "a.mtx").string(), "--rhs", (dir / "b.mtx").string(), "--mode",
                     "qdw", "--eps", "1e-24"});
  REQUIRE(s.code == mw::exit_ok);
  CHECK(fields(lines(s.out)[1])[4] == "1");
}

TEST_CASE("JSON output parses and echoes the configuration") {
  TempDir dir;
  const Run r = run({"solve", "--synthetic", "laplacian2d:6", "--mode", "dw", "--mode", "qtw", "--eps", "1e-20",
                     "--json", (dir / "r.json").string()});
  REQUIRE(r.code == mw::exit_ok);
  const auto j = nlohmann::json::parse(slurp(dir / "r.json"));
  CHECK(j["runs"].size() == 2);
  CHECK(j["runs"][0]["mode"] == "dw");
  CHECK(j["runs"][1]["converged"] == true);
  CHECK(j["runs"][0]["history"].is_array());
}

TEST_CASE("thread count from the environment") {
  setenv("MW_THREADS", "2", 1);
  const Run a = run({"solve", "--synthetic", "laplacian2d:10", "--mode", "tw", "--no-timing"});
  setenv("MW_THREADS", "0", 1);
  const Run bad = run({"solve", "--synthetic", "laplacian2d:10", "--mode", "tw"});
  unsetenv("MW_THREADS");
  const Run b = run({"solve", "--synthetic", "laplacian2d:10", "--mode", "tw", "--threads", "2", "--no-timing"});
  CHECK(a.code == mw::exit_ok);
  CHECK(bad.code == mw::exit_usage);
  CHECK(a.out == b.out);
}

TEST_CASE("outputs are reproducible without timings") {
  TempDir dir;
  auto once = [&](const std::string& tag) {
    const Run r = run({"solve", "--synthetic", "scaled-laplacian2d:6:3:2", "--eps", "1e-24", "--stride", "3",
                       "--no-timing", "--out-summary", (dir / ("s" + tag)).string(), "--out-history",
                       (dir / ("h" + tag)).string()});
    REQUIRE(r.code == mw::exit_ok);
  };
  once("1");
  once("2");
  CHECK(slurp(dir / "s1") == slurp(dir / "s2"));
  CHECK(slurp(dir / "h1") == slurp(dir / "h2"));
}

TEST_CASE("bench writes one row per kernel and mode") {
  const Run r = run({"bench", "--synthetic", "laplacian2d:8", "--reps", "2", "--mode", "dw", "--mode", "tw"});
  REQUIRE(r.code == mw::exit_ok);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "kernel,mode,n,nnz,seconds_best,bytes_model,gbps");
  CHECK(fields(ls[1])[0] == "spmv");
  CHECK(fields(ls[4])[0] == "dot");
  CHECK(run({"bench", "--synthetic", "laplacian2d:8", "--kernel", "gemm"}).code == mw::exit_usage);
}

TEST_CASE("verify passes clean and fails with an injected fault") {
  const Run clean = run({"verify", "--samples", "3000"});
  CHECK(clean.code == mw::exit_ok);
  CHECK(clean.out.find("all 8 suites passed") != std::string::npos);

  const Run faulty = run({"verify", "--samples", "3000", "--inject-fault", "dw_add"});
  CHECK(faulty.code == mw::exit_verify);
  CHECK(faulty.out.find("FAIL counts") != std::string::npos);

  const Run one = run({"verify", "--samples", "3000", "--suite", "eft", "--inject-fault", "two_sum"});
  CHECK(one.code == mw::exit_verify);
  CHECK(one.out.find("FAIL eft") != std::string::npos);

  CHECK(run({"verify", "--suite", "nope"}).code == mw::exit_usage);
}

TEST_CASE("the installed executable reports exit codes") {
  const std::string exe = MWCG_EXE;
  CHECK(std::system((exe + " verify --samples 1000 > /dev/null").c_str()) == 0);
  const int status = std::system((exe + " solve --matrix /nonexistent/file.mtx 2> /dev/null").c_str());
  CHECK(WEXITSTATUS(status) == mw::exit_input);
}
