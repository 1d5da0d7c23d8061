#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mw/sparse.hpp"

namespace mw {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

std::size_t parse_index(std::string_view tok, std::size_t line, const char* what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw MatrixMarketError(line, std::string("invalid ") + what + " '" + std::string(tok) + "'");
  }
  return v;
}

double parse_value(std::string_view tok, std::size_t line) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw MatrixMarketError(line, "invalid value '" + std::string(tok) + "'");
  }
  return v;
}

void put(std::ostream& out, double v) {
  std::array<char, 40> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.write(buf.data(), end - buf.data());
}

}  // namespace

MatrixMarketData read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) throw MatrixMarketError(1, "empty input, expected %%MatrixMarket banner");
  ++lineno;
  const auto banner = tokens(line);
  if (banner.empty() || banner[0] != "%%MatrixMarket") {
    throw MatrixMarketError(lineno, "missing %%MatrixMarket banner");
  }
  if (banner.size() != 5) throw MatrixMarketError(lineno, "banner must have 5 fields");
  const std::string object = lowercase(banner[1]);
  const std::string format = lowercase(banner[2]);
  const std::string field = lowercase(banner[3]);
  const std::string symmetry = lowercase(banner[4]);
  if (object != "matrix") throw MatrixMarketError(lineno, "unsupported object '" + object + "'");
  if (format != "coordinate") throw MatrixMarketError(lineno, "unsupported format '" + format + "'");
  if (field == "pattern") throw MatrixMarketError(lineno, "pattern matrices carry no values");
  if (field != "real" && field != "integer" && field != "double") {
    throw MatrixMarketError(lineno, "unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw MatrixMarketError(lineno, "unsupported symmetry '" + symmetry + "'");
  }
  const bool symmetric = symmetry == "symmetric";

  // size line, after comments
  std::vector<std::string_view> size_tok;
  while (true) {
    if (!std::getline(in, line)) throw MatrixMarketError(lineno + 1, "missing size line");
    ++lineno;
    if (blank(line) || line[0] == '%') continue;
    size_tok = tokens(line);
    break;
  }
  if (size_tok.size() != 3) throw MatrixMarketError(lineno, "size line must be 'rows cols nnz'");
  const std::size_t rows = parse_index(size_tok[0], lineno, "row count");
  const std::size_t cols = parse_index(size_tok[1], lineno, "column count");
  const std::size_t nnz = parse_index(size_tok[2], lineno, "entry count");
  if (symmetric && rows != cols) throw MatrixMarketError(lineno, "symmetric matrix must be square");

  std::vector<Triplet> entries;
  entries.reserve(nnz);
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line) || line[0] == '%') continue;
    if (entries.size() == nnz) throw MatrixMarketError(lineno, "more entries than declared");
    const auto t = tokens(line);
    if (t.size() != 3) throw MatrixMarketError(lineno, "entry must be 'row col value'");
    const std::size_t i = parse_index(t[0], lineno, "row index");
    const std::size_t j = parse_index(t[1], lineno, "column index");
    if (i < 1 || i > rows) throw MatrixMarketError(lineno, "row index " + std::to_string(i) + " out of range");
    if (j < 1 || j > cols) {
      throw MatrixMarketError(lineno, "column index " + std::to_string(j) + " out of range");
    }
    entries.push_back({i - 1, j - 1, parse_value(t[2], lineno)});
  }
  if (entries.size() != nnz) {
    throw MatrixMarketError(lineno, "expected " + std::to_string(nnz) + " entries, found " +
                                        std::to_string(entries.size()));
  }
  return {csr_from_triplets(rows, cols, std::move(entries)), symmetric};
}

MatrixMarketData read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return read_matrix_market(in);
}

std::vector<double> read_matrix_market_vector(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw MatrixMarketError(1, "empty input, expected %%MatrixMarket banner");
  ++lineno;
  const auto banner = tokens(line);
  if (banner.size() != 5 || banner[0] != "%%MatrixMarket") throw MatrixMarketError(lineno, "malformed banner");
  if (lowercase(banner[1]) != "matrix" || lowercase(banner[2]) != "array" ||
      (lowercase(banner[3]) != "real" && lowercase(banner[3]) != "integer") ||
      lowercase(banner[4]) != "general") {
    throw MatrixMarketError(lineno, "expected 'matrix array real general'");
  }
  std::vector<std::string_view> size_tok;
  while (true) {
    if (!std::getline(in, line)) throw MatrixMarketError(lineno + 1, "missing size line");
    ++lineno;
    if (blank(line) || line[0] == '%') continue;
    size_tok = tokens(line);
    break;
  }
  if (size_tok.size() != 2) throw MatrixMarketError(lineno, "size line must be 'rows cols'");
  const std::size_t rows = parse_index(size_tok[0], lineno, "row count");
  if (parse_index(size_tok[1], lineno, "column count") != 1) {
    throw MatrixMarketError(lineno, "expected a single column");
  }
  std::vector<double> v;
  v.reserve(rows);
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line) || line[0] == '%') continue;
    const auto t = tokens(line);
    if (t.size() != 1) throw MatrixMarketError(lineno, "expected one value per line");
    if (v.size() == rows) throw MatrixMarketError(lineno, "more values than declared");
    v.push_back(parse_value(t[0], lineno));
  }
  if (v.size() != rows) {
    throw MatrixMarketError(lineno, "expected " + std::to_string(rows) + " values, found " + std::to_string(v.size()));
  }
  return v;
}

std::vector<double> read_matrix_market_vector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return read_matrix_market_vector(in);
}

void write_matrix_market(std::ostream& out, const CsrMatrix& m, bool symmetric) {
  const auto rp = m.row_ptr();
  const auto ci = m.col_idx();
  const auto v = m.values();
  std::size_t count = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      if (!symmetric || ci[k] <= i) ++count;
    }
  }
  out << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general") << '\n';
  out << m.rows() << ' ' << m.cols() << ' ' << count << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      if (symmetric && ci[k] > i) continue;
      out << i + 1 << ' ' << ci[k] + 1 << ' ';
      put(out, v[k]);
      out << '\n';
    }
  }
}

void write_matrix_market_vector(std::ostream& out, std::span<const double> v) {
  out << "%%MatrixMarket matrix array real general\n";
  out << v.size() << " 1\n";
  for (double x : v) {
    put(out, x);
    out << '\n';
  }
}

}  // namespace mw
