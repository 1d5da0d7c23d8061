#include "mw/text.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mw/exact.hpp"

namespace mw {

namespace {

std::vector<std::string_view> split_words(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
    if (j > i) words.push_back(text.substr(i, j - i));
    i = j;
  }
  return words;
}

template <std::size_t N>
std::array<double, N> parse_words(std::string_view text) {
  auto words = split_words(text);
  if (words.size() != N) {
    throw std::invalid_argument("expected " + std::to_string(N) + " hex words, got " +
                                std::to_string(words.size()));
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = parse_hex_double(words[i]);
  return out;
}

}  // namespace

std::string to_hex(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), std::fabs(x),
                                 std::chars_format::hex);
  std::string out = std::signbit(x) ? "-0x" : "0x";
  out.append(buf.data(), end);
  return out;
}

std::string to_hex(const DoubleWord& a) { return to_hex(a.w0) + ' ' + to_hex(a.w1); }

std::string to_hex(const TripleWord& a) {
  return to_hex(a.w0) + ' ' + to_hex(a.w1) + ' ' + to_hex(a.w2);
}

double parse_hex_double(std::string_view text) {
  std::string_view t = text;
  bool negative = false;
  if (!t.empty() && (t.front() == '-' || t.front() == '+')) {
    negative = t.front() == '-';
    t.remove_prefix(1);
  }
  if (t == "inf") return negative ? -INFINITY : INFINITY;
  if (t == "nan") return NAN;
  if (t.size() < 3 || t[0] != '0' || (t[1] != 'x' && t[1] != 'X')) {
    throw std::invalid_argument("not a hex float: '" + std::string(text) + "'");
  }
  t.remove_prefix(2);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v, std::chars_format::hex);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw std::invalid_argument("not a hex float: '" + std::string(text) + "'");
  }
  return negative ? -v : v;
}

DoubleWord parse_double_word(std::string_view text) {
  auto w = parse_words<2>(text);
  return {w[0], w[1]};
}

TripleWord parse_triple_word(std::string_view text) {
  auto w = parse_words<3>(text);
  return {w[0], w[1], w[2]};
}

std::string to_decimal(const DoubleWord& a, int digits) { return exact(a).to_decimal(digits); }

std::string to_decimal(const TripleWord& a, int digits) { return exact(a).to_decimal(digits); }

}  // namespace mw
