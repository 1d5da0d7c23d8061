#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "mw/exact.hpp"
#include "mw/multiword.hpp"

namespace support {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen_); }

  // Random 53-bit mantissa and sign, exponent uniform in [lo, hi].
  double fp64(int lo, int hi) {
    const double m = std::ldexp(static_cast<double>((gen_() >> 11) | (std::uint64_t{1} << 52)), -52);
    const double x = std::ldexp(m, integer(lo, hi));
    return (gen_() & 1) ? -x : x;
  }

  double positive(int lo, int hi) { return std::fabs(fp64(lo, hi)); }

  // Normalized double-word with leading word `hi`: fl(w0 + w1) == w0.
  mw::DoubleWord dw(double hi) {
    while (true) {
      const double lo = std::ldexp(fp64(0, 0), std::ilogb(hi) - 54 - integer(0, 4));
      if (hi + lo == hi) return {hi, lo};
    }
  }

  // Normalized triple-word: fl(w0 + w1) == w0 and fl(w1 + w2) == w1.
  mw::TripleWord tw(double hi) {
    const mw::DoubleWord d = dw(hi);
    while (true) {
      const double lo = std::ldexp(fp64(0, 0), std::ilogb(d.w1) - 54 - integer(0, 4));
      if (d.w1 + lo == d.w1) return {d.w0, d.w1, lo};
    }
  }

  // Words of comparable size in any order.
  mw::DoubleWord overlapping_dw() {
    const double a = fp64(-30, 30);
    return {a, std::ldexp(fp64(0, 0), std::ilogb(a) + integer(-60, 10))};
  }

  mw::TripleWord overlapping_tw() {
    const double a = fp64(-30, 30);
    return {a, std::ldexp(fp64(0, 0), std::ilogb(a) + integer(-60, 10)),
            std::ldexp(fp64(0, 0), std::ilogb(a) + integer(-110, 10))};
  }

 private:
  std::mt19937_64 gen_;
};

inline bool is_normalized(const mw::DoubleWord& a) { return a.w0 + a.w1 == a.w0; }
inline bool is_normalized(const mw::TripleWord& a) { return a.w0 + a.w1 == a.w0 && a.w1 + a.w2 == a.w1; }

}  // namespace support
