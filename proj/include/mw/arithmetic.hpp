#pragma once

// The five arithmetics a solver can run in, packaged as policy types so the
// kernels and the CG state machine are written once.
//
// Each policy provides
//   value_type              element and scalar type
//   add, mul, div           full value x value operations
//   scale(a, x)             FP64 x value  (matrix entries enter here)
//   add_fp64(a, x)          FP64 + value
//   normalize(x)            identity outside the quasi modes
//   to_fp64(x)              high-to-low collapse
//   to_triple(x)            exact promotion for triple-word reporting

#include <optional>
#include <string>
#include <string_view>

#include "mw/multiword.hpp"

namespace mw {

enum class Mode { fp64, dw, qdw, tw, qtw };

inline constexpr Mode all_modes[] = {Mode::fp64, Mode::dw, Mode::qdw, Mode::tw, Mode::qtw};

std::string_view to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view s);

struct Fp64Arith {
  using value_type = double;
  static constexpr Mode mode = Mode::fp64;
  static constexpr bool quasi = false;
  static constexpr int words = 1;

  static double from_fp64(double a) { return a; }
  static double add(double a, double b) { return a + b; }
  static double mul(double a, double b) { return a * b; }
  static double div(double a, double b) { return a / b; }
  static double scale(double a, double x) { return a * x; }
  static double add_fp64(double a, double x) { return a + x; }
  static double normalize(double x) { return x; }
  static double to_fp64(double x) { return x; }
  static TripleWord to_triple(double x) { return {x, 0.0, 0.0}; }
};

struct DwArith {
  using value_type = DoubleWord;
  static constexpr Mode mode = Mode::dw;
  static constexpr bool quasi = false;
  static constexpr int words = 2;

  static DoubleWord from_fp64(double a) { return {a, 0.0}; }
  static DoubleWord add(const DoubleWord& a, const DoubleWord& b) { return dw_add(a, b); }
  static DoubleWord mul(const DoubleWord& a, const DoubleWord& b) { return dw_mul(a, b); }
  static DoubleWord div(const DoubleWord& a, const DoubleWord& b) { return dw_div(a, b); }
  static DoubleWord scale(double a, const DoubleWord& x) { return dxdw_mul(a, x); }
  static DoubleWord add_fp64(double a, const DoubleWord& x) { return dxdw_add(a, x); }
  static DoubleWord normalize(const DoubleWord& x) { return x; }
  static double to_fp64(const DoubleWord& x) { return mw::to_fp64(x); }
  static TripleWord to_triple(const DoubleWord& x) { return {x.w0, x.w1, 0.0}; }
};

struct QdwArith {
  using value_type = DoubleWord;
  static constexpr Mode mode = Mode::qdw;
  static constexpr bool quasi = true;
  static constexpr int words = 2;

  static DoubleWord from_fp64(double a) { return {a, 0.0}; }
  static DoubleWord add(const DoubleWord& a, const DoubleWord& b) { return qdw_add(a, b); }
  static DoubleWord mul(const DoubleWord& a, const DoubleWord& b) { return qdw_mul(a, b); }
  static DoubleWord div(const DoubleWord& a, const DoubleWord& b) { return qdw_div(a, b); }
  static DoubleWord scale(double a, const DoubleWord& x) { return dxqdw_mul(a, x); }
  static DoubleWord add_fp64(double a, const DoubleWord& x) { return dxqdw_add(a, x); }
  static DoubleWord normalize(const DoubleWord& x) { return normalize_dw(x); }
  static double to_fp64(const DoubleWord& x) { return mw::to_fp64(x); }
  static TripleWord to_triple(const DoubleWord& x) { return {x.w0, x.w1, 0.0}; }
};

struct TwArith {
  using value_type = TripleWord;
  static constexpr Mode mode = Mode::tw;
  static constexpr bool quasi = false;
  static constexpr int words = 3;

  static TripleWord from_fp64(double a) { return {a, 0.0, 0.0}; }
  static TripleWord add(const TripleWord& a, const TripleWord& b) { return tw_add(a, b); }
  static TripleWord mul(const TripleWord& a, const TripleWord& b) { return tw_mul(a, b); }
  static TripleWord div(const TripleWord& a, const TripleWord& b) { return tw_div(a, b); }
  static TripleWord scale(double a, const TripleWord& x) { return dxtw_mul(a, x); }
  static TripleWord add_fp64(double a, const TripleWord& x) { return dxtw_add(a, x); }
  static TripleWord normalize(const TripleWord& x) { return x; }
  static double to_fp64(const TripleWord& x) { return mw::to_fp64(x); }
  static TripleWord to_triple(const TripleWord& x) { return x; }
};

struct QtwArith {
  using value_type = TripleWord;
  static constexpr Mode mode = Mode::qtw;
  static constexpr bool quasi = true;
  static constexpr int words = 3;

  static TripleWord from_fp64(double a) { return {a, 0.0, 0.0}; }
  static TripleWord add(const TripleWord& a, const TripleWord& b) { return qtw_add(a, b); }
  static TripleWord mul(const TripleWord& a, const TripleWord& b) { return qtw_mul(a, b); }
  static TripleWord div(const TripleWord& a, const TripleWord& b) { return qtw_div(a, b); }
  static TripleWord scale(double a, const TripleWord& x) { return dxqtw_mul(a, x); }
  static TripleWord add_fp64(double a, const TripleWord& x) { return dxqtw_add(a, x); }
  static TripleWord normalize(const TripleWord& x) { return normalize_tw(x); }
  static double to_fp64(const TripleWord& x) { return mw::to_fp64(x); }
  static TripleWord to_triple(const TripleWord& x) { return x; }
};

// Calls f(Arith{}) with the policy matching `m`.
template <typename F>
decltype(auto) dispatch(Mode m, F&& f) {
  switch (m) {
    case Mode::fp64: return f(Fp64Arith{});
    case Mode::dw: return f(DwArith{});
    case Mode::qdw: return f(QdwArith{});
    case Mode::tw: return f(TwArith{});
    case Mode::qtw: break;
  }
  return f(QtwArith{});
}

}  // namespace mw
