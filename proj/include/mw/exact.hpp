#pragma once

// Exact dyadic rationals, value = sign * mantissa * 2^exponent.
//
// Used as ground truth for the multiword library and by the problem
// generator. Sums, differences and products of FP64 values are always
// representable, so nothing here ever rounds except to_fp64().

#include <compare>
#include <string>

#include <gmpxx.h>

#include "mw/multiword.hpp"

namespace mw {

class ExactValue {
 public:
  ExactValue() = default;

  // Throws std::domain_error for NaN or infinity.
  static ExactValue from_fp64(double x);
  // sign * mantissa * 2^exponent; canonicalized on construction.
  static ExactValue from_parts(int sign, mpz_class mantissa, long exponent);

  int sign() const { return sign_; }
  const mpz_class& mantissa() const { return mantissa_; }
  long exponent() const { return exponent_; }
  bool is_zero() const { return sign_ == 0; }

  // Multiplication by 2^k, exact.
  ExactValue scaled(long k) const;
  ExactValue abs() const;

  // Round to nearest, ties to even, with gradual underflow. Overflow gives a
  // signed infinity.
  double to_fp64() const;

  // `digits` significant decimal digits, scientific notation. Display only.
  std::string to_decimal(int digits = 40) const;

  friend ExactValue operator+(const ExactValue& a, const ExactValue& b);
  friend ExactValue operator-(const ExactValue& a, const ExactValue& b);
  friend ExactValue operator*(const ExactValue& a, const ExactValue& b);
  friend ExactValue operator-(const ExactValue& a);

  friend bool operator==(const ExactValue& a, const ExactValue& b);
  friend std::strong_ordering operator<=>(const ExactValue& a, const ExactValue& b);

 private:
  void canonicalize();

  int sign_ = 0;
  mpz_class mantissa_ = 0;  // odd, or zero when sign_ == 0
  long exponent_ = 0;
};

inline ExactValue exact(double x) { return ExactValue::from_fp64(x); }
inline ExactValue exact(const DoubleWord& a) { return exact(a.w0) + exact(a.w1); }
inline ExactValue exact(const TripleWord& a) {
  return exact(a.w0) + exact(a.w1) + exact(a.w2);
}

// |approx - reference| / |reference| as a double (approximate, for reporting).
// Returns 0 when both are zero and +inf when only the reference is.
double relative_error(const ExactValue& approx, const ExactValue& reference);

// Exact test of |approx - reference| <= 2^-bits * |reference|.
bool within_relative(const ExactValue& approx, const ExactValue& reference, long bits);

}  // namespace mw
