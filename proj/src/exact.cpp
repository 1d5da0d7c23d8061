#include "mw/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <utility>

namespace mw {

namespace {

constexpr long kMinExponent = -1074;  // lsb of the smallest subnormal
constexpr long kPrecision = 53;

long bit_length(const mpz_class& m) { return static_cast<long>(mpz_sizeinbase(m.get_mpz_t(), 2)); }

mpz_class shifted_left(const mpz_class& m, long k) {
  mpz_class r;
  mpz_mul_2exp(r.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  return r;
}

}  // namespace

ExactValue ExactValue::from_fp64(double x) {
  if (!std::isfinite(x)) throw std::domain_error("ExactValue: non-finite FP64 input");
  ExactValue v;
  if (x == 0.0) return v;

  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof bits);
  const bool negative = (bits >> 63) != 0;
  const long biased = static_cast<long>((bits >> 52) & 0x7ff);
  std::uint64_t frac = bits & ((std::uint64_t{1} << 52) - 1);
  long exponent;
  if (biased == 0) {
    exponent = kMinExponent;
  } else {
    frac |= std::uint64_t{1} << 52;
    exponent = biased - 1075;
  }
  v.sign_ = negative ? -1 : 1;
  v.mantissa_ = static_cast<unsigned long>(frac);
  v.exponent_ = exponent;
  v.canonicalize();
  return v;
}

ExactValue ExactValue::from_parts(int sign, mpz_class mantissa, long exponent) {
  ExactValue v;
  if (mantissa < 0) {
    mantissa = -mantissa;
    sign = -sign;
  }
  v.sign_ = (sign == 0 || mantissa == 0) ? 0 : (sign > 0 ? 1 : -1);
  v.mantissa_ = std::move(mantissa);
  v.exponent_ = exponent;
  v.canonicalize();
  return v;
}

void ExactValue::canonicalize() {
  if (sign_ == 0 || mantissa_ == 0) {
    sign_ = 0;
    mantissa_ = 0;
    exponent_ = 0;
    return;
  }
  const auto tz = mpz_scan1(mantissa_.get_mpz_t(), 0);
  if (tz > 0) {
    mpz_fdiv_q_2exp(mantissa_.get_mpz_t(), mantissa_.get_mpz_t(), tz);
    exponent_ += static_cast<long>(tz);
  }
}

ExactValue ExactValue::scaled(long k) const {
  ExactValue v = *this;
  if (!v.is_zero()) v.exponent_ += k;
  return v;
}

ExactValue ExactValue::abs() const {
  ExactValue v = *this;
  if (v.sign_ < 0) v.sign_ = 1;
  return v;
}

ExactValue operator-(const ExactValue& a) {
  ExactValue v = a;
  v.sign_ = -v.sign_;
  return v;
}

ExactValue operator+(const ExactValue& a, const ExactValue& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const long e = std::min(a.exponent_, b.exponent_);
  mpz_class ma = shifted_left(a.mantissa_, a.exponent_ - e);
  mpz_class mb = shifted_left(b.mantissa_, b.exponent_ - e);
  if (a.sign_ < 0) ma = -ma;
  if (b.sign_ < 0) mb = -mb;
  return ExactValue::from_parts(1, ma + mb, e);
}

ExactValue operator-(const ExactValue& a, const ExactValue& b) { return a + (-b); }

ExactValue operator*(const ExactValue& a, const ExactValue& b) {
  ExactValue v;
  if (a.is_zero() || b.is_zero()) return v;
  v.sign_ = a.sign_ * b.sign_;
  v.mantissa_ = a.mantissa_ * b.mantissa_;
  v.exponent_ = a.exponent_ + b.exponent_;
  return v;  // product of odd mantissas is odd
}

bool operator==(const ExactValue& a, const ExactValue& b) {
  return a.sign_ == b.sign_ && a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
}

std::strong_ordering operator<=>(const ExactValue& a, const ExactValue& b) {
  const ExactValue d = a - b;
  return d.sign_ <=> 0;
}

double ExactValue::to_fp64() const {
  if (is_zero()) return 0.0;
  const long len = bit_length(mantissa_);
  const long top = exponent_ + len - 1;
  const long lsb = std::max(top - (kPrecision - 1), kMinExponent);

  mpz_class q = mantissa_;
  long e = exponent_;
  if (e < lsb) {
    const long shift = lsb - e;
    mpz_class rem;
    mpz_fdiv_q_2exp(q.get_mpz_t(), mantissa_.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    mpz_fdiv_r_2exp(rem.get_mpz_t(), mantissa_.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    const mpz_class half = shifted_left(mpz_class(1), shift - 1);
    const int cmp_half = cmp(rem, half);
    if (cmp_half > 0 || (cmp_half == 0 && mpz_odd_p(q.get_mpz_t()))) ++q;
    e = lsb;
  }
  // q has at most 54 bits (54 only after a carry to a power of two), so the
  // conversion below is exact.
  if (e > std::numeric_limits<int>::max() / 2) {
    return sign_ * std::numeric_limits<double>::infinity();
  }
  const double r = std::ldexp(q.get_d(), static_cast<int>(e));
  return sign_ < 0 ? -r : r;
}

std::string ExactValue::to_decimal(int digits) const {
  if (digits < 1) digits = 1;
  if (is_zero()) return "0";

  // Estimate the decimal exponent of the leading digit.
  long e2;
  const double frac = mpz_get_d_2exp(&e2, mantissa_.get_mpz_t());
  const double log10v = std::log10(frac) + static_cast<double>(e2 + exponent_) * std::log10(2.0);
  long k = static_cast<long>(std::floor(log10v));

  mpz_class scaled_digits;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const long p = digits - 1 - k;  // multiply by 10^p
    mpz_class num = mantissa_;
    mpz_class den = 1;
    if (exponent_ >= 0) {
      num = shifted_left(num, exponent_);
    } else {
      den = shifted_left(den, -exponent_);
    }
    mpz_class ten;
    if (p >= 0) {
      mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(p));
      num *= ten;
    } else {
      mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(-p));
      den *= ten;
    }
    // round half up
    num = 2 * num + den;
    den = 2 * den;
    mpz_fdiv_q(scaled_digits.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());

    mpz_class lower, upper;
    mpz_ui_pow_ui(lower.get_mpz_t(), 10, static_cast<unsigned long>(digits - 1));
    mpz_ui_pow_ui(upper.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    if (scaled_digits >= upper) {
      ++k;
    } else if (scaled_digits < lower) {
      --k;
    } else {
      break;
    }
  }

  std::string s = scaled_digits.get_str();
  std::string out;
  if (sign_ < 0) out += '-';
  out += s[0];
  if (s.size() > 1) {
    out += '.';
    out.append(s, 1, std::string::npos);
  }
  out += 'e';
  out += (k < 0 ? '-' : '+');
  const long ak = k < 0 ? -k : k;
  if (ak < 10) out += '0';
  out += std::to_string(ak);
  return out;
}

double relative_error(const ExactValue& approx, const ExactValue& reference) {
  const ExactValue diff = (approx - reference).abs();
  if (diff.is_zero()) return 0.0;
  if (reference.is_zero()) return std::numeric_limits<double>::infinity();
  long ed, er;
  const double md = mpz_get_d_2exp(&ed, diff.mantissa().get_mpz_t());
  const double mr = mpz_get_d_2exp(&er, reference.mantissa().get_mpz_t());
  const long shift = (ed + diff.exponent()) - (er + reference.exponent());
  return std::ldexp(md / mr, static_cast<int>(std::clamp(shift, -4000L, 4000L)));
}

bool within_relative(const ExactValue& approx, const ExactValue& reference, long bits) {
  const ExactValue diff = (approx - reference).abs();
  return diff <= reference.abs().scaled(-bits);
}

}  // namespace mw
