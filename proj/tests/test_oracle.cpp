#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "mw/counting_scalar.hpp"
#include "mw/exact.hpp"
#include "support.hpp"

using mw::ExactValue;
using mw::exact;

TEST_CASE("from_fp64 canonical form") {
  auto one = exact(1.0);
  CHECK(one.sign() == 1);
  CHECK(one.mantissa() == 1);
  CHECK(one.exponent() == 0);

  auto q = exact(0.75);
  CHECK(q.sign() == 1);
  CHECK(q.mantissa() == 3);
  CHECK(q.exponent() == -2);

  auto u = exact(0x1p-53);
  CHECK(u.sign() == 1);
  CHECK(u.mantissa() == 1);
  CHECK(u.exponent() == -53);

  auto n = exact(-12.0);
  CHECK(n.sign() == -1);
  CHECK(n.mantissa() == 3);
  CHECK(n.exponent() == 2);

  CHECK(exact(0.0).is_zero());
  CHECK(exact(-0.0).is_zero());
  CHECK(exact(0x1p-1074).exponent() == -1074);
}

TEST_CASE("non-finite input is rejected") {
  CHECK_THROWS_AS(exact(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  CHECK_THROWS_AS(exact(std::numeric_limits<double>::infinity()), std::domain_error);
  CHECK_THROWS_AS(exact(-std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("field arithmetic") {
  const ExactValue tenth = exact(0.1);
  CHECK(tenth + tenth == exact(2.0) * tenth);
  CHECK(tenth - tenth == ExactValue());
  CHECK(-(-tenth) == tenth);

  support::Rng rng(21);
  for (int i = 0; i < 2000; ++i) {
    const auto a = exact(rng.fp64(-300, 300));
    const auto b = exact(rng.fp64(-300, 300));
    const auto c = exact(rng.fp64(-300, 300));
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
  }
}

TEST_CASE("ordering") {
  CHECK(exact(1.0) < exact(2.0));
  CHECK(exact(-2.0) < exact(-1.0));
  CHECK(exact(-1.0) < ExactValue());
  CHECK(exact(1.0) + exact(0x1p-200) > exact(1.0));
  CHECK(exact(0.5) == ExactValue::from_parts(1, 1, -1));
  CHECK(ExactValue::from_parts(1, 12, 0) == exact(12.0));
  CHECK(exact(3.0).scaled(-1) == exact(1.5));
  CHECK(exact(-3.0).abs() == exact(3.0));
}

TEST_CASE("rounding to FP64") {
  // tie goes to even
  CHECK((exact(1.0) + exact(0x1p-53)).to_fp64() == 1.0);
  CHECK((exact(1.0) + exact(0x1p-53) * exact(3.0)).to_fp64() == 1.0 + 0x1p-51);
  // 1 + 1.5 * 2^-52 lies above the midpoint between 1 + 2^-52 and 1 + 2^-51
  const ExactValue x = exact(1.0) + exact(0x1p-52) * exact(1.5);
  const double r = x.to_fp64();
  CHECK(r == 1.0 + 0x1p-51);
  CHECK(std::bit_cast<std::uint64_t>(r) == 0x3ff0000000000002ULL);
  // just above a tie rounds up
  CHECK((exact(1.0) + exact(0x1p-53) + exact(0x1p-200)).to_fp64() == 1.0 + 0x1p-52);
  // just below a tie rounds down
  CHECK((exact(1.0) + exact(0x1p-53) - exact(0x1p-200)).to_fp64() == 1.0);
  // overflow and gradual underflow
  CHECK((exact(0x1.fffffffffffffp+1023) * exact(2.0)).to_fp64() == std::numeric_limits<double>::infinity());
  CHECK((exact(-0x1.fffffffffffffp+1023) * exact(2.0)).to_fp64() == -std::numeric_limits<double>::infinity());
  CHECK((exact(0x1p-1074) * exact(0.5)).to_fp64() == 0.0);
  CHECK((exact(0x1p-1074) * exact(0.75)).to_fp64() == 0x1p-1074);
  CHECK((exact(0x1p-1022) * exact(0x1.8p-1)).to_fp64() == 0x1.8p-1023);
}

TEST_CASE("round trip through the oracle") {
  support::Rng rng(22);
  for (int i = 0; i < 50000; ++i) {
    const double x = std::bit_cast<double>(rng.bits());
    if (!std::isfinite(x)) continue;
    REQUIRE(std::bit_cast<std::uint64_t>(exact(x).to_fp64()) ==
            std::bit_cast<std::uint64_t>(x == 0.0 ? 0.0 : x));
  }
}

TEST_CASE("oracle rounding agrees with hardware arithmetic") {
  support::Rng rng(23);
  for (int i = 0; i < 50000; ++i) {
    const double a = rng.fp64(-200, 200);
    const double b = rng.fp64(-200, 200);
    REQUIRE((exact(a) + exact(b)).to_fp64() == a + b);
    REQUIRE((exact(a) * exact(b)).to_fp64() == a * b);
    REQUIRE((exact(a) - exact(b)).to_fp64() == a - b);
  }
}

TEST_CASE("relative error helpers") {
  CHECK(mw::relative_error(exact(1.0), exact(1.0)) == 0.0);
  CHECK(mw::relative_error(exact(1.0 + 0x1p-40), exact(1.0)) == doctest::Approx(0x1p-40).epsilon(1e-12));
  CHECK(mw::relative_error(ExactValue(), ExactValue()) == 0.0);
  CHECK(std::isinf(mw::relative_error(exact(1.0), ExactValue())));
  CHECK(mw::within_relative(exact(1.0 + 0x1p-40), exact(1.0), 40));
  CHECK_FALSE(mw::within_relative(exact(1.0 + 0x1p-40), exact(1.0), 41));
}

TEST_CASE("decimal rendering") {
  CHECK(exact(1.0).to_decimal(5) == "1.0000e+00");
  CHECK(exact(-0.125).to_decimal(3) == "-1.25e-01");
  CHECK(ExactValue().to_decimal(3) == "0");
}

TEST_CASE("counting scalar") {
  using C = mw::CountingScalar;
  const C a(3.0), b(0.5);
  CHECK(mw::count_operations([&] { (void)(a + b); }) == 1);
  CHECK(mw::count_operations([&] { (void)(a - b); }) == 1);
  CHECK(mw::count_operations([&] { (void)(a * b); }) == 1);
  CHECK(mw::count_operations([&] { (void)(a / b); }) == 1);
  CHECK(mw::count_operations([&] { (void)fma(a, b, a); }) == 1);
  CHECK(mw::count_operations([&] { (void)(-a); }) == 0);
  CHECK(mw::count_operations([&] { (void)(a < b); }) == 0);
  CHECK(mw::count_operations([&] { (void)magnitude(-a); }) == 0);
  CHECK((a * b + a).value() == 4.5);
  CHECK(fma(a, b, a).value() == 4.5);
}
