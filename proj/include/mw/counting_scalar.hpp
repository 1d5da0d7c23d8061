#pragma once

#include <cmath>
#include <cstdint>

namespace mw {

// An FP64 stand-in that counts every rounded operation it performs.
//
// add, sub, mul, div and fma each add one to a thread-local counter.
// Negation, comparisons and magnitude are sign/ordering manipulations and
// are free, matching the usual flop bookkeeping. Multiword algorithms are
// templates, so instantiating them with this type yields their exact
// operation counts.
class CountingScalar {
 public:
  CountingScalar() = default;
  constexpr explicit CountingScalar(double v) : value_(v) {}

  constexpr double value() const { return value_; }

  static std::uint64_t count() { return counter(); }
  static void reset() { counter() = 0; }

  friend CountingScalar operator+(CountingScalar a, CountingScalar b) {
    ++counter();
    return CountingScalar(a.value_ + b.value_);
  }
  friend CountingScalar operator-(CountingScalar a, CountingScalar b) {
    ++counter();
    return CountingScalar(a.value_ - b.value_);
  }
  friend CountingScalar operator*(CountingScalar a, CountingScalar b) {
    ++counter();
    return CountingScalar(a.value_ * b.value_);
  }
  friend CountingScalar operator/(CountingScalar a, CountingScalar b) {
    ++counter();
    return CountingScalar(a.value_ / b.value_);
  }
  friend CountingScalar operator-(CountingScalar a) { return CountingScalar(-a.value_); }

  friend CountingScalar fma(CountingScalar a, CountingScalar b, CountingScalar c) {
    ++counter();
    return CountingScalar(std::fma(a.value_, b.value_, c.value_));
  }
  friend CountingScalar magnitude(CountingScalar a) { return CountingScalar(std::fabs(a.value_)); }

  friend bool operator==(CountingScalar a, CountingScalar b) { return a.value_ == b.value_; }
  friend bool operator!=(CountingScalar a, CountingScalar b) { return a.value_ != b.value_; }
  friend bool operator<(CountingScalar a, CountingScalar b) { return a.value_ < b.value_; }
  friend bool operator>(CountingScalar a, CountingScalar b) { return a.value_ > b.value_; }
  friend bool operator<=(CountingScalar a, CountingScalar b) { return a.value_ <= b.value_; }
  friend bool operator>=(CountingScalar a, CountingScalar b) { return a.value_ >= b.value_; }

 private:
  static std::uint64_t& counter() {
    thread_local std::uint64_t n = 0;
    return n;
  }

  double value_ = 0.0;
};

// Counts the flops executed by f() on the calling thread.
template <typename F>
std::uint64_t count_operations(F&& f) {
  CountingScalar::reset();
  f();
  return CountingScalar::count();
}

}  // namespace mw
