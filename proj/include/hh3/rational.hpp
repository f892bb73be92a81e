#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "hh3/errors.hpp"

namespace hh3 {

/// Exact rational number over 64-bit integers, always stored reduced with a
/// positive denominator. Intermediate products run in 128-bit arithmetic;
/// results that do not fit back into 64 bits throw OverflowError rather than
/// silently wrapping.
class Rational {
 public:
  Rational() = default;
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(long long num, long long den);

  /// Parses "p", "-p", or "p/q".
  static Rational parse(std::string_view text);

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  Rational abs() const { return num_ < 0 ? -*this : *this; }
  Rational inverse() const;

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "p" when the denominator is 1, otherwise "p/q".
  std::string str() const;

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  static Rational from_i128(__int128 num, __int128 den);

  long long num_ = 0;
  long long den_ = 1;
};

}  // namespace hh3
