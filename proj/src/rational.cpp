#include "hh3/rational.hpp"

#include <charconv>
#include <limits>
#include <ostream>

namespace hh3 {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long long narrow(__int128 v) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min()) {
    throw OverflowError("rational arithmetic overflowed 64 bits");
  }
  return static_cast<long long>(v);
}

long long parse_ll(std::string_view s) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("cannot parse integer: '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

Rational Rational::from_i128(__int128 num, __int128 den) {
  if (den == 0) throw Error("rational with zero denominator");
  if (num == 0) return Rational();
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = gcd128(num, den);
  Rational r;
  r.num_ = narrow(num / g);
  r.den_ = narrow(den / g);
  return r;
}

Rational::Rational(long long num, long long den) {
  *this = from_i128(num, den);
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_ll(text));
  return Rational(parse_ll(text.substr(0, slash)), parse_ll(text.substr(slash + 1)));
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = narrow(-static_cast<__int128>(num_));
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  *this = from_i128(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                    static_cast<__int128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  *this = from_i128(static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_,
                    static_cast<__int128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  *this = from_i128(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw Error("division by zero rational");
  *this = from_i128(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
  return *this;
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

Rational Rational::inverse() const {
  if (num_ == 0) throw Error("inverse of zero rational");
  return from_i128(den_, num_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace hh3
