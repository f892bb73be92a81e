#pragma once

#include <map>
#include <optional>
#include <string>

#include "hh3/rational.hpp"

namespace hh3 {

/// Element a + b*eps of the ring Q[eps]/(eps^2 - 1). eps is the symmetry sign
/// of the bilinear form (E^T = eps * E), kept symbolic so one computation
/// certifies both the symmetric and antisymmetric case.
struct EpsScalar {
  Rational re;
  Rational ep;

  EpsScalar() = default;
  EpsScalar(Rational r) : re(r) {}  // NOLINT
  EpsScalar(Rational r, Rational e) : re(r), ep(e) {}

  bool is_zero() const { return re.is_zero() && ep.is_zero(); }

  EpsScalar operator-() const { return {-re, -ep}; }
  EpsScalar& operator+=(const EpsScalar& o) {
    re += o.re;
    ep += o.ep;
    return *this;
  }
  EpsScalar& operator-=(const EpsScalar& o) {
    re -= o.re;
    ep -= o.ep;
    return *this;
  }
  friend EpsScalar operator+(EpsScalar a, const EpsScalar& b) { return a += b; }
  friend EpsScalar operator-(EpsScalar a, const EpsScalar& b) { return a -= b; }
  friend EpsScalar operator*(const EpsScalar& a, const EpsScalar& b) {
    // (a1 + b1 e)(a2 + b2 e) = (a1 a2 + b1 b2) + (a1 b2 + b1 a2) e, e^2 = 1
    return {a.re * b.re + a.ep * b.ep, a.re * b.ep + a.ep * b.re};
  }
  friend bool operator==(const EpsScalar& a, const EpsScalar& b) {
    return a.re == b.re && a.ep == b.ep;
  }

  /// Substitute eps := sign (+1 or -1).
  Rational eval(int sign) const { return re + Rational(sign) * ep; }

  bool has_eps() const { return !ep.is_zero(); }

  std::string str() const;
};

/// Term coefficient: a polynomial in the symbolic comodule dimension N with
/// EpsScalar coefficients. Zero coefficients are never stored, so the zero
/// polynomial has a unique (empty) representation.
class Coefficient {
 public:
  Coefficient() = default;  // zero

  static Coefficient zero() { return {}; }
  static Coefficient one() { return of(Rational(1)); }
  static Coefficient of(Rational r);
  static Coefficient of(EpsScalar s);
  static Coefficient eps();
  /// The symbol N (one closed delta loop).
  static Coefficient dim_n();

  bool is_zero() const { return monomials_.empty(); }
  bool is_one() const;

  Coefficient operator-() const;
  Coefficient& operator+=(const Coefficient& o);
  Coefficient& operator-=(const Coefficient& o);
  Coefficient& operator*=(const Coefficient& o);
  friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
  friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
  friend Coefficient operator*(Coefficient a, const Coefficient& b) { return a *= b; }

  Coefficient& mul_eps();          // multiply by eps
  Coefficient& mul_n(int k = 1);   // multiply by N^k

  friend bool operator==(const Coefficient& a, const Coefficient& b) {
    return a.monomials_ == b.monomials_;
  }
  friend bool operator!=(const Coefficient& a, const Coefficient& b) { return !(a == b); }
  friend bool operator<(const Coefficient& a, const Coefficient& b);

  bool has_eps() const;
  int degree_in_n() const;  // -1 for zero

  /// Substitute eps := sign, keep N symbolic.
  Coefficient substitute_eps(int sign) const;

  /// Ground value at concrete N (and eps when present; missing eps binding
  /// with eps-dependent coefficient throws EvalError).
  Rational eval(int n_value, std::optional<int> eps_sign = std::nullopt) const;

  std::string str() const;

 private:
  // N-power -> coefficient; invariant: no zero entries.
  std::map<int, EpsScalar> monomials_;

  void prune();
};

}  // namespace hh3
