#include "hh3/coefficient.hpp"

#include <utility>
#include <vector>

#include "hh3/errors.hpp"

namespace hh3 {

std::string EpsScalar::str() const {
  if (is_zero()) return "0";
  if (ep.is_zero()) return re.str();
  std::string eps_part;
  if (ep.is_one()) {
    eps_part = "eps";
  } else if (ep == Rational(-1)) {
    eps_part = "-eps";
  } else {
    eps_part = ep.str() + "*eps";
  }
  if (re.is_zero()) return eps_part;
  if (ep.sign() > 0) return "(" + re.str() + " + " + (ep.is_one() ? "eps" : ep.str() + "*eps") + ")";
  Rational nep = -ep;
  return "(" + re.str() + " - " + (nep.is_one() ? "eps" : nep.str() + "*eps") + ")";
}

Coefficient Coefficient::of(Rational r) {
  return of(EpsScalar(r));
}

Coefficient Coefficient::of(EpsScalar s) {
  Coefficient c;
  if (!s.is_zero()) c.monomials_[0] = s;
  return c;
}

Coefficient Coefficient::eps() {
  return of(EpsScalar(Rational(0), Rational(1)));
}

Coefficient Coefficient::dim_n() {
  Coefficient c;
  c.monomials_[1] = EpsScalar(Rational(1));
  return c;
}

bool Coefficient::is_one() const {
  return monomials_.size() == 1 && monomials_.begin()->first == 0 &&
         monomials_.begin()->second == EpsScalar(Rational(1));
}

Coefficient Coefficient::operator-() const {
  Coefficient c;
  for (const auto& [p, s] : monomials_) c.monomials_[p] = -s;
  return c;
}

Coefficient& Coefficient::operator+=(const Coefficient& o) {
  for (const auto& [p, s] : o.monomials_) monomials_[p] += s;
  prune();
  return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& o) {
  for (const auto& [p, s] : o.monomials_) monomials_[p] -= s;
  prune();
  return *this;
}

Coefficient& Coefficient::operator*=(const Coefficient& o) {
  std::map<int, EpsScalar> out;
  for (const auto& [p1, s1] : monomials_)
    for (const auto& [p2, s2] : o.monomials_) out[p1 + p2] += s1 * s2;
  monomials_ = std::move(out);
  prune();
  return *this;
}

Coefficient& Coefficient::mul_eps() {
  for (auto& [p, s] : monomials_) s = s * EpsScalar(Rational(0), Rational(1));
  return *this;
}

Coefficient& Coefficient::mul_n(int k) {
  std::map<int, EpsScalar> out;
  for (auto& [p, s] : monomials_) out[p + k] = s;
  monomials_ = std::move(out);
  return *this;
}

bool operator<(const Coefficient& a, const Coefficient& b) {
  auto key = [](const Coefficient& c) {
    std::vector<std::pair<int, std::pair<Rational, Rational>>> k;
    for (const auto& [p, s] : c.monomials_) k.push_back({p, {s.re, s.ep}});
    return k;
  };
  return key(a) < key(b);
}

bool Coefficient::has_eps() const {
  for (const auto& [p, s] : monomials_)
    if (s.has_eps()) return true;
  return false;
}

int Coefficient::degree_in_n() const {
  if (monomials_.empty()) return -1;
  return monomials_.rbegin()->first;
}

Coefficient Coefficient::substitute_eps(int sign) const {
  Coefficient c;
  for (const auto& [p, s] : monomials_) {
    Rational v = s.eval(sign);
    if (!v.is_zero()) c.monomials_[p] = EpsScalar(v);
  }
  return c;
}

Rational Coefficient::eval(int n_value, std::optional<int> eps_sign) const {
  Rational acc;
  for (const auto& [p, s] : monomials_) {
    Rational v;
    if (s.has_eps()) {
      if (!eps_sign) throw EvalError("coefficient depends on eps but no eps binding given");
      v = s.eval(*eps_sign);
    } else {
      v = s.re;
    }
    Rational npow(1);
    for (int i = 0; i < p; ++i) npow *= Rational(n_value);
    acc += v * npow;
  }
  return acc;
}

std::string Coefficient::str() const {
  if (monomials_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = monomials_.rbegin(); it != monomials_.rend(); ++it) {
    const auto& [p, s] = *it;
    std::string piece = s.str();
    std::string npart;
    if (p == 1) {
      npart = "N";
    } else if (p > 1) {
      npart = "N^" + std::to_string(p);
    }
    if (!npart.empty()) {
      if (s == EpsScalar(Rational(1))) {
        piece = npart;
      } else if (s == EpsScalar(Rational(-1))) {
        piece = "-" + npart;
      } else {
        piece += "*" + npart;
      }
    }
    if (first) {
      out = piece;
      first = false;
    } else if (!piece.empty() && piece[0] == '-') {
      out += " - " + piece.substr(1);
    } else {
      out += " + " + piece;
    }
  }
  if (monomials_.size() > 1) return "(" + out + ")";
  return out;
}

void Coefficient::prune() {
  for (auto it = monomials_.begin(); it != monomials_.end();) {
    if (it->second.is_zero()) {
      it = monomials_.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace hh3
