#include "hh3/chain.hpp"

#include <string>

#include "hh3/errors.hpp"
#include "hh3/rng.hpp"

namespace hh3 {

namespace {
constexpr int kMaxDegree = 4;
}

Chain::Chain(int degree) : degree_(degree) {
  if (degree < 0 || degree > kMaxDegree) {
    throw StructureError("chain degree must be between 0 and " + std::to_string(kMaxDegree));
  }
}

Chain Chain::from_terms(int degree, std::vector<Term> ts) {
  Chain c(degree);
  for (const Term& t : ts) {
    if (t.degree() != degree) throw StructureError("chain term degree mismatch");
  }
  c.terms_ = std::move(ts);
  return c;
}

Chain& Chain::operator+=(const Chain& o) {
  if (o.degree_ != degree_) throw StructureError("chain degree mismatch in sum");
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

Chain& Chain::operator-=(const Chain& o) {
  if (o.degree_ != degree_) throw StructureError("chain degree mismatch in difference");
  for (const Term& t : o.terms_) {
    Term neg = t;
    neg.coeff = -neg.coeff;
    terms_.push_back(std::move(neg));
  }
  return *this;
}

Chain normalize(const Chain& c, const RuleSet& rules, NormalizeStats* stats) {
  return Chain::from_terms(c.degree(), normalize_terms(c.terms(), rules, stats));
}

std::string render(const Chain& c) {
  return render(c.terms());
}

Chain boundary(const Chain& c) {
  const int n = c.degree();
  if (n < 1) throw StructureError("boundary of a degree-0 chain");
  std::vector<Term> out;
  for (const Term& t : c.terms()) {
    for (int i = 0; i < n; ++i) {
      Term s;
      s.coeff = (i % 2 == 0) ? t.coeff : -t.coeff;
      s.scalars = t.scalars;
      s.factors.clear();
      for (int f = 0; f < i; ++f) s.factors.push_back(t.factors[f]);
      Word merged = t.factors[i];
      merged.insert(merged.end(), t.factors[i + 1].begin(), t.factors[i + 1].end());
      s.factors.push_back(std::move(merged));
      for (int f = i + 2; f <= n; ++f) s.factors.push_back(t.factors[f]);
      out.push_back(std::move(s));
    }
    // wrap-around term: (-1)^n a_n a_0 (x) a_1 (x) ... (x) a_{n-1}
    Term w;
    w.coeff = (n % 2 == 0) ? t.coeff : -t.coeff;
    w.scalars = t.scalars;
    Word merged = t.factors[n];
    merged.insert(merged.end(), t.factors[0].begin(), t.factors[0].end());
    w.factors.clear();
    w.factors.push_back(std::move(merged));
    for (int f = 1; f < n; ++f) w.factors.push_back(t.factors[f]);
    out.push_back(std::move(w));
  }
  return Chain::from_terms(n - 1, normalize_terms(out, RuleSet::contract()));
}

Chain build_cv() {
  const Index i = free_index("i");
  const Index j = free_index("j");
  const Index k = free_index("k");
  const Index l = free_index("l");

  Term t1;
  t1.factors = {Word{Letter::u(j, i)}, Word{Letter::v(i, k)}, Word{Letter::u(k, l)},
                Word{Letter::v(l, j)}};
  for (Index idx : {i, j, k, l}) t1 = sum_over(std::move(t1), idx);

  Term t2;
  t2.factors = {Word{}, Word{Letter::v(i, j)}, Word{}, Word{Letter::u(j, i)}};
  for (Index idx : {i, j}) t2 = sum_over(std::move(t2), idx);

  return Chain::from_terms(3, normalize_terms({t1, t2}, RuleSet::contract()));
}

namespace {

struct DerivPiece {
  Word word;
  std::vector<ScalarAtom> scalars;
  int sign = 1;
};

// Leibniz expansion of the derivation slot applied to one word. The empty
// word (the unit) yields no pieces.
std::vector<DerivPiece> word_derivative(const Word& w, int slot, Index& next_dummy) {
  std::vector<DerivPiece> pieces;
  for (size_t p = 0; p < w.size(); ++p) {
    DerivPiece piece;
    piece.word.assign(w.begin(), w.begin() + static_cast<long>(p));
    const Letter l = w[p];
    if (l.kind == LetterKind::V) {
      // v_ik -> sum_p v_ip F_pk
      const Index d = next_dummy--;
      piece.word.push_back(Letter::v(l.row, d));
      piece.scalars.push_back(ScalarAtom::der_mat(slot, d, l.col));
    } else {
      // u_rk -> -sum u_ri v_ip F_pj u_jk
      const Index di = next_dummy--;
      const Index dp = next_dummy--;
      const Index dj = next_dummy--;
      piece.word.push_back(Letter::u(l.row, di));
      piece.word.push_back(Letter::v(di, dp));
      piece.word.push_back(Letter::u(dj, l.col));
      piece.scalars.push_back(ScalarAtom::der_mat(slot, dp, dj));
      piece.sign = -1;
    }
    piece.word.insert(piece.word.end(), w.begin() + static_cast<long>(p) + 1, w.end());
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

Term assemble_capped_term(const Term& base, const Word& a0, const DerivPiece& p1,
                          const DerivPiece& p2, const DerivPiece& p3) {
  Term t;
  t.coeff = base.coeff;
  const int sign = p1.sign * p2.sign * p3.sign;
  if (sign < 0) t.coeff = -t.coeff;
  t.scalars = base.scalars;
  for (const auto* ps : {&p1.scalars, &p2.scalars, &p3.scalars})
    t.scalars.insert(t.scalars.end(), ps->begin(), ps->end());
  Word w = a0;
  for (const auto* pw : {&p1.word, &p2.word, &p3.word}) w.insert(w.end(), pw->begin(), pw->end());
  t.factors = {std::move(w)};
  return t;
}

}  // namespace

IndexedExpr derivation_apply(int slot, const IndexedExpr& x) {
  std::vector<Term> out;
  for (const Term& t : x.terms()) {
    Index next = fresh_dummy(t);
    for (const DerivPiece& p : word_derivative(t.factors[0], slot, next)) {
      Term s;
      s.coeff = p.sign < 0 ? -t.coeff : t.coeff;
      s.scalars = t.scalars;
      s.scalars.insert(s.scalars.end(), p.scalars.begin(), p.scalars.end());
      s.factors = {p.word};
      out.push_back(std::move(s));
    }
  }
  return IndexedExpr::from_terms(normalize_terms(out, RuleSet::contract()));
}

IndexedExpr cap(const Chain& c) {
  if (c.degree() != 3) throw StructureError("cap against the derivation cup needs a 3-chain");
  std::vector<Term> out;
  for (const Term& t : c.terms()) {
    Index next = fresh_dummy(t);
    const auto p1 = word_derivative(t.factors[1], 1, next);
    const auto p2 = word_derivative(t.factors[2], 2, next);
    const auto p3 = word_derivative(t.factors[3], 3, next);
    for (const auto& a : p1)
      for (const auto& b : p2)
        for (const auto& d : p3) out.push_back(assemble_capped_term(t, t.factors[0], a, b, d));
  }
  return IndexedExpr::from_terms(normalize_terms(out, RuleSet::contract()));
}

void check_derivation_compatible(const QMatrix& e, const QMatrix& f, int slot) {
  if (f.rows() != e.rows() || f.cols() != e.cols()) {
    throw EvalError("derivation matrix F" + std::to_string(slot) + " has wrong dimensions");
  }
  if (!(e * f + f.transpose() * e).is_zero()) {
    throw EvalError("derivation compatibility violated for F" + std::to_string(slot) +
                    ": E*F + F^T*E != 0");
  }
}

Rational pairing_symbolic(const QMatrix& f1, const QMatrix& f2, const QMatrix& f3,
                          const QMatrix& e) {
  const int n = e.rows();
  if (e.cols() != n) throw EvalError("E must be square");
  QMatrix e_inv = inverse(e);  // throws SingularMatrixError for singular E
  check_derivation_compatible(e, f1, 1);
  check_derivation_compatible(e, f2, 2);
  check_derivation_compatible(e, f3, 3);

  IndexedExpr network = counit(cap(build_cv()));
  ScalarBindings b;
  b.form_e = e;
  b.form_e_inv = std::move(e_inv);
  b.der = {f1, f2, f3};
  return evaluate_scalar_network(network, b, n);
}

GenericResidual generic_cycle_residual() {
  Chain residual = normalize(boundary(build_cv()), RuleSet::contract_subst());
  GenericResidual out{Chain::from_terms(residual.degree(), residual.terms()), {}, {}};
  for (const Term& t : residual.terms()) {
    if (t.factors[0].empty()) {
      out.unit_first_factor.push_back(t);
    } else {
      out.unit_middle_factor.push_back(t);
    }
  }
  return out;
}

VerificationReport verify_cycle(CycleMode mode) {
  StopWatch watch;
  VerificationReport report;
  report.check = "verify-cycle";
  Chain b = boundary(build_cv());
  if (mode == CycleMode::GenericE) {
    report.mode = "generic-E";
    GenericResidual res = generic_cycle_residual();
    report.status = "residual";
    report.residual_form = render(res.full);
    report.witnesses = {{"unit_first_factor", render(res.unit_first_factor)},
                        {"unit_middle_factor", render(res.unit_middle_factor)},
                        {"term_count", res.full.terms().size()}};
    report.message = "residual vanishes iff E^T = +/-E; see eps modes";
  } else {
    RuleSet rules = RuleSet::contract_subst_sym();
    switch (mode) {
      case CycleMode::EpsPlus:
        rules.eps = 1;
        report.mode = "eps=+1";
        break;
      case CycleMode::EpsMinus:
        rules.eps = -1;
        report.mode = "eps=-1";
        break;
      default:
        report.mode = "eps=generic";
        break;
    }
    Chain r = normalize(b, rules);
    if (r.is_zero()) {
      report.status = "proved-zero";
      report.value = "0";
    } else {
      report.status = "failed";
      report.residual_form = render(r);
    }
  }
  report.runtime_ms = watch.ms();
  return report;
}

namespace {

// Random algebra word: a chain of letters sharing interior indices (summed)
// or a word with all-free indices, over a bounded pool of interned names.
IndexedExpr random_word(SplitMix64& rng) {
  const int len = 1 + static_cast<int>(rng.below(3));
  std::vector<Index> pool;
  for (int p = 0; p < 8; ++p) pool.push_back(free_index("w" + std::to_string(p)));

  Term t;
  Word w;
  const bool chained = rng.below(2) == 0;
  if (chained) {
    std::vector<Index> nodes;
    for (int p = 0; p <= len; ++p) nodes.push_back(pool[static_cast<size_t>(2 * p)]);
    for (int p = 0; p < len; ++p) {
      const bool vv = rng.below(2) == 0;
      w.push_back(vv ? Letter::v(nodes[p], nodes[p + 1]) : Letter::u(nodes[p], nodes[p + 1]));
    }
    t.factors = {w};
    for (int p = 1; p < len; ++p) t = sum_over(std::move(t), nodes[p]);
  } else {
    for (int p = 0; p < len; ++p) {
      const bool vv = rng.below(2) == 0;
      const Index a = pool[static_cast<size_t>(2 * p)];
      const Index b = pool[static_cast<size_t>(2 * p + 1)];
      w.push_back(vv ? Letter::v(a, b) : Letter::u(a, b));
    }
    t.factors = {w};
  }
  return IndexedExpr::from_term(std::move(t));
}

}  // namespace

VerificationReport hh0_commutator_check(int samples, uint64_t seed) {
  StopWatch watch;
  VerificationReport report;
  report.check = "hh0";
  report.mode = "counit-on-commutators";
  if (samples < 1) throw Error("hh0 check needs at least one sample");

  // counit(1) = 1, exactly.
  {
    IndexedExpr one = counit(IndexedExpr::unit());
    ScalarBindings empty;
    if (evaluate_scalar_network(one, empty, 3) != Rational(1)) {
      report.status = "failed";
      report.message = "counit(1) != 1";
      report.runtime_ms = watch.ms();
      return report;
    }
  }

  const int n = 3;
  for (int s = 0; s < samples; ++s) {
    SplitMix64 rng(SplitMix64::mix(seed, static_cast<uint64_t>(s)));
    IndexedExpr a = random_word(rng);
    IndexedExpr b = random_word(rng);
    IndexedExpr comm = multiply(a, b);
    comm -= multiply(b, a);
    IndexedExpr net = counit(comm);
    if (!normalize(net).is_zero()) {
      report.status = "failed";
      report.message = "counit of a commutator did not normalize to zero";
      report.residual_form = render(net);
      report.runtime_ms = watch.ms();
      return report;
    }
    // Independent grounding route: evaluate counit(ab) and counit(ba)
    // separately at a random assignment of the free indices.
    IndexedExpr ab = counit(multiply(a, b));
    IndexedExpr ba = counit(multiply(b, a));
    IndexAssignment assign;
    for (int p = 0; p < 8; ++p) {
      assign[free_index("w" + std::to_string(p))] = static_cast<int>(rng.below(n));
    }
    ScalarBindings empty;
    Rational va = evaluate_scalar_network(ab, empty, n, assign);
    Rational vb = evaluate_scalar_network(ba, empty, n, assign);
    if (va != vb) {
      report.status = "failed";
      report.message = "grounded counit(ab) != counit(ba) at sample " + std::to_string(s);
      report.runtime_ms = watch.ms();
      return report;
    }
  }
  report.status = "proved-zero";
  report.message = "counit vanishes on all sampled commutators and maps 1 to 1";
  report.witnesses = {{"samples", samples}};
  report.runtime_ms = watch.ms();
  return report;
}

}  // namespace hh3
