#pragma once

#include <cstdint>
#include <vector>

#include "hh3/expr.hpp"
#include "hh3/report.hpp"

namespace hh3 {

/// Hochschild n-chain: formal sum of (n+1)-fold tensor products of algebra
/// words over a shared index space. Degrees 0..4 (degree 4 exists to test
/// b(b(c)) = 0 into degree 3).
class Chain {
 public:
  explicit Chain(int degree);
  static Chain from_terms(int degree, std::vector<Term> ts);

  int degree() const { return degree_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Chain& operator+=(const Chain& o);
  Chain& operator-=(const Chain& o);
  friend Chain operator+(Chain a, const Chain& b) { return a += b; }
  friend Chain operator-(Chain a, const Chain& b) { return a -= b; }

 private:
  int degree_;
  std::vector<Term> terms_;
};

Chain normalize(const Chain& c, const RuleSet& rules = RuleSet::contract(),
                NormalizeStats* stats = nullptr);
std::string render(const Chain& c);

/// Hochschild boundary b_n: adjacent factor multiplications with alternating
/// signs plus the (-1)^n a_n a_0 wrap-around term. Result is contracted.
Chain boundary(const Chain& c);

/// The degree-3 cycle candidate built from the corepresentation matrix:
///   sum_ijkl u_ji (x) v_ik (x) u_kl (x) v_lj  +  sum_ij 1 (x) v_ij (x) 1 (x) u_ji.
Chain build_cv();

/// Symbolic action of the derivation in the given slot (1..3):
///   v_ik -> sum_p v_ip F_pk,  u_rk -> -sum u_ri v_ip F_pj u_jk,  1 -> 0.
/// Leibniz-linear over words; scalar atoms are constants.
IndexedExpr derivation_apply(int slot, const IndexedExpr& x);

/// Cap product of a degree-3 chain with the cup of the three derivation
/// slots: a0 d1(a1) d2(a2) d3(a3), contracted. The result is a scalar network
/// times the unit for the chains of interest.
IndexedExpr cap(const Chain& c);

/// Throws EvalError when E F + F^T E != 0, naming the offending slot.
void check_derivation_compatible(const QMatrix& e, const QMatrix& f, int slot);

/// Grounds counit(cap(build_cv())) at concrete derivation matrices; equals
/// -tr(F1 F2 F3) exactly for infinitesimal isometries of E.
Rational pairing_symbolic(const QMatrix& f1, const QMatrix& f2, const QMatrix& f3,
                          const QMatrix& e);

enum class CycleMode { EpsGeneric, EpsPlus, EpsMinus, GenericE };

/// Splits the contracted generic-E boundary residual into the family with a
/// unit first factor and the complementary family with a unit middle factor;
/// both vanish under the same symmetry argument.
struct GenericResidual {
  Chain full;
  std::vector<Term> unit_first_factor;
  std::vector<Term> unit_middle_factor;
};
GenericResidual generic_cycle_residual();

/// Symbolic check that b3(c_V) vanishes. In the eps modes the full pipeline
/// (contraction + self-duality + symmetry) must produce exactly zero for
/// symbolic N; in generic-E mode the canonical residual is reported.
VerificationReport verify_cycle(CycleMode mode);

/// Counit kills commutators and maps the unit to 1: checks counit(ab - ba)
/// normalizes to zero and grounds to zero for random word pairs.
VerificationReport hh0_commutator_check(int samples, uint64_t seed = 0x9e3779b97f4a7c15ULL);

}  // namespace hh3
