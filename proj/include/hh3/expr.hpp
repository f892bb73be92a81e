#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hh3/coefficient.hpp"
#include "hh3/matrix.hpp"

namespace hh3 {

/// Abstract tensor index. Non-negative values are free (externally visible)
/// indices interned by name; negative values are summation dummies private to
/// one term. Every dummy occurs exactly twice across the slots of its term
/// (Einstein convention); normalization renames dummies canonically.
using Index = int32_t;

inline bool is_dummy(Index i) { return i < 0; }

/// Interns a free index name; repeated calls with the same name return the
/// same id.
Index free_index(std::string_view name);
const std::string& free_index_name(Index id);

enum class AtomKind : uint8_t { Delta = 0, FormE = 1, FormEInv = 2, DerMat = 3 };

/// Commuting coefficient tensor: delta_ij, E_ij, (E^-1)_ij or a derivation
/// matrix slot F{1,2,3}_ij. A term's scalar part is an unordered multiset of
/// these.
struct ScalarAtom {
  AtomKind kind = AtomKind::Delta;
  uint8_t slot = 0;  // 1..3 for DerMat, 0 otherwise
  Index row = 0;
  Index col = 0;

  static ScalarAtom delta(Index i, Index j) { return {AtomKind::Delta, 0, i, j}; }
  static ScalarAtom form_e(Index i, Index j) { return {AtomKind::FormE, 0, i, j}; }
  static ScalarAtom form_e_inv(Index i, Index j) { return {AtomKind::FormEInv, 0, i, j}; }
  static ScalarAtom der_mat(int slot, Index i, Index j);

  friend bool operator==(const ScalarAtom&, const ScalarAtom&) = default;
};

enum class LetterKind : uint8_t { V = 0, U = 1 };

/// Generator occurrence: v_ij or u_ij = S(v_ij).
struct Letter {
  LetterKind kind = LetterKind::V;
  Index row = 0;
  Index col = 0;

  static Letter v(Index i, Index j) { return {LetterKind::V, i, j}; }
  static Letter u(Index i, Index j) { return {LetterKind::U, i, j}; }

  friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

/// One summand: coefficient * scalar atoms * (word_0 (x) ... (x) word_d).
/// A degree-0 term has a single factor; an empty word is the unit.
struct Term {
  Coefficient coeff = Coefficient::one();
  std::vector<ScalarAtom> scalars;
  std::vector<Word> factors = {Word{}};

  int degree() const { return static_cast<int>(factors.size()) - 1; }
  bool has_letters() const;
  int letter_count() const;
  int u_count() const;

  static Term unit() { return Term{}; }
};

/// Throws StructureError when a dummy of `t` does not occur exactly twice.
void validate_term(const Term& t);

/// An unused dummy id for `t`: one below the most negative id in use.
Index fresh_dummy(const Term& t);

/// Enabled rewrite-rule groups. Contraction rules (delta elimination,
/// antipode pair contraction, E*E^-1 contraction) are always on.
struct RuleSet {
  bool subst = false;  // self-duality substitution u -> E^-1 v^T E
  bool sym = false;    // E^T = eps*E reorientation (coefficient picks up eps)
  bool colin = false;  // colinearity contraction E_ir v_ij v_rs -> E_js
  std::optional<int> eps;  // bind eps := +1/-1 in coefficients after rewriting

  static RuleSet contract() { return {}; }
  static RuleSet contract_subst() { return {true, false, false, {}}; }
  static RuleSet contract_subst_sym(std::optional<int> eps = {}) { return {true, true, false, eps}; }
  static RuleSet contract_colin() { return {false, false, true, {}}; }

  void validate() const;
};

struct NormalizeStats {
  long rule_steps = 0;
};

/// Degree-0 expression: element of the universal algebra presented by matrix
/// coefficients. Always a formal sum of single-factor terms.
class IndexedExpr {
 public:
  IndexedExpr() = default;  // zero

  static IndexedExpr zero() { return {}; }
  static IndexedExpr unit();
  static IndexedExpr from_term(Term t);
  static IndexedExpr from_terms(std::vector<Term> ts);
  static IndexedExpr letter(Letter l);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  IndexedExpr& operator+=(const IndexedExpr& o);
  IndexedExpr& operator-=(const IndexedExpr& o);
  friend IndexedExpr operator+(IndexedExpr a, const IndexedExpr& b) { return a += b; }
  friend IndexedExpr operator-(IndexedExpr a, const IndexedExpr& b) { return a -= b; }
  IndexedExpr& scale(const Coefficient& c);

 private:
  std::vector<Term> terms_;
};

/// Rewrites to the canonical fixed point of the enabled rules. Sound in the
/// universal algebra (rules only apply relations); idempotent; deterministic.
IndexedExpr normalize(const IndexedExpr& x, const RuleSet& rules = RuleSet::contract(),
                      NormalizeStats* stats = nullptr);

/// Shared low-level entry: rewrites and merges a list of same-degree terms.
std::vector<Term> normalize_terms(const std::vector<Term>& terms, const RuleSet& rules,
                                  NormalizeStats* stats = nullptr);

/// Algebra product: bilinear, dummies renamed apart, words concatenated,
/// result contracted.
IndexedExpr multiply(const IndexedExpr& x, const IndexedExpr& y);

/// Counit: ring morphism to scalar networks, v_ij and u_ij both map to
/// delta_ij.
IndexedExpr counit(const IndexedExpr& x);

/// Marks a free index (occurring exactly twice in every term) as summed.
IndexedExpr sum_over(const IndexedExpr& x, Index free_id);
Term sum_over(Term t, Index free_id);

/// Substitutes E := identity (FormE/FormEInv atoms become deltas) and
/// contracts; used by the self-duality specialization check.
IndexedExpr specialize_form_to_identity(const IndexedExpr& x);

/// Structural equality of canonical forms: normalize(x - y) == 0 under the
/// given rules.
bool equal_normalized(const IndexedExpr& x, const IndexedExpr& y,
                      const RuleSet& rules = RuleSet::contract());

std::string render(const Term& t);
std::string render(const std::vector<Term>& terms);
std::string render(const IndexedExpr& x);

/// Concrete matrices for grounding scalar networks.
struct ScalarBindings {
  std::optional<QMatrix> form_e;
  std::optional<QMatrix> form_e_inv;  // must be the exact inverse of form_e
  std::array<std::optional<QMatrix>, 3> der;  // slots 1..3
  std::optional<int> eps;
};

/// Assignment of concrete 0-based values to free indices.
using IndexAssignment = std::map<Index, int>;

/// Einstein-sums a closed scalar network (no letters) to an exact rational.
/// Free indices must be covered by `assignment`.
Rational evaluate_scalar_network(const IndexedExpr& x, const ScalarBindings& bindings, int n,
                                 const IndexAssignment& assignment = {});

}  // namespace hh3
