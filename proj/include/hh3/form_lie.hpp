#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hh3/matrix.hpp"
#include "hh3/report.hpp"

namespace hh3 {

enum class SymmetryClass { Symmetric, Antisymmetric, None };

/// The bilinear form E: either a concrete invertible exact-rational matrix
/// (with cached inverse and detected symmetry class) or a purely symbolic
/// form, identified only by its symmetry sign eps.
class BilinearFormSpec {
 public:
  static BilinearFormSpec concrete(QMatrix e);
  static BilinearFormSpec identity(int n);
  static BilinearFormSpec symplectic(int n);
  static BilinearFormSpec symbolic(std::optional<int> eps);

  bool is_concrete() const { return e_.has_value(); }
  int dim() const;
  const QMatrix& form() const;
  const QMatrix& inverse_form() const;
  SymmetryClass symmetry() const { return sym_; }
  /// +1 for E^T = E, -1 for E^T = -E, nullopt otherwise.
  std::optional<int> eps() const;

 private:
  BilinearFormSpec() = default;
  std::optional<QMatrix> e_;
  std::optional<QMatrix> e_inv_;
  SymmetryClass sym_ = SymmetryClass::None;
  std::optional<int> symbolic_eps_;
};

/// Basis of the infinitesimal isometry algebra so(E) = {F : E F + F^T E = 0}
/// together with optional trace-form data. The basis comes from a
/// deterministic exact nullspace computation.
struct LieBasis {
  QMatrix e;
  std::vector<QMatrix> basis;   // F_a
  std::vector<QMatrix> duals;   // F^a with tr(F_a F^b) = delta_a^b (after trace_dual_basis)
  QMatrix gram;                 // G_ab = tr(F_a F_b)
  // structure[a][b] = coordinates of [F_a, F_b] in `basis`
  std::vector<std::vector<std::vector<Rational>>> structure;

  int dim() const { return static_cast<int>(basis.size()); }
};

/// Exact nullspace of the isometry condition; throws SingularMatrixError for
/// singular E. Dimension is N(N-1)/2 for symmetric and N(N+1)/2 for
/// antisymmetric E.
LieBasis so_e_basis(const QMatrix& e);

/// Same but for an explicitly given family of matrices (no isometry check);
/// used to feed synthetic bases into the trace-form machinery.
LieBasis lie_basis_from_matrices(QMatrix e, std::vector<QMatrix> mats);

/// Fills gram and duals; throws DegenerateFormError when the trace form
/// restricted to the basis is singular.
LieBasis trace_dual_basis(LieBasis b);

/// Omega_V = sum_a F_a F^a. Central: [Omega_V, F_a] = 0, tr = dim.
QMatrix casimir_on_v(const LieBasis& b);

struct CasimirTriple {
  QMatrix f1, f2, f3;  // contributes f1 [f2, f3]
};

struct CasimirDecomposition {
  std::vector<CasimirTriple> triples;
  QMatrix omega;
};

/// Expresses each dual basis element inside span{[F_b, F_c]} by an exact
/// linear solve (free variables pinned to zero for determinism) and emits
/// triples with sum_m F_m1 [F_m2, F_m3] = Omega_V. Throws NotSemisimpleError
/// when the bracket span is a proper subspace.
CasimirDecomposition bracket_decompose(const LieBasis& b);

struct TotalPairingResult {
  Rational value;       // sum of cap pairings = -tr(Omega)/2
  QMatrix omega;
  int dim_g = 0;
  VerificationReport report;
};

/// Runs the whole pipeline at a concrete form: so(E) basis, trace-form duals,
/// Casimir, bracket decomposition, and the symbolic cap pairing of every
/// triple. Exact agreement with -tr(Omega)/2 is enforced.
TotalPairingResult total_pairing(const QMatrix& e);

enum class SelfdualDirection { Forward, Backward, Both };

/// Scripted replay of the self-duality equivalence: the colinearity relation
/// plus antipode contraction derives u = E^-1 v^T E (forward), and the
/// substitution rule collapses the colinearity defect to zero (backward).
/// The E = I specialization of the derived identity reads u = v^T.
VerificationReport verify_selfdual_equivalence(SelfdualDirection direction);

}  // namespace hh3
