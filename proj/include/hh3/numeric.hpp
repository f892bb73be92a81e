#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "hh3/chain.hpp"
#include "hh3/form_lie.hpp"

namespace hh3 {

/// Matrix exponential by scaling-and-squaring with a Taylor series evaluated
/// to machine precision (adequate at the dimensions in play).
DMatrix expm(const DMatrix& a);

/// Where evaluation points come from.
///
/// Isometry points satisfy all relations of the engine (contractions and
/// self-duality), so they can only certify identities. Every isometry g of E
/// satisfies E g E^-1 = E^T g (E^-1)^T = g^-T, so expressions that vanish
/// only modulo the symmetry of E (like the generic-E residual) are invisible
/// there; exhibiting those as nonzero requires general linear points, where
/// only u = v^-1 holds.
enum class PointKind { Isometry, GeneralLinear };

/// A sampled evaluation point. For isometry points the residual is
/// max |(g E^-1 g^T - E^-1)_ij|; for general linear points it is
/// max |(g g^-1 - 1)_ij|. Both are < 1e-10 by construction.
struct GroupPoint {
  DMatrix g;
  DMatrix g_inv;
  double residual = 0.0;
};

/// Samples g = exp(t F) for deterministic random combinations F of the so(E)
/// basis (or exp of an unconstrained random matrix for general linear
/// points); caches the basis so repeated sampling is cheap.
class GroupPointSampler {
 public:
  explicit GroupPointSampler(const BilinearFormSpec& form,
                             PointKind kind = PointKind::Isometry);

  GroupPoint sample(uint64_t seed) const;
  int dim() const { return static_cast<int>(e_.rows()); }
  const DMatrix& e() const { return e_; }
  const DMatrix& e_inv() const { return e_inv_; }

 private:
  PointKind kind_;
  DMatrix e_, e_inv_;
  std::vector<DMatrix> basis_;
};

GroupPoint random_group_point(const BilinearFormSpec& form, uint64_t seed);

/// Float-side bindings for grounding scalar atoms.
struct NumericBindings {
  DMatrix e, e_inv;
  std::array<std::optional<DMatrix>, 3> der;
  std::optional<int> eps;
};

NumericBindings numeric_bindings(const BilinearFormSpec& form);

/// Evaluation morphism v_ij -> g_ij, u_ij -> (g^-1)_ij, one group point per
/// tensor factor (a point of G^(n+1), separating points of the (n+1)-fold
/// tensor power). Factors multiply; Einstein sums over dummies.
double evaluate_chain(const Chain& c, const std::vector<GroupPoint>& points,
                      const NumericBindings& nb);
double evaluate_expr(const IndexedExpr& x, const GroupPoint& p, const NumericBindings& nb);

/// Falsification oracle: evaluates at `samples` random point tuples. All
/// values below tol reports "numerically-zero"; otherwise "nonzero-witness"
/// with the witnessing sample. Never claims symbolic proof.
VerificationReport numeric_zero_check(const Chain& c, const BilinearFormSpec& form, int samples,
                                      double tol, uint64_t seed,
                                      PointKind kind = PointKind::Isometry);
VerificationReport numeric_zero_check(const IndexedExpr& x, const BilinearFormSpec& form,
                                      int samples, double tol, uint64_t seed,
                                      PointKind kind = PointKind::Isometry);

}  // namespace hh3
