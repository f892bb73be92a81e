#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hh3/numeric.hpp"
#include "test_support.hpp"

using namespace hh3;
using namespace hh3::testing;

namespace {

double max_abs(const DMatrix& m) {
  double v = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v = std::max(v, std::abs(m(i, j)));
  return v;
}

}  // namespace

TEST_CASE("expm: identity at zero, diagonal case, inverse by negation") {
  DMatrix zero(3, 3);
  CHECK(max_abs(expm(zero) - DMatrix::identity(3)) < 1e-15);

  DMatrix d(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -0.5;
  DMatrix ed = expm(d);
  CHECK(std::abs(ed(0, 0) - std::exp(1.0)) < 1e-13);
  CHECK(std::abs(ed(1, 1) - std::exp(-0.5)) < 1e-13);
  CHECK(std::abs(ed(0, 1)) < 1e-15);

  DMatrix r(3, 3);
  r(0, 1) = 0.7;
  r(1, 2) = -0.3;
  r(2, 0) = 1.1;
  DMatrix nr = r;
  nr.scale(-1.0);
  CHECK(max_abs(expm(r) * expm(nr) - DMatrix::identity(3)) < 1e-13);
}

TEST_CASE("group points: orthogonality, determinism, symplectic preservation") {
  auto form3 = BilinearFormSpec::identity(3);
  GroupPoint p = random_group_point(form3, 42);
  CHECK(p.residual < 1e-10);
  CHECK(max_abs(p.g * p.g.transpose() - DMatrix::identity(3)) < 1e-10);

  GroupPoint p2 = random_group_point(form3, 42);
  CHECK(p.g == p2.g);
  GroupPoint q = random_group_point(form3, 43);
  CHECK(max_abs(p.g - q.g) > 1e-6);

  auto j2 = BilinearFormSpec::symplectic(2);
  GroupPoint sp = random_group_point(j2, 7);
  CHECK(sp.residual < 1e-10);
  DMatrix jd = to_double(symplectic_form(2));
  CHECK(max_abs(sp.g.transpose() * jd * sp.g - jd) < 1e-10);
}

TEST_CASE("general linear points invert reliably but are not isometries") {
  auto form2 = BilinearFormSpec::identity(2);
  GroupPointSampler sampler(form2, PointKind::GeneralLinear);
  GroupPoint p = sampler.sample(5);
  CHECK(max_abs(p.g * p.g_inv - DMatrix::identity(2)) < 1e-10);
}

TEST_CASE("evaluation respects the antipode relation: g g^-1 = 1") {
  Index i = free_index("i"), j = free_index("j"), k = free_index("k");
  Term t;
  t.scalars.push_back(ScalarAtom::delta(j, i));
  t.factors = {Word{Letter::v(i, k), Letter::u(k, j)}};
  for (Index idx : {i, j, k}) t = sum_over(std::move(t), idx);
  Term minus_n;
  minus_n.coeff = -Coefficient::dim_n();
  auto x = IndexedExpr::from_terms({t, minus_n});

  for (auto kind : {PointKind::Isometry, PointKind::GeneralLinear}) {
    auto form = BilinearFormSpec::identity(3);
    GroupPointSampler sampler(form, kind);
    auto nb = numeric_bindings(form);
    for (uint64_t s = 0; s < 20; ++s) {
      CHECK(std::abs(evaluate_expr(x, sampler.sample(s), nb)) < 1e-12);
    }
  }
}

TEST_CASE("b3(c_V) evaluates to zero at isometry points") {
  Chain b = boundary(build_cv());
  for (auto form : {BilinearFormSpec::identity(3), BilinearFormSpec::symplectic(2)}) {
    auto r = numeric_zero_check(b, form, 100, 1e-9, 1234);
    CHECK(r.status == "numerically-zero");
  }
}

TEST_CASE("generic residual: nonzero witness at an asymmetric form, zero at symmetric ones") {
  GenericResidual res = generic_cycle_residual();

  auto shear = BilinearFormSpec::concrete(shear2());
  auto witness = numeric_zero_check(res.full, shear, 100, 1e-3, 99, PointKind::GeneralLinear);
  CHECK(witness.status == "nonzero-witness");
  CHECK(std::stod(*witness.value) > 1e-3);

  // Where E^T = +/-E the residual vanishes even at general linear points.
  auto sym = numeric_zero_check(res.full, BilinearFormSpec::identity(2), 50, 1e-9, 7,
                                PointKind::GeneralLinear);
  CHECK(sym.status == "numerically-zero");
  auto anti = numeric_zero_check(res.full, BilinearFormSpec::symplectic(2), 50, 1e-9, 8,
                                 PointKind::GeneralLinear);
  CHECK(anti.status == "numerically-zero");
}

TEST_CASE("the zero chain is trivially numerically zero") {
  Chain zero(3);
  auto r = numeric_zero_check(zero, BilinearFormSpec::identity(3), 10, 1e-12, 3);
  CHECK(r.status == "numerically-zero");
}

TEST_CASE("evaluation is a morphism: products map to products") {
  SplitMix64 rng(31415);
  GenOptions opt;
  opt.closed = true;
  opt.max_scalars = 0;
  auto form = BilinearFormSpec::identity(3);
  GroupPointSampler sampler(form);
  auto nb = numeric_bindings(form);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = random_expr(rng, opt, 2);
    auto y = random_expr(rng, opt, 2);
    GroupPoint p = sampler.sample(static_cast<uint64_t>(trial));
    double lhs = evaluate_expr(multiply(x, y), p, nb);
    double rhs = evaluate_expr(x, p, nb) * evaluate_expr(y, p, nb);
    CAPTURE(trial);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("evaluate after normalize agrees with direct evaluation") {
  SplitMix64 rng(2718);
  GenOptions opt;
  opt.closed = true;
  opt.max_scalars = 2;
  opt.allow_forms = true;

  // Contraction rules hold at any invertible point; self-duality holds at
  // isometry points of the bound form.
  auto form = BilinearFormSpec::identity(3);
  auto nb = numeric_bindings(form);
  GroupPointSampler iso(form);
  GroupPointSampler gl(form, PointKind::GeneralLinear);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = random_expr(rng, opt, 2);
    GroupPoint pi = iso.sample(static_cast<uint64_t>(trial));
    GroupPoint pg = gl.sample(static_cast<uint64_t>(trial));
    CAPTURE(trial);

    auto n_contract = normalize(x, RuleSet::contract());
    CHECK(std::abs(evaluate_expr(x, pg, nb) - evaluate_expr(n_contract, pg, nb)) < 1e-9);

    auto n_subst = normalize(x, RuleSet::contract_subst());
    CHECK(std::abs(evaluate_expr(x, pi, nb) - evaluate_expr(n_subst, pi, nb)) < 1e-9);
  }
}

TEST_CASE("symmetry-rule rewriting is sound against ground evaluation") {
  SplitMix64 rng(1618);
  GenOptions opt;
  opt.closed = true;
  opt.max_scalars = 2;
  // A non-trivial symmetric form (eps = +1) and the symplectic one (eps = -1).
  QMatrix sym2{{Rational(2), Rational(1)}, {Rational(1), Rational(1)}};
  for (const QMatrix& e : {sym2, symplectic_form(2)}) {
    auto form = BilinearFormSpec::concrete(e);
    REQUIRE(form.eps().has_value());
    auto nb = numeric_bindings(form);
    GroupPointSampler iso(form);
    for (int trial = 0; trial < 60; ++trial) {
      auto x = random_expr(rng, opt, 2);
      GroupPoint p = iso.sample(static_cast<uint64_t>(trial));
      const double direct = evaluate_expr(x, p, nb);
      const double rewritten = evaluate_expr(normalize(x, RuleSet::contract_subst_sym()), p, nb);
      CAPTURE(trial);
      CHECK(std::abs(direct - rewritten) < 1e-9);
    }
  }
}

TEST_CASE("numeric_zero_check is deterministic for a fixed seed") {
  Chain b = boundary(build_cv());
  auto form = BilinearFormSpec::identity(3);
  auto r1 = numeric_zero_check(b, form, 20, 1e-9, 77);
  auto r2 = numeric_zero_check(b, form, 20, 1e-9, 77);
  CHECK(*r1.value == *r2.value);
  CHECK(r1.witnesses.at("per_sample_abs") == r2.witnesses.at("per_sample_abs"));
}
