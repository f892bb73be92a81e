#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hh3/errors.hpp"
#include "hh3/form_lie.hpp"
#include "test_support.hpp"

using namespace hh3;
using namespace hh3::testing;

TEST_CASE("bilinear form spec detects the symmetry class") {
  auto i3 = BilinearFormSpec::identity(3);
  CHECK(i3.symmetry() == SymmetryClass::Symmetric);
  CHECK(i3.eps() == 1);
  auto j2 = BilinearFormSpec::symplectic(2);
  CHECK(j2.symmetry() == SymmetryClass::Antisymmetric);
  CHECK(j2.eps() == -1);
  auto sh = BilinearFormSpec::concrete(shear2());
  CHECK(sh.symmetry() == SymmetryClass::None);
  CHECK(!sh.eps().has_value());

  QMatrix singular(2, 2);
  singular(0, 0) = Rational(1);
  CHECK_THROWS_AS(BilinearFormSpec::concrete(singular), SingularMatrixError);

  auto symb = BilinearFormSpec::symbolic(-1);
  CHECK(!symb.is_concrete());
  CHECK(symb.eps() == -1);
  CHECK_THROWS_AS(symb.form(), Error);
}

TEST_CASE("so(E) dimensions for the standard forms") {
  CHECK(so_e_basis(QMatrix::identity(2)).dim() == 1);
  CHECK(so_e_basis(QMatrix::identity(3)).dim() == 3);
  CHECK(so_e_basis(QMatrix::identity(4)).dim() == 6);
  CHECK(so_e_basis(QMatrix::identity(5)).dim() == 10);
  CHECK(so_e_basis(symplectic_form(2)).dim() == 3);
  CHECK(so_e_basis(symplectic_form(4)).dim() == 10);
  CHECK(so_e_basis(shear2()).dim() == 1);

  QMatrix singular(3, 3);
  CHECK_THROWS_AS(so_e_basis(singular), SingularMatrixError);
}

TEST_CASE("so(E) closure and the isometry condition hold exactly") {
  SplitMix64 rng(11);
  for (const QMatrix& e : {QMatrix::identity(3), symplectic_form(2), QMatrix::identity(4)}) {
    LieBasis b = so_e_basis(e);
    for (const QMatrix& f : b.basis) {
      CHECK((e * f + f.transpose() * e).is_zero());
    }
    for (int trial = 0; trial < 20; ++trial) {
      QMatrix f = random_so_element(rng, b);
      QMatrix g = random_so_element(rng, b);
      QMatrix c = commutator(f, g);
      CHECK((e * c + c.transpose() * e).is_zero());
    }
  }
}

TEST_CASE("Jacobi identity on matrices and on the structure constants") {
  for (const QMatrix& e : {QMatrix::identity(3), symplectic_form(2), QMatrix::identity(4)}) {
    LieBasis b = so_e_basis(e);
    const int d = b.dim();
    for (int x = 0; x < d; ++x) {
      for (int y = 0; y < d; ++y) {
        for (int z = 0; z < d; ++z) {
          QMatrix lhs = commutator(b.basis[x], commutator(b.basis[y], b.basis[z])) +
                        commutator(b.basis[y], commutator(b.basis[z], b.basis[x])) +
                        commutator(b.basis[z], commutator(b.basis[x], b.basis[y]));
          CHECK(lhs.is_zero());
          // sum_w (c_xy^w c_wz^u + c_yz^w c_wx^u + c_zx^w c_wy^u) = 0
          for (int u = 0; u < d; ++u) {
            Rational acc;
            for (int w = 0; w < d; ++w) {
              acc += b.structure[x][y][w] * b.structure[w][z][u];
              acc += b.structure[y][z][w] * b.structure[w][x][u];
              acc += b.structure[z][x][w] * b.structure[w][y][u];
            }
            CHECK(acc == Rational(0));
          }
        }
      }
    }
  }
}

TEST_CASE("trace-form duals: so(3) generators, orthonormal case, degenerate case") {
  LieBasis so3 = lie_basis_from_matrices(QMatrix::identity(3), {l_x(), l_y(), l_z()});
  so3 = trace_dual_basis(std::move(so3));
  QMatrix expected_gram = QMatrix::identity(3);
  expected_gram.scale(Rational(-2));
  CHECK(so3.gram == expected_gram);
  for (int a = 0; a < 3; ++a) {
    QMatrix half = so3.basis[a];
    half.scale(Rational(-1, 2));
    CHECK(so3.duals[a] == half);
  }

  // tr(F_a F^b) = delta_a^b for nullspace bases too.
  for (const QMatrix& e : {QMatrix::identity(4), symplectic_form(2)}) {
    LieBasis b = trace_dual_basis(so_e_basis(e));
    for (int x = 0; x < b.dim(); ++x)
      for (int y = 0; y < b.dim(); ++y)
        CHECK((b.basis[x] * b.duals[y]).trace() == Rational(x == y ? 1 : 0));
  }

  // A basis that is already trace-orthonormal is self-dual.
  QMatrix d1(2, 2);
  d1(0, 0) = Rational(1);
  LieBasis ortho = trace_dual_basis(lie_basis_from_matrices(QMatrix::identity(2), {d1}));
  CHECK(ortho.duals[0] == ortho.basis[0]);

  // Strictly upper triangular family: the trace form vanishes identically.
  QMatrix nil(2, 2);
  nil(0, 1) = Rational(1);
  CHECK_THROWS_AS(trace_dual_basis(lie_basis_from_matrices(QMatrix::identity(2), {nil})),
                  DegenerateFormError);
}

TEST_CASE("Casimir: identity on so(3), centrality and trace = dim in general") {
  LieBasis so3 = trace_dual_basis(lie_basis_from_matrices(QMatrix::identity(3), {l_x(), l_y(), l_z()}));
  QMatrix omega = casimir_on_v(so3);
  CHECK(omega == QMatrix::identity(3));
  CHECK(omega.trace() == Rational(3));

  SplitMix64 rng(21);
  for (const QMatrix& e :
       {QMatrix::identity(2), QMatrix::identity(3), QMatrix::identity(4), symplectic_form(2),
        symplectic_form(4)}) {
    LieBasis b = trace_dual_basis(so_e_basis(e));
    QMatrix om = casimir_on_v(b);
    CHECK(om.trace() == Rational(b.dim()));
    for (const QMatrix& f : b.basis) CHECK(commutator(om, f).is_zero());
    for (int trial = 0; trial < 10; ++trial) {
      CHECK(commutator(om, random_so_element(rng, b)).is_zero());
    }
  }
}

TEST_CASE("bracket decomposition: semisimple cases succeed, so(2) fails") {
  for (const QMatrix& e : {QMatrix::identity(3), symplectic_form(2), QMatrix::identity(4)}) {
    LieBasis b = trace_dual_basis(so_e_basis(e));
    CasimirDecomposition dec = bracket_decompose(b);
    CHECK(!dec.triples.empty());
    QMatrix rebuilt(e.rows(), e.rows());
    for (const auto& t : dec.triples) rebuilt += t.f1 * commutator(t.f2, t.f3);
    CHECK(rebuilt == dec.omega);
  }

  LieBasis so2 = trace_dual_basis(so_e_basis(QMatrix::identity(2)));
  CHECK_THROWS_AS(bracket_decompose(so2), NotSemisimpleError);
  try {
    bracket_decompose(so2);
  } catch (const NotSemisimpleError& e) {
    CHECK(std::string(e.what()) == "not semisimple: [g,g] != g");
  }
}

TEST_CASE("total pairing values at the standard forms") {
  auto i3 = total_pairing(QMatrix::identity(3));
  CHECK(i3.value == Rational(-3, 2));
  CHECK(i3.dim_g == 3);
  CHECK(i3.report.status == "nonzero-witness");
  CHECK(*i3.report.message == "HH3 != 0 witness established");

  auto i4 = total_pairing(QMatrix::identity(4));
  CHECK(i4.value == Rational(-3));
  CHECK(i4.dim_g == 6);

  auto j2 = total_pairing(symplectic_form(2));
  CHECK(j2.value == Rational(-3, 2));
  CHECK(j2.dim_g == 3);

  CHECK_THROWS_AS(total_pairing(QMatrix::identity(2)), NotSemisimpleError);
}

TEST_CASE("self-duality replay: both directions and the E = I specialization") {
  auto both = verify_selfdual_equivalence(SelfdualDirection::Both);
  CHECK(both.status == "proved-zero");
  CHECK(both.witnesses.at("backward_residual").get<std::string>() == "0");
  CHECK(both.witnesses.at("forward_colinearity_route").get<std::string>() == "1 * u[l,k]");
  CHECK(both.witnesses.at("e_identity_specialization").get<std::string>() == "1 * v[k,l]");

  CHECK(verify_selfdual_equivalence(SelfdualDirection::Forward).status == "proved-zero");
  CHECK(verify_selfdual_equivalence(SelfdualDirection::Backward).status == "proved-zero");
}
