#include "hh3/form_lie.hpp"

#include <string>

#include "hh3/chain.hpp"
#include "hh3/errors.hpp"
#include "hh3/expr.hpp"

namespace hh3 {

BilinearFormSpec BilinearFormSpec::concrete(QMatrix e) {
  if (e.rows() != e.cols() || e.rows() == 0) throw Error("E must be square and non-empty");
  BilinearFormSpec spec;
  spec.e_inv_ = inverse(e);  // throws SingularMatrixError
  if (e.transpose() == e) {
    spec.sym_ = SymmetryClass::Symmetric;
  } else {
    QMatrix neg = e;
    neg.scale(Rational(-1));
    spec.sym_ = (e.transpose() == neg) ? SymmetryClass::Antisymmetric : SymmetryClass::None;
  }
  spec.e_ = std::move(e);
  return spec;
}

BilinearFormSpec BilinearFormSpec::identity(int n) {
  return concrete(QMatrix::identity(n));
}

BilinearFormSpec BilinearFormSpec::symplectic(int n) {
  return concrete(symplectic_form(n));
}

BilinearFormSpec BilinearFormSpec::symbolic(std::optional<int> eps) {
  if (eps && *eps != 1 && *eps != -1) throw Error("symbolic eps must be +1 or -1");
  BilinearFormSpec spec;
  spec.symbolic_eps_ = eps;
  spec.sym_ = !eps                ? SymmetryClass::None
              : (*eps == 1)       ? SymmetryClass::Symmetric
                                  : SymmetryClass::Antisymmetric;
  return spec;
}

int BilinearFormSpec::dim() const {
  if (!e_) throw Error("symbolic form has no concrete dimension");
  return e_->rows();
}

const QMatrix& BilinearFormSpec::form() const {
  if (!e_) throw Error("symbolic form has no concrete matrix");
  return *e_;
}

const QMatrix& BilinearFormSpec::inverse_form() const {
  if (!e_inv_) throw Error("symbolic form has no concrete inverse");
  return *e_inv_;
}

std::optional<int> BilinearFormSpec::eps() const {
  if (!e_) return symbolic_eps_;
  switch (sym_) {
    case SymmetryClass::Symmetric:
      return 1;
    case SymmetryClass::Antisymmetric:
      return -1;
    default:
      return std::nullopt;
  }
}

namespace {

std::vector<Rational> vec(const QMatrix& m) {
  std::vector<Rational> v;
  v.reserve(static_cast<size_t>(m.rows()) * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

QMatrix unvec(const std::vector<Rational>& v, int n) {
  QMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = v[static_cast<size_t>(i) * n + j];
  return m;
}

// Coordinates of `m` in the span of `basis` (exact; throws on failure).
std::vector<Rational> coordinates_in(const std::vector<QMatrix>& basis, const QMatrix& m) {
  const int n = m.rows();
  QMatrix a(n * n, static_cast<int>(basis.size()));
  for (size_t c = 0; c < basis.size(); ++c) {
    auto col = vec(basis[c]);
    for (int r = 0; r < n * n; ++r) a(r, static_cast<int>(c)) = col[static_cast<size_t>(r)];
  }
  auto sol = solve_columns(a, vec(m));
  if (!sol) throw Error("matrix is not inside the Lie algebra span");
  return *sol;
}

void fill_structure_constants(LieBasis& b) {
  b.structure.assign(b.basis.size(), std::vector<std::vector<Rational>>(b.basis.size()));
  for (size_t x = 0; x < b.basis.size(); ++x) {
    for (size_t y = 0; y < b.basis.size(); ++y) {
      b.structure[x][y] = coordinates_in(b.basis, commutator(b.basis[x], b.basis[y]));
    }
  }
}

}  // namespace

LieBasis so_e_basis(const QMatrix& e) {
  if (e.rows() != e.cols()) throw Error("E must be square");
  const int n = e.rows();
  (void)inverse(e);  // reject singular E up front

  // (E F + F^T E)_{ij} = sum_k E_ik F_kj + F_ki E_kj; unknowns F_kl.
  QMatrix system(n * n, n * n);
  auto eq = [n](int i, int j) { return i * n + j; };
  auto var = [n](int k, int l) { return k * n + l; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        system(eq(i, j), var(k, j)) += e(i, k);
        system(eq(i, j), var(k, i)) += e(k, j);
      }
    }
  }

  LieBasis basis;
  basis.e = e;
  for (auto& v : nullspace(system)) basis.basis.push_back(unvec(v, n));
  fill_structure_constants(basis);
  return basis;
}

LieBasis lie_basis_from_matrices(QMatrix e, std::vector<QMatrix> mats) {
  LieBasis b;
  b.e = std::move(e);
  b.basis = std::move(mats);
  return b;
}

LieBasis trace_dual_basis(LieBasis b) {
  const int d = b.dim();
  b.gram = QMatrix(d, d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) b.gram(x, y) = (b.basis[x] * b.basis[y]).trace();
  QMatrix ginv;
  try {
    ginv = inverse(b.gram);
  } catch (const SingularMatrixError&) {
    throw DegenerateFormError("trace form degenerate");
  }
  b.duals.clear();
  for (int a = 0; a < d; ++a) {
    QMatrix dual(b.e.rows(), b.e.rows());
    for (int x = 0; x < d; ++x) {
      QMatrix scaled = b.basis[x];
      scaled.scale(ginv(x, a));
      dual += scaled;
    }
    b.duals.push_back(std::move(dual));
  }
  return b;
}

QMatrix casimir_on_v(const LieBasis& b) {
  if (b.duals.empty() && b.dim() > 0) throw Error("casimir needs the trace-form duals");
  QMatrix omega(b.e.rows(), b.e.rows());
  for (int a = 0; a < b.dim(); ++a) omega += b.basis[a] * b.duals[a];
  return omega;
}

CasimirDecomposition bracket_decompose(const LieBasis& b) {
  if (b.duals.empty()) throw Error("bracket decomposition needs the trace-form duals");
  const int n = b.e.rows();
  const int d = b.dim();

  std::vector<std::pair<int, int>> pairs;
  std::vector<QMatrix> brackets;
  for (int x = 0; x < d; ++x) {
    for (int y = x + 1; y < d; ++y) {
      pairs.push_back({x, y});
      brackets.push_back(commutator(b.basis[x], b.basis[y]));
    }
  }

  QMatrix a(n * n, static_cast<int>(brackets.size()));
  for (size_t c = 0; c < brackets.size(); ++c) {
    auto col = vec(brackets[c]);
    for (int r = 0; r < n * n; ++r) a(r, static_cast<int>(c)) = col[static_cast<size_t>(r)];
  }

  CasimirDecomposition out;
  out.omega = casimir_on_v(b);
  for (int dual_idx = 0; dual_idx < d; ++dual_idx) {
    auto sol = solve_columns(a, vec(b.duals[dual_idx]));
    if (!sol) throw NotSemisimpleError("not semisimple: [g,g] != g");
    for (size_t c = 0; c < sol->size(); ++c) {
      if ((*sol)[c].is_zero()) continue;
      QMatrix scaled = b.basis[dual_idx];
      scaled.scale((*sol)[c]);
      out.triples.push_back({std::move(scaled), b.basis[pairs[c].first], b.basis[pairs[c].second]});
    }
  }

  QMatrix rebuilt(n, n);
  for (const auto& t : out.triples) rebuilt += t.f1 * commutator(t.f2, t.f3);
  if (!(rebuilt == out.omega)) throw Error("bracket decomposition failed to rebuild Omega");
  return out;
}

TotalPairingResult total_pairing(const QMatrix& e) {
  StopWatch watch;
  TotalPairingResult out;
  LieBasis basis = trace_dual_basis(so_e_basis(e));
  CasimirDecomposition dec = bracket_decompose(basis);
  out.omega = dec.omega;
  out.dim_g = basis.dim();

  Rational total;
  for (const auto& t : dec.triples) {
    // [c_V] capped with the cup of the three derivations.
    total += pairing_symbolic(t.f1, t.f2, t.f3, e);
  }
  out.value = total;

  Rational target = -(dec.omega.trace() / Rational(2));
  if (total != target) {
    throw Error("total pairing " + total.str() + " differs from -tr(Omega)/2 = " + target.str());
  }

  out.report.check = "casimir-pairing";
  out.report.mode = "trace-form duals";
  out.report.status = "nonzero-witness";
  out.report.value = total.str();
  out.report.message = "HH3 != 0 witness established";
  out.report.witnesses = {{"dim_g", out.dim_g},
                          {"trace_omega", dec.omega.trace().str()},
                          {"triples", dec.triples.size()}};
  out.report.runtime_ms = watch.ms();
  return out;
}

namespace {

// The expanded colinearity word: sum_{ijrs} Einv_lj E_ir v_ij v_rs u_sk,
// free external indices l, k.
IndexedExpr colinearity_expansion(Index l, Index k) {
  const Index i = free_index("sd_i");
  const Index j = free_index("sd_j");
  const Index r = free_index("sd_r");
  const Index s = free_index("sd_s");
  Term t;
  t.scalars.push_back(ScalarAtom::form_e_inv(l, j));
  t.scalars.push_back(ScalarAtom::form_e(i, r));
  t.factors = {Word{Letter::v(i, j), Letter::v(r, s), Letter::u(s, k)}};
  for (Index idx : {i, j, r, s}) t = sum_over(std::move(t), idx);
  return IndexedExpr::from_term(std::move(t));
}

}  // namespace

VerificationReport verify_selfdual_equivalence(SelfdualDirection direction) {
  StopWatch watch;
  VerificationReport report;
  report.check = "selfdual";
  report.mode = direction == SelfdualDirection::Forward    ? "forward"
                : direction == SelfdualDirection::Backward ? "backward"
                                                           : "both";
  nlohmann::json detail = nlohmann::json::object();
  bool ok = true;

  const Index l = free_index("l");
  const Index k = free_index("k");

  if (direction != SelfdualDirection::Backward) {
    // Forward: one expression, two reduction routes.
    IndexedExpr y = colinearity_expansion(l, k);

    // Route 1 (colinearity + E E^-1 contraction): reduces to u_lk.
    IndexedExpr route_colin = normalize(y, RuleSet::contract_colin());
    IndexedExpr target_u = IndexedExpr::letter(Letter::u(l, k));
    const bool colin_ok = equal_normalized(route_colin, target_u);
    detail["forward_colinearity_route"] = render(route_colin);

    // Route 2 (antipode contraction): reduces to the right-hand side of the
    // substitution rule, i.e. (E^-1 v^T E)_lk.
    IndexedExpr route_contract = normalize(y, RuleSet::contract());
    IndexedExpr subst_rhs = normalize(target_u, RuleSet::contract_subst());
    const bool contract_ok = equal_normalized(route_contract, subst_rhs);
    detail["forward_contraction_route"] = render(route_contract);

    // Plain sanity route from the statement: sum_sj Einv_lj E_js u_sk -> u_lk.
    Term x;
    const Index sj = free_index("sd_j2");
    const Index ss = free_index("sd_s2");
    x.scalars.push_back(ScalarAtom::form_e_inv(l, sj));
    x.scalars.push_back(ScalarAtom::form_e(sj, ss));
    x.factors = {Word{Letter::u(ss, k)}};
    x = sum_over(std::move(x), sj);
    x = sum_over(std::move(x), ss);
    const bool r3_ok = equal_normalized(IndexedExpr::from_term(x), target_u);

    // E = I specialization of the derived identity: u = v^T.
    IndexedExpr specialized = specialize_form_to_identity(route_contract);
    const bool id_ok = equal_normalized(specialized, IndexedExpr::letter(Letter::v(k, l)));
    detail["e_identity_specialization"] = render(specialized);

    ok = ok && colin_ok && contract_ok && r3_ok && id_ok;
  }

  if (direction != SelfdualDirection::Forward) {
    // Backward: the colinearity defect, multiplied through by u and summed
    // (mirroring the proof), collapses to zero under the substitution rule.
    const Index j = free_index("bw_j");
    const Index t = free_index("bw_t");
    const Index i = free_index("bw_i");
    const Index r = free_index("bw_r");
    const Index s = free_index("bw_s");

    Term part1;
    part1.scalars.push_back(ScalarAtom::form_e(i, r));
    part1.factors = {Word{Letter::v(i, j), Letter::v(r, s), Letter::u(s, t)}};
    for (Index idx : {i, r, s}) part1 = sum_over(std::move(part1), idx);

    Term part2;
    part2.coeff = -Coefficient::one();
    part2.scalars.push_back(ScalarAtom::form_e(j, s));
    part2.factors = {Word{Letter::u(s, t)}};
    part2 = sum_over(std::move(part2), s);

    IndexedExpr defect = IndexedExpr::from_terms({part1, part2});
    IndexedExpr reduced = normalize(defect, RuleSet::contract_subst());
    detail["backward_residual"] = render(reduced);
    ok = ok && reduced.is_zero();
  }

  report.status = ok ? "proved-zero" : "failed";
  report.message = ok ? "self-duality equivalence replayed" : "a replay route missed its target";
  report.witnesses = detail;
  report.runtime_ms = watch.ms();
  return report;
}

}  // namespace hh3
