#include "hh3/numeric.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "hh3/einsum.hpp"
#include "hh3/errors.hpp"
#include "hh3/rng.hpp"

namespace hh3 {

namespace {

double max_abs(const DMatrix& m) {
  double v = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v = std::max(v, std::abs(m(i, j)));
  return v;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

DMatrix expm(const DMatrix& a) {
  if (a.rows() != a.cols()) throw Error("expm needs a square matrix");
  const int n = a.rows();
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += std::abs(a(i, j));
    norm = std::max(norm, row);
  }
  int squarings = 0;
  double scaled_norm = norm;
  while (scaled_norm > 0.5) {
    scaled_norm /= 2.0;
    ++squarings;
  }
  DMatrix x = a;
  x.scale(std::ldexp(1.0, -squarings));

  DMatrix result = DMatrix::identity(n);
  DMatrix term = DMatrix::identity(n);
  for (int k = 1; k <= 40; ++k) {
    term = term * x;
    term.scale(1.0 / k);
    result += term;
    if (max_abs(term) < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

GroupPointSampler::GroupPointSampler(const BilinearFormSpec& form, PointKind kind)
    : kind_(kind), e_(to_double(form.form())), e_inv_(to_double(form.inverse_form())) {
  if (kind_ == PointKind::Isometry) {
    for (const QMatrix& f : so_e_basis(form.form()).basis) basis_.push_back(to_double(f));
    if (basis_.empty()) throw Error("so(E) is trivial: no group points to sample");
  }
}

GroupPoint GroupPointSampler::sample(uint64_t seed) const {
  SplitMix64 rng(seed);
  const int n = dim();
  GroupPoint p;
  if (kind_ == PointKind::Isometry) {
    DMatrix f(n, n);
    for (const DMatrix& b : basis_) {
      DMatrix scaled = b;
      scaled.scale(rng.uniform_pm1());
      f += scaled;
    }
    f.scale(rng.uniform_pm1());
    p.g = expm(f);
    p.g_inv = e_inv_ * p.g.transpose() * e_;
    p.residual = max_abs(p.g * e_inv_ * p.g.transpose() - e_inv_);
    if (p.residual >= 1e-10) throw Error("sampled group point violates the isometry relation");
  } else {
    DMatrix r(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(i, j) = rng.uniform_pm1();
    p.g = expm(r);
    r.scale(-1.0);
    p.g_inv = expm(r);
    p.residual = max_abs(p.g * p.g_inv - DMatrix::identity(n));
    if (p.residual >= 1e-10) throw Error("sampled point has an unreliable inverse");
  }
  return p;
}

GroupPoint random_group_point(const BilinearFormSpec& form, uint64_t seed) {
  return GroupPointSampler(form).sample(seed);
}

NumericBindings numeric_bindings(const BilinearFormSpec& form) {
  NumericBindings nb;
  nb.e = to_double(form.form());
  nb.e_inv = to_double(form.inverse_form());
  nb.eps = form.eps();
  return nb;
}

namespace {

double evaluate_terms(const std::vector<Term>& terms, const std::vector<GroupPoint>& points,
                      const NumericBindings& nb) {
  const int n = nb.e.rows();
  const DMatrix identity = DMatrix::identity(n);
  double total = 0.0;
  for (const Term& t : terms) {
    validate_term(t);
    if (t.factors.size() != points.size()) {
      throw EvalError("need one group point per tensor factor");
    }
    double acc = t.coeff.eval(n, nb.eps).to_double();
    std::vector<EinsumTensor<double>> ts;
    auto pin_check = [&](Index idx) -> std::optional<int> {
      if (is_dummy(idx)) return std::nullopt;
      throw EvalError("free index present: '" + free_index_name(idx) + "'");
    };
    for (const auto& a : t.scalars) {
      const DMatrix* m = nullptr;
      switch (a.kind) {
        case AtomKind::Delta:
          m = &identity;
          break;
        case AtomKind::FormE:
          m = &nb.e;
          break;
        case AtomKind::FormEInv:
          m = &nb.e_inv;
          break;
        case AtomKind::DerMat:
          if (!nb.der[a.slot - 1]) throw EvalError("no binding for F" + std::to_string(a.slot));
          m = &*nb.der[a.slot - 1];
          break;
      }
      if (m->rows() != n || m->cols() != n) throw EvalError("dimension mismatch in binding");
      ts.push_back({*m, a.row, a.col, pin_check(a.row), pin_check(a.col)});
    }
    for (size_t f = 0; f < t.factors.size(); ++f) {
      for (const Letter& l : t.factors[f]) {
        const DMatrix& m = (l.kind == LetterKind::V) ? points[f].g : points[f].g_inv;
        ts.push_back({m, l.row, l.col, pin_check(l.row), pin_check(l.col)});
      }
    }
    total += contract_network(std::move(ts), acc);
  }
  return total;
}

VerificationReport zero_check_impl(const std::vector<Term>& terms, int factor_count,
                                   const BilinearFormSpec& form, int samples, double tol,
                                   uint64_t seed, PointKind kind, const std::string& mode) {
  if (samples < 1) throw Error("numeric check needs at least one sample");
  StopWatch watch;
  GroupPointSampler sampler(form, kind);
  NumericBindings nb = numeric_bindings(form);

  double worst = 0.0;
  int worst_sample = -1;
  std::vector<double> values;
  values.reserve(static_cast<size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    std::vector<GroupPoint> points;
    points.reserve(static_cast<size_t>(factor_count));
    for (int f = 0; f < factor_count; ++f) {
      points.push_back(sampler.sample(SplitMix64::mix(seed, static_cast<uint64_t>(s) * 16 + f)));
    }
    const double v = evaluate_terms(terms, points, nb);
    values.push_back(std::abs(v));
    if (std::abs(v) > worst) {
      worst = std::abs(v);
      worst_sample = s;
    }
  }

  VerificationReport report;
  report.check = "numeric-zero-check";
  report.mode = mode;
  report.status = (worst < tol) ? "numerically-zero" : "nonzero-witness";
  report.value = fmt17(worst);
  nlohmann::json sample_values = nlohmann::json::array();
  for (double v : values) sample_values.push_back(fmt17(v));
  report.witnesses = {{"max_abs", fmt17(worst)},
                      {"witness_sample", worst_sample},
                      {"samples", samples},
                      {"tol", fmt17(tol)},
                      {"per_sample_abs", sample_values}};
  report.runtime_ms = watch.ms();
  return report;
}

}  // namespace

double evaluate_chain(const Chain& c, const std::vector<GroupPoint>& points,
                      const NumericBindings& nb) {
  return evaluate_terms(c.terms(), points, nb);
}

double evaluate_expr(const IndexedExpr& x, const GroupPoint& p, const NumericBindings& nb) {
  return evaluate_terms(x.terms(), {p}, nb);
}

VerificationReport numeric_zero_check(const Chain& c, const BilinearFormSpec& form, int samples,
                                      double tol, uint64_t seed, PointKind kind) {
  return zero_check_impl(c.terms(), c.degree() + 1, form, samples, tol, seed, kind,
                         "chain degree " + std::to_string(c.degree()));
}

VerificationReport numeric_zero_check(const IndexedExpr& x, const BilinearFormSpec& form,
                                      int samples, double tol, uint64_t seed, PointKind kind) {
  return zero_check_impl(x.terms(), 1, form, samples, tol, seed, kind, "degree 0");
}

}  // namespace hh3
