#include "hh3/matrix.hpp"

namespace hh3 {

QMatrix inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw Error("inverse of non-square matrix");
  const int n = m.rows();
  QMatrix a = m;
  QMatrix inv = QMatrix::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (!a(r, col).is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw SingularMatrixError("singular E");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    Rational p = a(col, col).inverse();
    for (int j = 0; j < n; ++j) {
      a(col, j) *= p;
      inv(col, j) *= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a(r, col).is_zero()) continue;
      Rational f = a(r, col);
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

QMatrix rref(QMatrix m, std::vector<int>* pivots) {
  if (pivots) pivots->clear();
  int lead = 0;
  for (int col = 0; col < m.cols() && lead < m.rows(); ++col) {
    int pivot = -1;
    for (int r = lead; r < m.rows(); ++r) {
      if (!m(r, col).is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != lead) {
      for (int j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(lead, j));
    }
    Rational p = m(lead, col).inverse();
    for (int j = 0; j < m.cols(); ++j) m(lead, j) *= p;
    for (int r = 0; r < m.rows(); ++r) {
      if (r == lead || m(r, col).is_zero()) continue;
      Rational f = m(r, col);
      for (int j = 0; j < m.cols(); ++j) m(r, j) -= f * m(lead, j);
    }
    if (pivots) pivots->push_back(col);
    ++lead;
  }
  return m;
}

int rank(const QMatrix& m) {
  std::vector<int> pivots;
  rref(m, &pivots);
  return static_cast<int>(pivots.size());
}

std::vector<std::vector<Rational>> nullspace(const QMatrix& m) {
  std::vector<int> pivots;
  QMatrix r = rref(m, &pivots);
  const int n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (int c : pivots) is_pivot[c] = true;

  std::vector<std::vector<Rational>> basis;
  for (int free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<Rational> v(n);
    v[free_col] = Rational(1);
    for (size_t i = 0; i < pivots.size(); ++i) {
      v[pivots[i]] = -r(static_cast<int>(i), free_col);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<Rational>> solve_columns(const QMatrix& a, const std::vector<Rational>& b) {
  if (static_cast<int>(b.size()) != a.rows()) throw Error("solve_columns shape mismatch");
  QMatrix aug(a.rows(), a.cols() + 1);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  std::vector<int> pivots;
  QMatrix r = rref(std::move(aug), &pivots);
  for (int c : pivots) {
    if (c == a.cols()) return std::nullopt;  // pivot in the augmented column
  }
  std::vector<Rational> x(a.cols());
  for (size_t i = 0; i < pivots.size(); ++i) {
    x[pivots[i]] = r(static_cast<int>(i), a.cols());
  }
  return x;
}

DMatrix to_double(const QMatrix& m) {
  DMatrix d(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) d(i, j) = m(i, j).to_double();
  return d;
}

QMatrix commutator(const QMatrix& a, const QMatrix& b) {
  return a * b - b * a;
}

QMatrix symplectic_form(int n) {
  if (n <= 0 || n % 2 != 0) throw Error("symplectic form requires even positive dimension");
  QMatrix j(n, n);
  const int h = n / 2;
  for (int i = 0; i < h; ++i) {
    j(i, h + i) = Rational(1);
    j(h + i, i) = Rational(-1);
  }
  return j;
}

}  // namespace hh3
