#pragma once

#include <initializer_list>
#include <optional>
#include <vector>

#include "hh3/errors.hpp"
#include "hh3/rational.hpp"

namespace hh3 {

/// Dense row-major matrix over an arbitrary scalar type. Only the operations
/// the engine needs; exact linear algebra lives in the free functions below.
template <class T>
class MatrixT {
 public:
  MatrixT() = default;
  MatrixT(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}
  MatrixT(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    data_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != cols_) throw Error("ragged matrix literal");
      for (const auto& x : r) data_.push_back(x);
    }
  }

  static MatrixT zero(int n) { return MatrixT(n, n); }
  static MatrixT identity(int n) {
    MatrixT m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  MatrixT transpose() const {
    MatrixT m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  T trace() const {
    T t{};
    for (int i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
    return t;
  }

  MatrixT& operator+=(const MatrixT& o) {
    check_same_shape(o);
    for (size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  MatrixT& operator-=(const MatrixT& o) {
    check_same_shape(o);
    for (size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  friend MatrixT operator+(MatrixT a, const MatrixT& b) { return a += b; }
  friend MatrixT operator-(MatrixT a, const MatrixT& b) { return a -= b; }

  friend MatrixT operator*(const MatrixT& a, const MatrixT& b) {
    if (a.cols_ != b.rows_) throw Error("matrix shape mismatch in product");
    MatrixT c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  MatrixT& scale(const T& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!(x == T{})) return false;
    return true;
  }

  friend bool operator==(const MatrixT& a, const MatrixT& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const MatrixT& a, const MatrixT& b) { return !(a == b); }

 private:
  void check_same_shape(const MatrixT& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix shape mismatch");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using QMatrix = MatrixT<Rational>;
using DMatrix = MatrixT<double>;

/// Gauss-Jordan inverse; throws SingularMatrixError.
QMatrix inverse(const QMatrix& m);

/// Reduced row echelon form. Pivot columns (in order) are reported through
/// `pivots` when non-null.
QMatrix rref(QMatrix m, std::vector<int>* pivots = nullptr);

int rank(const QMatrix& m);

/// Basis of the right nullspace {x : m x = 0}, one vector per free column,
/// in the deterministic free-column order of the RREF.
std::vector<std::vector<Rational>> nullspace(const QMatrix& m);

/// Solves A x = b with A given by columns; returns the particular solution
/// with all RREF free variables set to zero, or nullopt when inconsistent.
std::optional<std::vector<Rational>> solve_columns(const QMatrix& a, const std::vector<Rational>& b);

QMatrix to_rational(const DMatrix&) = delete;  // floats never feed the exact side

DMatrix to_double(const QMatrix& m);

/// [a, b] = ab - ba.
QMatrix commutator(const QMatrix& a, const QMatrix& b);

/// Standard symplectic form on even dimension: J = [[0, I], [-I, 0]].
QMatrix symplectic_form(int n);

}  // namespace hh3
