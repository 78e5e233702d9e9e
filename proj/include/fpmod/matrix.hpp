#pragma once

// Dense row-major matrix over engine elements, plus the handful of
// engine-aware constructions (products, Kronecker, blocks) the module code
// needs. Zero-row and zero-column matrices are valid everywhere.

#include <cassert>
#include <cstddef>
#include <string>
#include <vector>

namespace fpmod {

template <class T>
class Matrix {
public:
  Matrix() = default;
  // T{} must be the engine zero (true for mpz_class and Poly).
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool empty() const { return rows_ == 0 || cols_ == 0; }

  T &operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  const T &operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }

  [[nodiscard]] std::vector<T> column(std::size_t j) const {
    std::vector<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  void set_column(std::size_t j, const std::vector<T> &v) {
    assert(v.size() == rows_);
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  [[nodiscard]] Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Columns [first, first + count).
  [[nodiscard]] Matrix column_range(std::size_t first, std::size_t count) const {
    Matrix r(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < count; ++j) r(i, j) = (*this)(i, first + j);
    return r;
  }
  /// Rows [first, first + count).
  [[nodiscard]] Matrix row_range(std::size_t first, std::size_t count) const {
    Matrix r(count, cols_);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(first + i, j);
    return r;
  }

  bool operator==(const Matrix &) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class E>
using MatrixOf = Matrix<typename E::Elem>;

template <class E>
MatrixOf<E> identity(const E &eng, std::size_t n) {
  MatrixOf<E> I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = eng.one();
  return I;
}

template <class E>
MatrixOf<E> multiply(const E &eng, const MatrixOf<E> &A, const MatrixOf<E> &B) {
  assert(A.cols() == B.rows());
  MatrixOf<E> C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t k = 0; k < A.cols(); ++k) {
      if (eng.is_zero(A(i, k))) continue;
      for (std::size_t j = 0; j < B.cols(); ++j)
        if (!eng.is_zero(B(k, j))) C(i, j) = eng.add(C(i, j), eng.mul(A(i, k), B(k, j)));
    }
  return C;
}

template <class E>
bool is_zero_matrix(const E &eng, const MatrixOf<E> &A) {
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      if (!eng.is_zero(A(i, j))) return false;
  return true;
}

template <class E>
bool is_zero_column(const E &eng, const MatrixOf<E> &A, std::size_t j) {
  for (std::size_t i = 0; i < A.rows(); ++i)
    if (!eng.is_zero(A(i, j))) return false;
  return true;
}

/// [A | B]; an empty operand contributes no columns.
template <class T>
Matrix<T> hcat(const Matrix<T> &A, const Matrix<T> &B) {
  assert(A.rows() == B.rows());
  Matrix<T> C(A.rows(), A.cols() + B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) C(i, j) = A(i, j);
    for (std::size_t j = 0; j < B.cols(); ++j) C(i, A.cols() + j) = B(i, j);
  }
  return C;
}

template <class T>
Matrix<T> vcat(const Matrix<T> &A, const Matrix<T> &B) {
  assert(A.cols() == B.cols());
  Matrix<T> C(A.rows() + B.rows(), A.cols());
  for (std::size_t j = 0; j < A.cols(); ++j) {
    for (std::size_t i = 0; i < A.rows(); ++i) C(i, j) = A(i, j);
    for (std::size_t i = 0; i < B.rows(); ++i) C(A.rows() + i, j) = B(i, j);
  }
  return C;
}

template <class T>
Matrix<T> block_diag(const Matrix<T> &A, const Matrix<T> &B) {
  Matrix<T> C(A.rows() + B.rows(), A.cols() + B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) C(i, j) = A(i, j);
  for (std::size_t i = 0; i < B.rows(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j) C(A.rows() + i, A.cols() + j) = B(i, j);
  return C;
}

/// Kronecker product; with column-major vec, vec(A X B) = (B^T kron A) vec(X).
template <class E>
MatrixOf<E> kron(const E &eng, const MatrixOf<E> &A, const MatrixOf<E> &B) {
  MatrixOf<E> C(A.rows() * B.rows(), A.cols() * B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      if (eng.is_zero(A(i, j))) continue;
      for (std::size_t k = 0; k < B.rows(); ++k)
        for (std::size_t l = 0; l < B.cols(); ++l)
          C(i * B.rows() + k, j * B.cols() + l) = eng.mul(A(i, j), B(k, l));
    }
  return C;
}

template <class E>
std::string matrix_to_string(const E &eng, const MatrixOf<E> &A) {
  std::string s = "[";
  for (std::size_t i = 0; i < A.rows(); ++i) {
    if (i) s += ",";
    s += "[";
    for (std::size_t j = 0; j < A.cols(); ++j) {
      if (j) s += ",";
      s += eng.to_string(A(i, j));
    }
    s += "]";
  }
  return s + "]";
}

} // namespace fpmod
