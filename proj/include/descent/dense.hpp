#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "descent/rational.hpp"

namespace descent {

/// Small dense row-major matrix over an exact scalar (Rational or FieldElem).
/// Scalars must provide +, -, *, / and a free is_zero().
template <class Scalar>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, const Scalar& fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<Scalar> column(std::size_t j) const {
    std::vector<Scalar> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, j));
    return out;
  }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_, data_.empty() ? Scalar() : data_[0]);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const DenseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

template <class Scalar>
DenseMatrix<Scalar> operator*(const DenseMatrix<Scalar>& a, const DenseMatrix<Scalar>& b) {
  Scalar zero = a(0, 0) - a(0, 0);
  DenseMatrix<Scalar> out(a.rows(), b.cols(), zero);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (is_zero(a(i, k))) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

template <class Scalar>
std::vector<Scalar> operator*(const DenseMatrix<Scalar>& a, const std::vector<Scalar>& v) {
  Scalar zero = a(0, 0) - a(0, 0);
  std::vector<Scalar> out(a.rows(), zero);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (!is_zero(v[k])) out[i] += a(i, k) * v[k];
  return out;
}

/// Reduced row echelon form in place; returns pivot columns.
template <class Scalar>
std::vector<std::size_t> row_reduce(DenseMatrix<Scalar>& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && is_zero(m(pivot, col))) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(row, j));
    Scalar inv = m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) = m(row, j) / inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || is_zero(m(i, col))) continue;
      Scalar factor = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= factor * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class Scalar>
std::size_t rank(DenseMatrix<Scalar> m) {
  return row_reduce(m).size();
}

/// Some solution x of a x = b, if consistent.
template <class Scalar>
std::optional<std::vector<Scalar>> solve(const DenseMatrix<Scalar>& a, const std::vector<Scalar>& b) {
  Scalar zero = a(0, 0) - a(0, 0);
  DenseMatrix<Scalar> aug(a.rows(), a.cols() + 1, zero);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto pivots = row_reduce(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  std::vector<Scalar> x(a.cols(), zero);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, a.cols());
  return x;
}

template <class Scalar>
Scalar determinant(DenseMatrix<Scalar> m) {
  Scalar det = m(0, 0) - m(0, 0) + 1;
  const std::size_t n = m.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && is_zero(m(pivot, col))) ++pivot;
    if (pivot == n) return m(0, 0) - m(0, 0);
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(pivot, j), m(col, j));
      det = -det;
    }
    det = det * m(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (is_zero(m(i, col))) continue;
      Scalar factor = m(i, col) / m(col, col);
      for (std::size_t j = col; j < n; ++j) m(i, j) -= factor * m(col, j);
    }
  }
  return det;
}

template <class Scalar>
std::optional<DenseMatrix<Scalar>> inverse(const DenseMatrix<Scalar>& a) {
  const std::size_t n = a.rows();
  Scalar zero = a(0, 0) - a(0, 0);
  DenseMatrix<Scalar> aug(n, 2 * n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = zero + 1;
  }
  auto pivots = row_reduce(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  DenseMatrix<Scalar> out(n, n, zero);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  return out;
}

}  // namespace descent
