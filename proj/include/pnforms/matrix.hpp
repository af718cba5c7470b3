#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pnforms/field.hpp"

namespace pnforms {

/// Dense row-major matrix over an exact field. Entries are kept in canonical
/// form (reduced residues for GF(q), canonical fractions for QQ).
template <class F>
class Matrix {
 public:
  using field_type = F;
  using value_type = typename F::value_type;

  explicit Matrix(F field, std::size_t rows = 0, std::size_t cols = 0)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

  static Matrix identity(const F& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  /// Row-major integer literal, reduced into the field.
  static Matrix from_ints(const F& field, std::size_t rows, std::size_t cols,
                          std::initializer_list<long long> entries) {
    if (entries.size() != rows * cols) throw std::invalid_argument("entry count does not match shape");
    Matrix m(field, rows, cols);
    std::size_t k = 0;
    for (long long v : entries) m.data_[k++] = field.from_int(v);
    return m;
  }

  const F& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  value_type& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const value_type& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<value_type> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const value_type> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  bool is_zero() const {
    for (const auto& v : data_) {
      if (!field_.is_zero(v)) return false;
    }
    return true;
  }

  Matrix transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    }
    return t;
  }

  /// Columns [first, first + count).
  Matrix columns(std::size_t first, std::size_t count) const {
    if (first + count > cols_) throw std::out_of_range("column range");
    Matrix m(field_, rows_, count);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < count; ++c) m(r, c) = (*this)(r, first + c);
    }
    return m;
  }

  Matrix negated() const {
    Matrix m(*this);
    for (auto& v : m.data_) v = field_.neg(v);
    return m;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
      throw std::invalid_argument("matrix product shape mismatch: " + a.shape_string() + " * " +
                                  b.shape_string());
    }
    const F& f = a.field_;
    Matrix out(f, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      auto out_row = out.row(i);
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const value_type& aik = a(i, k);
        if (f.is_zero(aik)) continue;
        auto b_row = b.row(k);
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (!f.is_zero(b_row[j])) out_row[j] = f.add(out_row[j], f.mul(aik, b_row[j]));
        }
      }
    }
    return out;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("difference shape mismatch");
    Matrix out(a);
    for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] = a.field_.sub(a.data_[k], b.data_[k]);
    return out;
  }

  std::string shape_string() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  F field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<value_type> data_;
};

/// [a | b]
template <class F>
Matrix<F> hcat(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hcat row mismatch");
  Matrix<F> m(a.field(), a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) m(r, a.cols() + c) = b(r, c);
  }
  return m;
}

/// [a ; b]
template <class F>
Matrix<F> vcat(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("vcat column mismatch");
  Matrix<F> m(a.field(), a.rows() + b.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  }
  for (std::size_t r = 0; r < b.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) m(a.rows() + r, c) = b(r, c);
  }
  return m;
}

}  // namespace pnforms
