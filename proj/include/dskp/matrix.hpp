#pragma once

#include <cassert>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dskp/scalar.hpp"

namespace dskp {

// Dense matrix over a scalar backend. Elimination routines divide only by
// pivots that tested nonzero, so they are exact over GaussianRational; the
// float backend reuses them with tolerance-based zero tests and magnitude
// pivoting.
template <ScalarField S>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, S(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  S& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    assert(x.cols_ == y.rows_);
    Matrix out(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        if (x(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) out(i, j) += x(i, k) * y(k, j);
      }
    return out;
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
  }

  // Row echelon reduction, returning pivot columns. Full search over the
  // remaining block: first nonzero entry for the exact backend, the entry of
  // largest magnitude for the float backend.
  std::vector<std::size_t> reduce() {
    std::vector<std::size_t> pivot_cols;
    std::vector<std::size_t> col_of(cols_);
    for (std::size_t c = 0; c < cols_; ++c) col_of[c] = c;

    std::size_t r = 0;
    while (r < rows_ && r < cols_) {
      // Find a pivot in rows >= r, cols >= r.
      std::size_t pi = rows_, pj = cols_;
      if constexpr (ScalarTraits<S>::exact) {
        for (std::size_t j = r; j < cols_ && pi == rows_; ++j)
          for (std::size_t i = r; i < rows_; ++i)
            if (!(*this)(i, j).is_zero()) {
              pi = i;
              pj = j;
              break;
            }
      } else {
        double best = 0.0;
        for (std::size_t i = r; i < rows_; ++i)
          for (std::size_t j = r; j < cols_; ++j) {
            double m = std::abs((*this)(i, j).to_complex());
            if (m > best) {
              best = m;
              pi = i;
              pj = j;
            }
          }
        if (pi != rows_ && (*this)(pi, pj).is_zero()) pi = rows_;
      }
      if (pi == rows_) break;
      swap_rows(r, pi);
      swap_cols(r, pj);
      std::swap(col_of[r], col_of[pj]);

      S inv_piv = S(1) / (*this)(r, r);
      for (std::size_t j = r; j < cols_; ++j) (*this)(r, j) = (*this)(r, j) * inv_piv;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r || (*this)(i, r).is_zero()) continue;
        S f = (*this)(i, r);
        for (std::size_t j = r; j < cols_; ++j) (*this)(i, j) = (*this)(i, j) - f * (*this)(r, j);
      }
      pivot_cols.push_back(col_of[r]);
      ++r;
    }
    col_permutation_ = std::move(col_of);
    return pivot_cols;
  }

  std::size_t rank() const {
    Matrix tmp = *this;
    return tmp.reduce().size();
  }

  // Basis of the right nullspace, one vector per free column.
  std::vector<std::vector<S>> nullspace() const {
    Matrix tmp = *this;
    auto pivots = tmp.reduce();
    std::size_t rk = pivots.size();
    std::vector<std::vector<S>> basis;
    for (std::size_t free_c = rk; free_c < cols_; ++free_c) {
      std::vector<S> v(cols_, S(0));
      v[tmp.col_permutation_[free_c]] = S(1);
      for (std::size_t r = 0; r < rk; ++r)
        v[tmp.col_permutation_[r]] = -tmp(r, free_c);
      basis.push_back(std::move(v));
    }
    return basis;
  }

  // Exact inverse; nullopt when singular.
  std::optional<Matrix> inverse() const {
    assert(rows_ == cols_);
    std::size_t n = rows_;
    Matrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
      aug(i, n + i) = S(1);
    }
    // Elimination with row pivoting only, so the identity block stays aligned.
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = n;
      if constexpr (ScalarTraits<S>::exact) {
        for (std::size_t i = c; i < n; ++i)
          if (!aug(i, c).is_zero()) {
            piv = i;
            break;
          }
      } else {
        double best = 0.0;
        for (std::size_t i = c; i < n; ++i) {
          double m = std::abs(aug(i, c).to_complex());
          if (m > best) {
            best = m;
            piv = i;
          }
        }
        if (piv != n && aug(piv, c).is_zero()) piv = n;
      }
      if (piv == n) return std::nullopt;
      aug.swap_rows(c, piv);
      S inv_piv = S(1) / aug(c, c);
      for (std::size_t j = 0; j < 2 * n; ++j) aug(c, j) = aug(c, j) * inv_piv;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == c || aug(i, c).is_zero()) continue;
        S f = aug(i, c);
        for (std::size_t j = 0; j < 2 * n; ++j) aug(i, j) = aug(i, j) - f * aug(c, j);
      }
    }
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
    return out;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<S> a_;
  std::vector<std::size_t> col_permutation_;
};

}  // namespace dskp
