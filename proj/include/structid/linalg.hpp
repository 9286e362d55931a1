#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace structid {

/// Dense row-major matrix over a field.
template <class F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, F(0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  F& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const F& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  std::span<F> row(std::size_t i) { return {a_.data() + i * cols_, cols_}; }
  std::span<const F> row(std::size_t i) const { return {a_.data() + i * cols_, cols_}; }

  void append_row(std::span<const F> r) {
    if (r.size() != cols_) throw std::invalid_argument("append_row: width mismatch");
    a_.insert(a_.end(), r.begin(), r.end());
    ++rows_;
  }

  Matrix without_column(std::size_t j) const {
    Matrix m(rows_, cols_ - 1);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0, c = 0; k < cols_; ++k)
        if (k != j) m(i, c++) = (*this)(i, k);
    return m;
  }

  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<F> a_;
};

/// Reduced row echelon form in place; returns the pivot columns.
template <class F>
std::vector<std::size_t> rref(Matrix<F>& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == F(0)) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(p, k), m(r, k));
    const F inv = F(1) / m(r, c);
    for (std::size_t k = c; k < m.cols(); ++k) m(r, k) = m(r, k) * inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == F(0)) continue;
      const F f = m(i, c);
      for (std::size_t k = c; k < m.cols(); ++k) m(i, k) = m(i, k) - f * m(r, k);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

/// Rank by forward Gaussian elimination. Serial reference implementation.
template <class F>
std::size_t rank(Matrix<F> m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == F(0)) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t k = c; k < m.cols(); ++k) std::swap(m(p, k), m(r, k));
    const F inv = F(1) / m(r, c);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c) == F(0)) continue;
      const F f = m(i, c) * inv;
      for (std::size_t k = c; k < m.cols(); ++k) m(i, k) = m(i, k) - f * m(r, k);
    }
    ++r;
  }
  return r;
}

/// Same elimination with the row updates below each pivot spread over
/// OpenMP threads. Worth it only for wide or tall matrices.
template <class F>
std::size_t rank_parallel(Matrix<F> m) {
  std::size_t r = 0;
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(m.rows());
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == F(0)) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t k = c; k < m.cols(); ++k) std::swap(m(p, k), m(r, k));
    const F inv = F(1) / m(r, c);
    const std::ptrdiff_t first = static_cast<std::ptrdiff_t>(r) + 1;
#pragma omp parallel for schedule(static) if (m.rows() * m.cols() > 4096)
    for (std::ptrdiff_t i = first; i < rows; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (m(ui, c) == F(0)) continue;
      const F f = m(ui, c) * inv;
      for (std::size_t k = c; k < m.cols(); ++k) m(ui, k) = m(ui, k) - f * m(r, k);
    }
    ++r;
  }
  return r;
}

/// Basis of {v : m v = 0}, one vector per free column, read off the reduced
/// row echelon form (free coordinate 1, other free coordinates 0).
template <class F>
std::vector<std::vector<F>> null_space(const Matrix<F>& m) {
  Matrix<F> e = m;
  const auto pivots = rref(e);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<F>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<F> v(m.cols(), F(0));
    v[free] = F(1);
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = F(0) - e(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace structid
