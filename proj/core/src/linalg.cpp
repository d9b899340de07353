#include "toric/linalg.hpp"

#include <string>

namespace toric {

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Count>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw ModelError("ragged matrix: row " + std::to_string(i));
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

CountVec IntMatrix::column(std::size_t j) const {
  CountVec col(rows_);
  for (std::size_t i = 0; i < rows_; ++i) col[i] = (*this)(i, j);
  return col;
}

CountVec IntMatrix::row(std::size_t i) const {
  return CountVec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

bool IntMatrix::nonnegative() const {
  for (Count v : data_) {
    if (v < 0) return false;
  }
  return true;
}

std::optional<RatVec> solve_linear(std::vector<RatVec> m, RatVec rhs) {
  const std::size_t rows = m.size();
  if (rhs.size() != rows) throw ModelError("solve_linear: dimension mismatch");
  const std::size_t cols = rows == 0 ? 0 : m.front().size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    std::swap(rhs[p], rhs[r]);
    const Rat inv = 1 / m[r][c];
    for (std::size_t k = c; k < cols; ++k) m[r][k] *= inv;
    rhs[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rat f = m[i][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
      rhs[i] -= f * rhs[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i) {
    if (rhs[i] != 0) return std::nullopt;
  }
  RatVec x(cols, Rat(0));
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = rhs[i];
  return x;
}

std::vector<std::size_t> independent_rows(const IntMatrix& a) {
  std::vector<RatVec> basis;  // reduced rows kept in echelon form
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    RatVec v(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) v[j] = a(i, j);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (v[pivots[b]] == 0) continue;
      const Rat f = v[pivots[b]];
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= f * basis[b][j];
    }
    std::size_t p = 0;
    while (p < v.size() && v[p] == 0) ++p;
    if (p == v.size()) continue;
    const Rat inv = 1 / v[p];
    for (auto& e : v) e *= inv;
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (basis[b][p] == 0) continue;
      const Rat f = basis[b][p];
      for (std::size_t j = 0; j < v.size(); ++j) basis[b][j] -= f * v[j];
    }
    basis.push_back(std::move(v));
    pivots.push_back(p);
    chosen.push_back(i);
  }
  return chosen;
}

CountVec multiply(const IntMatrix& a, const CountVec& x) {
  if (x.size() != a.cols()) {
    throw ModelError("dimension mismatch: matrix has " + std::to_string(a.cols()) +
                     " columns, vector has " + std::to_string(x.size()) + " entries");
  }
  CountVec out(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Count acc = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Count prod = 0;
      if (__builtin_mul_overflow(a(i, j), x[j], &prod) || __builtin_add_overflow(acc, prod, &acc)) {
        throw ModelError("integer overflow in matrix-vector product");
      }
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace toric
