#pragma once

// Small dense integer matrices and exact rational elimination.

#include <cstddef>
#include <optional>
#include <vector>

#include "toric/exactmath.hpp"

namespace toric {

/// Row-major dense matrix of small integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  static IntMatrix from_rows(const std::vector<std::vector<Count>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Count& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Count operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  CountVec column(std::size_t j) const;
  CountVec row(std::size_t i) const;
  bool nonnegative() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  CountVec data_;
};

/// Any solution x of M x = rhs (free variables set to zero), or nullopt.
std::optional<RatVec> solve_linear(std::vector<RatVec> matrix, RatVec rhs);

/// Indices of a maximal set of linearly independent rows, chosen greedily
/// in row order.
std::vector<std::size_t> independent_rows(const IntMatrix& a);

/// A * x with overflow checking.
CountVec multiply(const IntMatrix& a, const CountVec& x);

}  // namespace toric
