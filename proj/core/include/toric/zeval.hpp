#pragma once

// Evaluation of A-hypergeometric polynomials Z_A(b;y) = sum over the
// b-fiber of y^u/u!, by brute-force enumeration and by the memoized lattice
// recursion sum_j y_j Z(b - a_j) = deg(b) Z(b).

#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "toric/exactmath.hpp"
#include "toric/linalg.hpp"
#include "toric/model.hpp"

namespace toric {

using Fiber = std::vector<CountVec>;

/// All u >= 0 with Au = b, in lexicographic order. Requires A >= 0 without
/// zero columns.
Fiber enumerate_fiber(const IntMatrix& a, const CountVec& b);

/// Lexicographically first fiber point, if any.
std::optional<CountVec> first_fiber_point(const IntMatrix& a, const CountVec& b);

/// Fiber size, or nullopt once it exceeds `limit`.
std::optional<std::uint64_t> count_fiber(const IntMatrix& a, const CountVec& b, std::uint64_t limit);

/// y^u / u!
Rat monomial_weight(const RatVec& y, const CountVec& u);

/// Sum of y^u/u! over an enumerated fiber; 0 for an empty fiber.
Rat z_oracle(const IntMatrix& a, const CountVec& b, const RatVec& y);

/// Memoized Z over the lattice below a bound b (A >= 0 only).
///
/// With Y_j = Q y_j integral (Q the common denominator of y), the cache
/// stores the integer N(v) = deg(v)! Q^deg(v) Z(v;y), which satisfies
/// N(v) = sum_j Y_j N(v - a_j), N(0) = 1. Keys are mixed-radix encodings
/// of the linearly independent rows of v; the other rows are determined
/// on the lattice of b. Safe for concurrent use; a key may be computed
/// twice by racing threads, which is harmless.
class ZCache {
 public:
  ZCache(const IntMatrix& a, const RatVec& y, const CountVec& bound);

  Rat z(const CountVec& v);
  const Int& path_count(const CountVec& v);
  Count degree(const CountVec& v) const;

  /// y_j Z(v - a_j), exact.
  RatVec weights(const CountVec& v);
  /// Y_j N(v - a_j), proportional to weights(v) by deg(v)! Q^deg(v) / Q.
  std::vector<Int> scaled_weights(const CountVec& v);

  const Int& scale() const { return q_; }
  const IntMatrix& matrix() const { return a_; }
  const RatVec& y() const { return y_; }
  const CountVec& bound() const { return bound_; }
  std::size_t size() const;
  bool dense() const { return dense_; }

 private:
  std::uint64_t key_of(const CountVec& v) const;
  bool child_valid(const CountVec& v, std::size_t j) const;
  const Int* lookup(std::uint64_t key) const;
  const Int& store(std::uint64_t key, Int value);

  IntMatrix a_;
  RatVec y_;
  CountVec bound_;
  Int q_;
  std::vector<Int> big_y_;
  std::vector<std::size_t> indep_;
  std::vector<std::uint64_t> stride_;      // per independent row
  std::vector<std::uint64_t> col_stride_;  // key offset of each column
  RatVec certificate_;
  Int cert_den_;
  std::vector<Int> cert_num_;

  bool dense_ = false;
  std::vector<Int> dense_values_;
  std::vector<std::uint8_t> dense_set_;
  std::unordered_map<std::uint64_t, Int> sparse_values_;
  std::size_t stored_ = 0;
  mutable std::shared_mutex mutex_;
};

/// Lattice evaluation through a temporary cache. Matrices with negative
/// entries are routed to z_oracle.
Rat z_lattice(const IntMatrix& a, const CountVec& b, const RatVec& y);

/// (y^u/u!) / Z_A(b;y). Throws if Au != b. Pass z to skip re-evaluation.
Rat pmf(const IntMatrix& a, const CountVec& b, const RatVec& y, const CountVec& u,
        std::optional<Rat> z = std::nullopt);

/// w_j = y_j Z(v - a_j) by separate enumerations of each neighbouring fiber.
RatVec oracle_weights(const IntMatrix& a, const CountVec& v, const RatVec& y);
/// Same values from one enumeration of the v-fiber: w_j = sum u_j y^u/u!.
RatVec oracle_weights_enumerated(const IntMatrix& a, const CountVec& v, const RatVec& y);

}  // namespace toric
