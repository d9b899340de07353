#pragma once

// Gauss-Manin vector for binary models without the l-way interaction.
//
// With s = u_{2...2} the fiber is u_j = alpha_j + eps_j s, and the state is
// q = (M_0, ..., M_{k-1}), M_i = sum over the fiber of s^i y^u/u!
// (so M_0 = Z and M_i = theta^i Z for theta = y_{2...2} d/dy_{2...2}),
// k = 2^(l-1). The k-th moment is eliminated with the theta reduction of
// the kF(k-1) series, which needs z != 1.

#include <vector>

#include "toric/exactmath.hpp"
#include "toric/families.hpp"

namespace toric {

class NonlwayPfaffian {
 public:
  /// Initializes q by summing over the feasible range of s. Throws
  /// InfeasibleError for an empty fiber and ModelError when z = 1.
  NonlwayPfaffian(int l, const CountVec& b, const RatVec& y);

  /// w_j = y_j Z(b - a_j) = alpha_j M_0 + eps_j M_1.
  RatVec weights() const;
  /// Moves to b - a_j: y_j q'_i = sum (alpha_j + eps_j s)(s - [j last])^i y^u/u!.
  void advance(std::size_t j);

  const RatVec& q() const { return q_; }
  const CountVec& b() const { return b_; }
  const CountVec& alpha() const { return alpha_; }
  const std::vector<int>& epsilon() const { return eps_; }
  const Rat& z() const { return z_; }
  Count degree() const { return degree_; }
  std::size_t rank() const { return k_; }
  int order() const { return l_; }

  /// M_k expressed through M_0..M_{k-1} at the current node.
  RatVec top_moment_coefficients() const;

 private:
  int l_;
  std::size_t k_;
  std::size_t m_;
  CountVec b_;
  RatVec y_;
  Rat z_;
  CountVec alpha_;
  std::vector<int> eps_;
  RatVec q_;
  Count degree_ = 0;
  IntMatrix a_;
};

}  // namespace toric
