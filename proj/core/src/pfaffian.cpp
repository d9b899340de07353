#include "toric/pfaffian.hpp"

#include <algorithm>

#include "toric/model.hpp"

namespace toric {

NonlwayPfaffian::NonlwayPfaffian(int l, const CountVec& b, const RatVec& y) : l_(l), b_(b) {
  const HierarchicalSpec spec = nonlway_spec(l);
  a_ = build_configuration(spec).entries;
  m_ = a_.cols();
  k_ = m_ / 2;
  y_ = y.empty() ? RatVec(m_, Rat(1)) : y;
  const KFParams p = nonlway_parameterize(l, b, y_, m_ - 1);
  alpha_ = p.alpha;
  eps_ = p.epsilon;
  z_ = p.z;
  if (z_ == 1) throw ModelError("Gauss-Manin provider needs z != 1; use the lattice provider");
  degree_ = degree_of(a_, b_);

  Count lo = 0, hi = -1;
  bool have_hi = false;
  for (std::size_t j = 0; j < m_; ++j) {
    if (eps_[j] > 0) {
      lo = std::max(lo, -alpha_[j]);
    } else if (!have_hi || alpha_[j] < hi) {
      hi = alpha_[j];
      have_hi = true;
    }
  }
  if (lo > hi) throw InfeasibleError("fiber is empty for these margins");
  q_.assign(k_, Rat(0));
  CountVec u(m_);
  for (Count s = lo; s <= hi; ++s) {
    Rat w(1);
    Int den(1);
    for (std::size_t j = 0; j < m_; ++j) {
      u[j] = alpha_[j] + eps_[j] * s;
      if (u[j] != 0) {
        w *= pow(y_[j], u[j]);
        den *= factorial(u[j]);
      }
    }
    w /= Rat(den);
    Rat sp(1);
    for (std::size_t i = 0; i < k_; ++i) {
      q_[i] += sp * w;
      sp *= s;
    }
  }
}

RatVec NonlwayPfaffian::weights() const {
  RatVec w(m_);
  for (std::size_t j = 0; j < m_; ++j) w[j] = Rat(static_cast<long>(alpha_[j])) * q_[0] + (eps_[j] > 0 ? q_[1] : -q_[1]);
  return w;
}

RatVec NonlwayPfaffian::top_moment_coefficients() const {
  RatVec c, d;
  for (std::size_t j = 0; j < m_; ++j) {
    if (eps_[j] < 0) {
      c.emplace_back(static_cast<long>(-alpha_[j]));
    } else {
      d.emplace_back(static_cast<long>(alpha_[j] + 1));
    }
  }
  ThetaReduction r = theta_reduction(c, d, z_);
  if (r.order != k_) throw ModelError("degenerate theta reduction");
  return r.coeffs;
}

void NonlwayPfaffian::advance(std::size_t j) {
  if (j >= m_) throw ModelError("cell index out of range");
  const RatVec w = weights();
  if (w[j] == 0) throw InfeasibleError("move leaves the lattice");

  RatVec moments = q_;
  {
    const RatVec top = top_moment_coefficients();
    Rat mk(0);
    for (std::size_t r = 0; r < k_; ++r) mk += top[r] * q_[r];
    moments.push_back(mk);
  }
  const Count delta = j == m_ - 1 ? 1 : 0;
  RatVec next(k_, Rat(0));
  for (std::size_t i = 0; i < k_; ++i) {
    // (s - delta)^i
    RatVec shift(i + 1, Rat(0));
    for (std::size_t r = 0; r <= i; ++r) {
      Rat coef(binomial(static_cast<Count>(i), static_cast<Count>(r)));
      if ((i - r) % 2 == 1) coef = -coef;
      if (delta == 0 && r != i) coef = 0;
      shift[r] = coef;
    }
    // times (alpha_j + eps_j s)
    RatVec poly(i + 2, Rat(0));
    for (std::size_t r = 0; r <= i; ++r) {
      poly[r] += shift[r] * static_cast<long>(alpha_[j]);
      poly[r + 1] += shift[r] * eps_[j];
    }
    Rat acc(0);
    for (std::size_t r = 0; r < poly.size(); ++r) {
      if (poly[r] != 0) acc += poly[r] * moments[r];
    }
    next[i] = acc / y_[j];
  }
  q_ = std::move(next);
  for (std::size_t i = 0; i < a_.rows(); ++i) b_[i] -= a_(i, j);
  for (std::size_t i = 0; i < m_; ++i) alpha_[i] += eps_[i] * delta - (i == j ? 1 : 0);
  --degree_;
}

}  // namespace toric
