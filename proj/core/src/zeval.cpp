#include "toric/zeval.hpp"

#include <algorithm>
#include <functional>
#include <mutex>

namespace toric {
namespace {

constexpr std::uint64_t kDenseSlotLimit = std::uint64_t{1} << 23;

void check_enumerable(const IntMatrix& a, const CountVec& b) {
  if (!a.nonnegative()) throw ModelError("fiber enumeration needs a nonnegative matrix");
  if (b.size() != a.rows()) throw ModelError("b length does not match the number of rows of A");
  for (std::size_t j = 0; j < a.cols(); ++j) {
    bool nonzero = false;
    for (std::size_t i = 0; i < a.rows(); ++i) nonzero = nonzero || a(i, j) != 0;
    if (!nonzero) throw ModelError("column " + std::to_string(j) + " of A is zero; fiber is unbounded");
  }
}

}  // namespace

namespace {

// Calls visit(u) for every fiber point until it returns false.
bool visit_fiber(const IntMatrix& a, const CountVec& b, const std::function<bool(const CountVec&)>& visit) {
  check_enumerable(a, b);
  if (std::any_of(b.begin(), b.end(), [](Count v) { return v < 0; })) return true;
  const std::size_t d = a.rows();
  const std::size_t m = a.cols();
  // covered[k][i]: some column >= k touches row i.
  std::vector<std::vector<bool>> covered(m + 1, std::vector<bool>(d, false));
  for (std::size_t k = m; k-- > 0;) {
    for (std::size_t i = 0; i < d; ++i) covered[k][i] = covered[k + 1][i] || a(i, k) > 0;
  }
  CountVec u(m, 0);
  CountVec r = b;
  std::function<bool(std::size_t)> rec = [&](std::size_t k) {
    for (std::size_t i = 0; i < d; ++i) {
      if (r[i] != 0 && !covered[k][i]) return true;
    }
    if (k == m) return visit(u);
    Count hi = -1;
    for (std::size_t i = 0; i < d; ++i) {
      if (a(i, k) > 0) {
        const Count lim = r[i] / a(i, k);
        hi = hi < 0 ? lim : std::min(hi, lim);
      }
    }
    bool go = true;
    for (Count t = 0; t <= hi && go; ++t) {
      u[k] = t;
      for (std::size_t i = 0; i < d; ++i) r[i] -= t * a(i, k);
      go = rec(k + 1);
      for (std::size_t i = 0; i < d; ++i) r[i] += t * a(i, k);
    }
    u[k] = 0;
    return go;
  };
  return rec(0);
}

}  // namespace

Fiber enumerate_fiber(const IntMatrix& a, const CountVec& b) {
  Fiber out;
  visit_fiber(a, b, [&](const CountVec& u) {
    out.push_back(u);
    return true;
  });
  return out;
}

std::optional<std::uint64_t> count_fiber(const IntMatrix& a, const CountVec& b, std::uint64_t limit) {
  std::uint64_t n = 0;
  const bool done = visit_fiber(a, b, [&](const CountVec&) { return ++n <= limit; });
  if (!done) return std::nullopt;
  return n;
}

std::optional<CountVec> first_fiber_point(const IntMatrix& a, const CountVec& b) {
  std::optional<CountVec> found;
  visit_fiber(a, b, [&](const CountVec& u) {
    found = u;
    return false;
  });
  return found;
}

Rat monomial_weight(const RatVec& y, const CountVec& u) {
  if (y.size() != u.size()) throw ModelError("monomial_weight: dimension mismatch");
  Rat w(1);
  Int den(1);
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j] < 0) throw ModelError("negative count in monomial");
    if (u[j] == 0) continue;
    if (y[j] != 1) w *= pow(y[j], u[j]);
    den *= factorial(u[j]);
  }
  w /= Rat(den);
  return w;
}

Rat z_oracle(const IntMatrix& a, const CountVec& b, const RatVec& y) {
  if (y.size() != a.cols()) throw ModelError("y length does not match the number of columns of A");
  Rat z(0);
  for (const auto& u : enumerate_fiber(a, b)) z += monomial_weight(y, u);
  return z;
}

ZCache::ZCache(const IntMatrix& a, const RatVec& y, const CountVec& bound)
    : a_(a), y_(y), bound_(bound) {
  if (!a_.nonnegative()) throw ModelError("lattice evaluation needs a nonnegative matrix");
  if (y_.size() != a_.cols()) throw ModelError("y length does not match the number of columns of A");
  if (bound_.size() != a_.rows()) throw ModelError("b length does not match the number of rows of A");
  for (Count v : bound_) {
    if (v < 0) throw ModelError("lattice bound must be nonnegative");
  }
  auto cert = has_ones_in_rowspan(a_);
  if (!cert) throw ModelError("(1,...,1) is not in the row span of A");
  certificate_ = *cert;
  cert_den_ = common_denominator(certificate_);
  for (const Rat& c : certificate_) cert_num_.push_back(Int(c * Rat(cert_den_)));

  q_ = common_denominator(y_);
  for (const Rat& v : y_) big_y_.push_back(Int(v * Rat(q_)));

  indep_ = independent_rows(a_);
  stride_.assign(indep_.size(), 0);
  std::uint64_t slots = 1;
  for (std::size_t k = indep_.size(); k-- > 0;) {
    stride_[k] = slots;
    const auto radix = static_cast<std::uint64_t>(bound_[indep_[k]]) + 1;
    if (__builtin_mul_overflow(slots, radix, &slots)) throw ModelError("lattice too large to index");
  }
  col_stride_.assign(a_.cols(), 0);
  for (std::size_t j = 0; j < a_.cols(); ++j) {
    for (std::size_t k = 0; k < indep_.size(); ++k) {
      col_stride_[j] += static_cast<std::uint64_t>(a_(indep_[k], j)) * stride_[k];
    }
  }
  dense_ = slots <= kDenseSlotLimit;
  if (dense_) {
    dense_values_.resize(slots);
    dense_set_.assign(slots, 0);
  }
}

std::uint64_t ZCache::key_of(const CountVec& v) const {
  if (v.size() != a_.rows()) throw ModelError("lattice node has wrong length");
  std::uint64_t key = 0;
  for (std::size_t k = 0; k < indep_.size(); ++k) {
    const Count x = v[indep_[k]];
    if (x < 0 || x > bound_[indep_[k]]) throw ModelError("node outside the cached lattice");
    key += static_cast<std::uint64_t>(x) * stride_[k];
  }
  return key;
}

bool ZCache::child_valid(const CountVec& v, std::size_t j) const {
  for (std::size_t i = 0; i < a_.rows(); ++i) {
    if (v[i] < a_(i, j)) return false;
  }
  return true;
}

const Int* ZCache::lookup(std::uint64_t key) const {
  std::shared_lock lock(mutex_);
  if (dense_) return dense_set_[key] ? &dense_values_[key] : nullptr;
  auto it = sparse_values_.find(key);
  return it == sparse_values_.end() ? nullptr : &it->second;
}

const Int& ZCache::store(std::uint64_t key, Int value) {
  std::unique_lock lock(mutex_);
  if (dense_) {
    if (!dense_set_[key]) {
      dense_values_[key] = std::move(value);
      dense_set_[key] = 1;
      ++stored_;
    }
    return dense_values_[key];
  }
  auto [it, inserted] = sparse_values_.try_emplace(key, std::move(value));
  if (inserted) ++stored_;
  return it->second;
}

std::size_t ZCache::size() const {
  std::shared_lock lock(mutex_);
  return stored_;
}

Count ZCache::degree(const CountVec& v) const {
  Int acc(0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) acc += cert_num_[i] * v[i];
  }
  if (acc % cert_den_ != 0) throw InfeasibleError("node has non-integer degree");
  acc /= cert_den_;
  return acc.get_si();
}

const Int& ZCache::path_count(const CountVec& v) {
  const std::uint64_t root = key_of(v);
  if (const Int* hit = lookup(root)) return *hit;

  struct Frame {
    CountVec v;
    std::uint64_t key;
  };
  std::vector<Frame> stack;
  stack.push_back({v, root});
  while (!stack.empty()) {
    const std::size_t top = stack.size() - 1;
    const std::uint64_t key = stack[top].key;
    if (lookup(key)) {
      stack.pop_back();
      continue;
    }
    if (key == 0) {
      store(0, Int(1));
      stack.pop_back();
      continue;
    }
    bool ready = true;
    for (std::size_t j = 0; j < a_.cols(); ++j) {
      if (!child_valid(stack[top].v, j)) continue;
      const std::uint64_t child = key - col_stride_[j];
      if (lookup(child)) continue;
      ready = false;
      CountVec cv = stack[top].v;
      for (std::size_t i = 0; i < cv.size(); ++i) cv[i] -= a_(i, j);
      stack.push_back({std::move(cv), child});
    }
    if (!ready) continue;
    Int sum(0);
    for (std::size_t j = 0; j < a_.cols(); ++j) {
      if (!child_valid(stack[top].v, j)) continue;
      sum += big_y_[j] * *lookup(key - col_stride_[j]);
    }
    store(key, std::move(sum));
    stack.pop_back();
  }
  return *lookup(root);
}

Rat ZCache::z(const CountVec& v) {
  const Int& n = path_count(v);
  if (n == 0) return Rat(0);
  const Count deg = degree(v);
  Int den = factorial(deg);
  Int qp;
  mpz_pow_ui(qp.get_mpz_t(), q_.get_mpz_t(), static_cast<unsigned long>(deg));
  return make_rat(n, den * qp);
}

std::vector<Int> ZCache::scaled_weights(const CountVec& v) {
  std::vector<Int> w(a_.cols(), Int(0));
  key_of(v);
  for (std::size_t j = 0; j < a_.cols(); ++j) {
    if (!child_valid(v, j)) continue;
    CountVec cv = v;
    for (std::size_t i = 0; i < cv.size(); ++i) cv[i] -= a_(i, j);
    w[j] = big_y_[j] * path_count(cv);
  }
  return w;
}

RatVec ZCache::weights(const CountVec& v) {
  const auto scaled = scaled_weights(v);
  RatVec out(scaled.size(), Rat(0));
  const Count deg = degree(v);
  if (deg <= 0) return out;
  // y_j N(v-a_j) / ((deg-1)! Q^(deg-1)) = Y_j N(v-a_j) / ((deg-1)! Q^deg)
  Int qp;
  mpz_pow_ui(qp.get_mpz_t(), q_.get_mpz_t(), static_cast<unsigned long>(deg));
  const Int den = factorial(deg - 1) * qp;
  for (std::size_t j = 0; j < scaled.size(); ++j) {
    if (scaled[j] != 0) out[j] = make_rat(scaled[j], den);
  }
  return out;
}

Rat z_lattice(const IntMatrix& a, const CountVec& b, const RatVec& y) {
  if (!a.nonnegative()) return z_oracle(a, b, y);
  if (b.size() != a.rows()) throw ModelError("b length does not match the number of rows of A");
  if (std::any_of(b.begin(), b.end(), [](Count v) { return v < 0; })) return Rat(0);
  degree_of(a, b);
  ZCache cache(a, y, b);
  return cache.z(b);
}

Rat pmf(const IntMatrix& a, const CountVec& b, const RatVec& y, const CountVec& u, std::optional<Rat> z) {
  if (std::any_of(u.begin(), u.end(), [](Count v) { return v < 0; }) || multiply(a, u) != b) {
    throw InfeasibleError("table is not in the fiber");
  }
  const Rat total = z ? *z : z_lattice(a, b, y);
  return monomial_weight(y, u) / total;
}

RatVec oracle_weights(const IntMatrix& a, const CountVec& v, const RatVec& y) {
  RatVec w(a.cols(), Rat(0));
  for (std::size_t j = 0; j < a.cols(); ++j) {
    CountVec c = v;
    bool ok = true;
    for (std::size_t i = 0; i < c.size(); ++i) {
      c[i] -= a(i, j);
      ok = ok && c[i] >= 0;
    }
    if (ok) w[j] = y[j] * z_oracle(a, c, y);
  }
  return w;
}

RatVec oracle_weights_enumerated(const IntMatrix& a, const CountVec& v, const RatVec& y) {
  RatVec w(a.cols(), Rat(0));
  for (const auto& u : enumerate_fiber(a, v)) {
    const Rat mw = monomial_weight(y, u);
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (u[j] != 0) w[j] += mw * u[j];
    }
  }
  return w;
}

}  // namespace toric
