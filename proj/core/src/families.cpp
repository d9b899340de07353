#include "toric/families.hpp"

#include <algorithm>
#include <numeric>

#include "toric/linalg.hpp"

namespace toric {

// ---- Poisson regression -------------------------------------------------

IntMatrix poisson_A(Count m) {
  if (m < 2) throw ModelError("Poisson regression needs m >= 2");
  IntMatrix a(2, static_cast<std::size_t>(m));
  for (Count j = 0; j < m; ++j) {
    a(0, static_cast<std::size_t>(j)) = j + 1;
    a(1, static_cast<std::size_t>(j)) = 1;
  }
  return a;
}

ToricModel poisson_model(Count m, Count b1, Count b2, RatVec y) {
  ToricModel model = ToricModel::from_matrix(poisson_A(m), {b1, b2}, std::move(y));
  model.family = Family::poisson;
  return model;
}

BellTable::BellTable(Count m, Count b1, Count b2, RatVec y) : m_(m), b1_(b1), b2_(b2), y_(std::move(y)) {
  if (m < 1) throw ModelError("Bell table needs m >= 1");
  if (b1 < 0 || b2 < 0) throw ModelError("Bell table bounds must be nonnegative");
  if (y_.empty()) y_.assign(static_cast<std::size_t>(m), Rat(1));
  if (y_.size() != static_cast<std::size_t>(m)) throw ModelError("y length does not match m");
  std::vector<Rat> x(static_cast<std::size_t>(m) + 1);
  for (Count i = 1; i <= m; ++i) x[static_cast<std::size_t>(i)] = Rat(factorial(i)) * y_[static_cast<std::size_t>(i - 1)];

  const auto cols = static_cast<std::size_t>(b2 + 1);
  std::vector<Rat> bell(static_cast<std::size_t>(b1 + 1) * cols, Rat(0));
  auto at = [&](Count n, Count k) -> Rat& { return bell[static_cast<std::size_t>(n) * cols + static_cast<std::size_t>(k)]; };
  at(0, 0) = 1;
  for (Count n = 1; n <= b1; ++n) {
    for (Count k = 1; k <= std::min(n, b2); ++k) {
      Rat acc(0);
      for (Count i = 1; i <= std::min(m, n - k + 1); ++i) {
        const Rat& prev = at(n - i, k - 1);
        if (prev == 0) continue;
        acc += Rat(binomial(n - 1, i - 1)) * x[static_cast<std::size_t>(i)] * prev;
      }
      at(n, k) = acc;
    }
  }
  z_.resize(bell.size());
  for (Count n = 0; n <= b1; ++n) {
    const Rat nf(factorial(n));
    for (Count k = 0; k <= b2; ++k) z_[static_cast<std::size_t>(n) * cols + static_cast<std::size_t>(k)] = at(n, k) / nf;
  }
}

const Rat& BellTable::z(Count n, Count k) const {
  if (n < 0 || k < 0 || n > b1_ || k > b2_) throw ModelError("Bell table index out of range");
  return z_[static_cast<std::size_t>(n) * static_cast<std::size_t>(b2_ + 1) + static_cast<std::size_t>(k)];
}

RatVec BellTable::weights(Count n, Count k) const {
  RatVec w(static_cast<std::size_t>(m_), Rat(0));
  if (k < 1) return w;
  for (Count i = 1; i <= m_; ++i) {
    if (n - i < 0) break;
    w[static_cast<std::size_t>(i - 1)] = y_[static_cast<std::size_t>(i - 1)] * z(n - i, k - 1);
  }
  return w;
}

Rat lah_closed_form(Count b1, Count b2) {
  if (b2 == 0) return Rat(b1 == 0 ? 1 : 0);
  if (b1 < b2 || b2 < 0) return Rat(0);
  return make_rat(factorial(b1 - 1), factorial(b2 - 1) * factorial(b1 - b2) * factorial(b2));
}

std::vector<Move> poisson_markov_basis(Count m) {
  if (m < 3) throw ModelError("Poisson Markov basis needs m >= 3");
  std::vector<Move> out;
  for (Count i = 1; i <= m; ++i) {
    for (Count j = i + 2; j <= m; ++j) {
      Move z(static_cast<std::size_t>(m), 0);
      z[static_cast<std::size_t>(i - 1)] += 1;
      z[static_cast<std::size_t>(j - 1)] += 1;
      z[static_cast<std::size_t>(i)] -= 1;
      z[static_cast<std::size_t>(j - 2)] -= 1;
      out.push_back(std::move(z));
    }
  }
  return out;
}

// ---- two-way tables -----------------------------------------------------

HierarchicalSpec twoway_spec(Count r1, Count r2) {
  return HierarchicalSpec::make(SimplicialComplex::make(2, {{0}, {1}}), {r1, r2});
}

ToricModel twoway_model(const CountVec& rows, const CountVec& cols, RatVec y) {
  const Count r1 = static_cast<Count>(rows.size());
  const Count r2 = static_cast<Count>(cols.size());
  CountVec b = rows;
  b.insert(b.end(), cols.begin(), cols.end());
  const Count n1 = std::accumulate(rows.begin(), rows.end(), Count{0});
  const Count n2 = std::accumulate(cols.begin(), cols.end(), Count{0});
  if (n1 != n2) throw ModelError("row and column totals differ");
  ToricModel model = ToricModel::from_hierarchical(twoway_spec(r1, r2), std::move(b), std::move(y));
  model.family = Family::twoway;
  return model;
}

ToricModel twoway_model_from_table(Count r1, Count r2, const CountVec& table, RatVec y) {
  ToricModel model = ToricModel::from_table(twoway_spec(r1, r2), table, std::move(y));
  model.family = Family::twoway;
  return model;
}

RatVec twoway_y_from_odds(Count r1, Count r2, const RatVec& z) {
  if (z.size() != static_cast<std::size_t>(r1 * r2)) throw ModelError("odds matrix has wrong size");
  for (Count i = 0; i < r1; ++i) {
    for (Count j = 0; j < r2; ++j) {
      const Rat& v = z[static_cast<std::size_t>(i * r2 + j)];
      if (v <= 0) throw ModelError("odds ratios must be positive");
      if ((i == r1 - 1 || j == r2 - 1) && v != 1) throw ModelError("last row and column of the odds matrix must be 1");
    }
  }
  return z;
}

Rat twoway_z_indep(const CountVec& rows, const CountVec& cols) {
  const Count n = std::accumulate(rows.begin(), rows.end(), Count{0});
  if (n != std::accumulate(cols.begin(), cols.end(), Count{0})) throw ModelError("row and column totals differ");
  Int den(1);
  for (Count v : rows) den *= factorial(v);
  for (Count v : cols) den *= factorial(v);
  return make_rat(factorial(n), den);
}

std::vector<Move> twoway_markov_basis(Count r1, Count r2) {
  if (r1 < 2 || r2 < 2) throw ModelError("two-way basis needs r1, r2 >= 2");
  std::vector<Move> out;
  auto cell = [r2](Count i, Count j) { return static_cast<std::size_t>(i * r2 + j); };
  for (Count i1 = 0; i1 < r1; ++i1) {
    for (Count i2 = i1 + 1; i2 < r1; ++i2) {
      for (Count j1 = 0; j1 < r2; ++j1) {
        for (Count j2 = j1 + 1; j2 < r2; ++j2) {
          Move z(static_cast<std::size_t>(r1 * r2), 0);
          z[cell(i1, j1)] = 1;
          z[cell(i2, j2)] = 1;
          z[cell(i1, j2)] = -1;
          z[cell(i2, j1)] = -1;
          out.push_back(std::move(z));
        }
      }
    }
  }
  return out;
}

Int twoway_volume(Count r1, Count r2) {
  if (r1 < 2 || r2 < 2) throw ModelError("volume needs r1, r2 >= 2");
  return binomial(r1 + r2 - 2, r1 - 1);
}

TwowayThyp twoway_thyp_params(const CountVec& rows, const CountVec& cols) {
  if (rows.empty() || cols.empty()) throw ModelError("empty margins");
  TwowayThyp t;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) t.alpha.push_back(-rows[i]);
  for (std::size_t j = 0; j + 1 < cols.size(); ++j) t.beta.push_back(-cols[j]);
  const Count n = std::accumulate(rows.begin(), rows.end(), Count{0});
  t.gamma = rows.back() + cols.back() - n + 1;
  return t;
}

// ---- binary models without the l-way interaction -----------------------

HierarchicalSpec nonlway_spec(int l) {
  if (l < 2 || l > 8) throw ModelError("non-l-way models are supported for 2 <= l <= 8");
  std::vector<VertexSet> facets;
  // (l-1)-subsets in lexicographic order: drop vertex l, then l-1, ...
  for (int drop = l - 1; drop >= 0; --drop) {
    VertexSet f;
    for (int v = 0; v < l; ++v) {
      if (v != drop) f.push_back(static_cast<Vertex>(v));
    }
    facets.push_back(std::move(f));
  }
  return HierarchicalSpec::make(SimplicialComplex::make(static_cast<std::size_t>(l), std::move(facets)),
                                std::vector<Count>(static_cast<std::size_t>(l), 2));
}

ToricModel nonlway_model(int l, const CountVec& b, RatVec y) {
  ToricModel model = ToricModel::from_hierarchical(nonlway_spec(l), b, std::move(y));
  model.family = Family::non_interaction_binary;
  return model;
}

namespace {

int twos_parity_sign(std::size_t cell, int l) {
  // Cell index bits: bit set means level 2.
  return __builtin_popcountll(static_cast<unsigned long long>(cell) & ((1ull << l) - 1)) % 2 == 0 ? 1 : -1;
}

}  // namespace

KFParams nonlway_parameterize(int l, const CountVec& b, const RatVec& y_in, std::size_t base_cell) {
  const HierarchicalSpec spec = nonlway_spec(l);
  const ConfigMatrix config = build_configuration(spec);
  const IntMatrix& a = config.entries;
  const std::size_t m = a.cols();
  if (b.size() != a.rows()) throw ModelError("margin vector has wrong length");
  if (base_cell >= m) throw ModelError("base cell out of range");
  RatVec y = y_in.empty() ? RatVec(m, Rat(1)) : y_in;
  if (y.size() != m) throw ModelError("y has wrong length");

  std::vector<RatVec> sys(a.rows() + 1, RatVec(m, Rat(0)));
  RatVec rhs(a.rows() + 1, Rat(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < m; ++j) sys[i][j] = a(i, j);
    rhs[i] = static_cast<long>(b[i]);
  }
  sys[a.rows()][base_cell] = 1;
  auto sol = solve_linear(std::move(sys), std::move(rhs));
  if (!sol) throw InfeasibleError("margins are inconsistent");

  KFParams p;
  p.l = l;
  p.k = m / 2;
  p.base_cell = base_cell;
  const int base_sign = twos_parity_sign(base_cell, l);
  for (std::size_t j = 0; j < m; ++j) {
    const Rat& v = (*sol)[j];
    if (v.get_den() != 1) throw InfeasibleError("margins are not in the lattice of A");
    p.alpha.push_back(v.get_num().get_si());
    p.epsilon.push_back(twos_parity_sign(j, l) * base_sign);
  }
  p.d_cells.push_back(base_cell);
  for (std::size_t j = 0; j < m; ++j) {
    if (p.epsilon[j] < 0) {
      p.c_cells.push_back(j);
    } else if (j != base_cell) {
      p.d_cells.push_back(j);
    }
  }
  Rat num(1), den(1);
  for (std::size_t j : p.c_cells) {
    p.c.push_back(-p.alpha[j]);
    den *= y[j];
  }
  for (std::size_t j : p.d_cells) {
    p.d.push_back(p.alpha[j] + 1);
    num *= y[j];
  }
  p.z = num / den;
  Int fact(1);
  p.y_power = 1;
  bool nonneg = true;
  for (std::size_t j = 0; j < m; ++j) {
    if (p.alpha[j] < 0) {
      nonneg = false;
      continue;
    }
    fact *= factorial(p.alpha[j]);
  }
  for (std::size_t j = 0; j < m; ++j) p.y_power *= pow(y[j], p.alpha[j]);
  // The prefactor is only meaningful for the series form, where alpha >= 0.
  p.prefactor = nonneg ? make_rat(Int(1), fact) : Rat(0);
  return p;
}

KFParams nonlway_params(int l, const CountVec& b, const RatVec& y) {
  KFParams first = nonlway_parameterize(l, b, y, 0);
  std::size_t best = 0;
  for (std::size_t j = 0; j < first.alpha.size(); ++j) {
    if (first.epsilon[j] > 0 && first.alpha[j] < first.alpha[best]) best = j;
  }
  KFParams p = best == 0 ? std::move(first) : nonlway_parameterize(l, b, y, best);
  for (Count v : p.alpha) {
    if (v < 0) throw InfeasibleError("fiber is empty for these margins");
  }
  return p;
}

Rat kf_eval(const RatVec& c, const RatVec& d, const Rat& z, int power) {
  if (power < 0) throw ModelError("theta power must be nonnegative");
  Count terms = -1;
  for (const Rat& ci : c) {
    if (ci <= 0 && ci.get_den() == 1) {
      const Count n = -ci.get_num().get_si();
      terms = terms < 0 ? n : std::min(terms, n);
    }
  }
  if (terms < 0) throw ModelError("series does not terminate: no nonpositive integer upper parameter");
  Rat term(1), acc(0);
  for (Count u = 0; u <= terms; ++u) {
    if (power == 0) {
      acc += term;
    } else if (u != 0) {
      acc += term * pow(Rat(u), power);
    }
    if (u == terms) break;
    Rat num(1), den(1);
    for (const Rat& ci : c) num *= ci + u;
    if (num == 0) break;
    for (const Rat& di : d) den *= di + u;
    if (den == 0) throw ModelError("lower parameter hits a pole inside the terminating range");
    term *= num * z / den;
  }
  return acc;
}

Rat kf_eval(const CountVec& c, const CountVec& d, const Rat& z, int power) {
  RatVec rc, rd;
  for (Count v : c) rc.emplace_back(static_cast<long>(v));
  for (Count v : d) rd.emplace_back(static_cast<long>(v));
  return kf_eval(rc, rd, z, power);
}

namespace {

// Coefficients of prod (t + roots_i), lowest degree first.
RatVec monic_expand(const RatVec& roots) {
  RatVec p{Rat(1)};
  for (const Rat& r : roots) {
    RatVec next(p.size() + 1, Rat(0));
    for (std::size_t i = 0; i < p.size(); ++i) {
      next[i] += p[i] * r;
      next[i + 1] += p[i];
    }
    p = std::move(next);
  }
  return p;
}

}  // namespace

ThetaReduction theta_reduction(const RatVec& c, const RatVec& d, const Rat& z) {
  if (c.size() != d.size() || c.empty()) throw ModelError("theta_reduction needs equally many c and d");
  const std::size_t k = c.size();
  RatVec dm1;
  for (const Rat& v : d) dm1.push_back(v - 1);
  const RatVec p1 = monic_expand(dm1);
  const RatVec p2 = monic_expand(c);
  RatVec p(k + 1);
  for (std::size_t i = 0; i <= k; ++i) p[i] = p1[i] - z * p2[i];
  ThetaReduction r;
  std::size_t top = k;
  if (p[top] == 0) {
    top = k - 1;
    if (p[top] == 0) throw ModelError("z = 1 and sum(d - c) = k: no reduction");
  }
  r.order = top;
  r.coeffs.resize(top);
  for (std::size_t i = 0; i < top; ++i) r.coeffs[i] = -p[i] / p[top];
  return r;
}

Move nonlway_markov_basis(int l) {
  if (l < 2 || l > 8) throw ModelError("non-l-way models are supported for 2 <= l <= 8");
  const std::size_t m = std::size_t{1} << l;
  Move z(m);
  for (std::size_t j = 0; j < m; ++j) z[j] = twos_parity_sign(j, l);
  return z;
}

// ---- structural family detection ---------------------------------------

bool is_twoway_model(const ToricModel& model) {
  return model.spec && model.spec->complex.facets == std::vector<VertexSet>{{0}, {1}};
}

bool is_poisson_model(const ToricModel& model) {
  const std::size_t m = model.cells();
  return model.rows() == 2 && m >= 2 && model.a == poisson_A(static_cast<Count>(m));
}

int nonlway_order(const ToricModel& model) {
  if (!model.spec) return 0;
  const auto& s = *model.spec;
  const int l = static_cast<int>(s.complex.vertex_count);
  if (l < 2 || l > 8) return 0;
  if (!std::all_of(s.levels.begin(), s.levels.end(), [](Count r) { return r == 2; })) return 0;
  return s.complex.facets == nonlway_spec(l).complex.facets ? l : 0;
}

Rat nonlway_z(const RatVec& y) {
  Rat num(1), den(1);
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (__builtin_popcountll(j) % 2 == 0) {
      num *= y[j];
    } else {
      den *= y[j];
    }
  }
  return num / den;
}

Family detect_family(const ToricModel& model) {
  if (model.family != Family::generic) return model.family;
  if (is_twoway_model(model)) return Family::twoway;
  if (is_poisson_model(model)) return Family::poisson;
  if (nonlway_order(model) != 0) return Family::non_interaction_binary;
  return Family::generic;
}

// ---- 3x3x2 ------------------------------------------------------------

HierarchicalSpec spec_332() {
  return HierarchicalSpec::make(SimplicialComplex::make(3, {{0, 1}, {0, 2}, {1, 2}}), {3, 3, 2});
}

namespace {

std::size_t cell332(int i, int j, int k) { return static_cast<std::size_t>((i - 1) * 6 + (j - 1) * 2 + (k - 1)); }

struct Margins332 {
  const CountVec& b;
  Count m12(int i, int j) const { return b[static_cast<std::size_t>((i - 1) * 3 + (j - 1))]; }
  Count m13(int i, int k) const { return b[static_cast<std::size_t>(9 + (i - 1) * 2 + (k - 1))]; }
  Count m23(int j, int k) const { return b[static_cast<std::size_t>(15 + (j - 1) * 2 + (k - 1))]; }
};

CountVec table_332(const Margins332& g, Count a, Count bb, Count c, Count d) {
  CountVec u(18);
  u[cell332(1, 1, 1)] = a;
  u[cell332(1, 2, 1)] = bb;
  u[cell332(2, 1, 1)] = c;
  u[cell332(2, 2, 1)] = d;
  u[cell332(1, 1, 2)] = g.m12(1, 1) - a;
  u[cell332(1, 2, 2)] = g.m12(1, 2) - bb;
  u[cell332(2, 1, 2)] = g.m12(2, 1) - c;
  u[cell332(2, 2, 2)] = g.m12(2, 2) - d;
  u[cell332(1, 3, 1)] = g.m13(1, 1) - a - bb;
  u[cell332(2, 3, 1)] = g.m13(2, 1) - c - d;
  u[cell332(3, 1, 1)] = g.m23(1, 1) - a - c;
  u[cell332(3, 2, 1)] = g.m23(2, 1) - bb - d;
  u[cell332(3, 3, 1)] = g.m13(3, 1) - g.m23(1, 1) - g.m23(2, 1) + a + bb + c + d;
  u[cell332(1, 3, 2)] = g.m12(1, 3) - g.m13(1, 1) + a + bb;
  u[cell332(2, 3, 2)] = g.m12(2, 3) - g.m13(2, 1) + c + d;
  u[cell332(3, 1, 2)] = g.m12(3, 1) - g.m23(1, 1) + a + c;
  u[cell332(3, 2, 2)] = g.m12(3, 2) - g.m23(2, 1) + bb + d;
  u[cell332(3, 3, 2)] = g.m12(3, 3) - g.m13(3, 1) + g.m23(1, 1) + g.m23(2, 1) - a - bb - c - d;
  return u;
}

void check_332(const CountVec& b, const RatVec& y) {
  if (b.size() != 21) throw ModelError("3x3x2 margins must have 21 entries");
  if (y.size() != 18) throw ModelError("3x3x2 weights must have 18 entries");
}

}  // namespace

RatVec z_332(const RatVec& y) {
  if (y.size() != 18) throw ModelError("3x3x2 weights must have 18 entries");
  auto Y = [&](int i, int j, int k) -> const Rat& { return y[cell332(i, j, k)]; };
  RatVec z;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      z.push_back(Y(i, j, 1) * Y(3, 3, 1) * Y(i, 3, 2) * Y(3, j, 2) /
                  (Y(i, 3, 1) * Y(3, j, 1) * Y(i, j, 2) * Y(3, 3, 2)));
    }
  }
  return z;
}

Rat series_332_monomial(const CountVec& b, const RatVec& y) {
  check_332(b, y);
  const CountVec base = table_332(Margins332{b}, 0, 0, 0, 0);
  Rat out(1);
  for (std::size_t j = 0; j < 18; ++j) out *= pow(y[j], base[j]);
  return out;
}

Rat series_332_eval(const CountVec& b, const RatVec& y) {
  check_332(b, y);
  const Margins332 g{b};
  const IntMatrix a = build_configuration(spec_332()).entries;
  const RatVec z = z_332(y);
  auto tot1 = [&](int i) { return g.m12(i, 1) + g.m12(i, 2) + g.m12(i, 3); };
  auto tot2 = [&](int j) { return g.m12(1, j) + g.m12(2, j) + g.m12(3, j); };
  auto tot3 = [&](int k) { return g.m13(1, k) + g.m13(2, k) + g.m13(3, k); };
  const Count n = tot1(1) + tot1(2) + tot1(3);
  const Count g4 = -n + tot1(3) + tot2(3) + tot3(2) - g.m12(3, 3) - g.m13(3, 2) - g.m23(3, 2);
  auto poch = [](Count a0, Count len) { return pochhammer(Rat(static_cast<long>(a0)), len); };

  Rat sum(0);
  const Count hi_a = std::min(g.m12(1, 1), g.m13(1, 1));
  const Count hi_b = std::min(g.m12(1, 2), g.m13(1, 1));
  const Count hi_c = std::min(g.m12(2, 1), g.m13(2, 1));
  const Count hi_d = std::min(g.m12(2, 2), g.m13(2, 1));
  for (Count fa = 0; fa <= hi_a; ++fa) {
    for (Count fb = 0; fb <= hi_b; ++fb) {
      for (Count fc = 0; fc <= hi_c; ++fc) {
        for (Count fd = 0; fd <= hi_d; ++fd) {
          const CountVec u = table_332(g, fa, fb, fc, fd);
          if (std::any_of(u.begin(), u.end(), [](Count v) { return v < 0; })) continue;
          if (multiply(a, u) != b) continue;
          auto U = [&](int i, int j, int k) { return u[cell332(i, j, k)]; };
          Rat num(1), den(1);
          for (int i = 1; i <= 2; ++i) {
            for (int j = 1; j <= 2; ++j) num *= poch(-g.m12(i, j), g.m12(i, j) - U(i, j, 2));
          }
          for (int j = 1; j <= 2; ++j) num *= poch(-g.m23(j, 1), g.m23(j, 1) - U(3, j, 1));
          for (int i = 1; i <= 2; ++i) num *= poch(-g.m13(i, 1), g.m13(i, 1) - U(i, 3, 1));
          const Count s4 = fa + fb + fc + fd;
          num *= poch(g4, s4);
          for (int i = 1; i <= 2; ++i) {
            den *= poch(-tot1(i) + g.m12(i, 3) + g.m13(i, 2) + 1, U(i, 1, 1) + U(i, 2, 1));
          }
          for (int j = 1; j <= 2; ++j) {
            den *= poch(-tot2(j) + g.m12(3, j) + g.m23(j, 2) + 1, U(1, j, 1) + U(2, j, 1));
          }
          den *= poch(-tot3(1) + g.m13(3, 1) + g.m23(3, 1) + 1, s4);
          if (den == 0) throw ModelError("series has a pole; the zero base table is not in the fiber");
          Rat term = num / den;
          const Count f[4] = {fa, fb, fc, fd};
          for (int q = 0; q < 4; ++q) term *= pow(z[static_cast<std::size_t>(q)], f[q]) / Rat(factorial(f[q]));
          sum += term;
        }
      }
    }
  }
  return sum;
}

}  // namespace toric
