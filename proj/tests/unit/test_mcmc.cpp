#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "oracles.hpp"
#include "toric/mcmc.hpp"
#include "toric/zeval.hpp"

using namespace toric;

TEST_CASE("Metropolis ratio with unit weights is a factorial ratio") {
  const CountVec u{2, 1, 0, 3};
  const Move z{1, -1, -1, 1};
  // u!/(u+w)! = (2! 1! 0! 3!) / (1! 2! 1! 2!)
  const Move w{-1, 1, 1, -1};
  CHECK(metropolis_ratio(u, w, RatVec(4, Rat(1))) == Rat(3));
  CHECK(metropolis_ratio(u, z, RatVec(4, Rat(1))) == Rat(0));  // leaves the orthant
  const RatVec y{Rat(2), Rat(1), Rat(1), Rat(1, 3)};
  CHECK(metropolis_ratio(u, w, y) == Rat(3) * Rat(1, 2) * Rat(3));
}

TEST_CASE("steps outside the orthant stay put") {
  Rng rng(1);
  const std::vector<Move> basis{{1, -1, -1, 1}};
  const CountVec u{0, 0, 0, 5};
  for (int i = 0; i < 20; ++i) {
    bool acc = true;
    const CountVec v = metropolis_step(u, basis, RatVec(4, Rat(1)), rng, &acc);
    if (!acc) CHECK(v == u);
  }
}

TEST_CASE("chains are reproducible and stay in the fiber") {
  const auto m = twoway_model({3, 2, 2}, {2, 3, 2}, RatVec{Rat(1, 2), Rat(3), Rat(1), Rat(2), Rat(1, 3), Rat(1), Rat(1),
                                                           Rat(1), Rat(1)});
  const auto basis = builtin_basis(m);
  const CountVec u0 = *first_fiber_point(m.a, m.b);
  ChainOptions o;
  o.steps = 2000;
  o.burnin = 100;
  o.seed = 4;
  const auto t1 = run_chain(m, basis, u0, o);
  const auto t2 = run_chain(m, basis, u0, o);
  CHECK(t1.stat_series == t2.stat_series);
  CHECK(t1.states.size() == 1900);
  CHECK(t1.statistic == Statistic::pearson);
  for (const auto& u : t1.states) CHECK(multiply(m.a, u) == m.b);
  CHECK(t1.acceptance_rate > 0.0);
  CHECK_THROWS_AS(run_chain(m, basis, CountVec(9, 0), o), InfeasibleError);
  o.burnin = 3000;
  CHECK_THROWS_AS(run_chain(m, basis, u0, o), ModelError);
}

TEST_CASE("chain visits match the exact distribution") {
  const auto m = poisson_model(4, 10, 4, RatVec{Rat(1), Rat(2), Rat(1, 2), Rat(1)});
  const Fiber fiber = enumerate_fiber(m.a, m.b);
  const Rat z = z_oracle(m.a, m.b, m.y);
  std::map<CountVec, double> visits;
  ChainOptions o;
  o.steps = 200000;
  o.burnin = 1000;
  o.seed = 11;
  const auto t = run_chain(m, builtin_basis(m), fiber.front(), o);
  for (const auto& u : t.states) visits[u] += 1.0;
  double tv = 0.0;
  for (const auto& u : fiber) tv += std::abs(visits[u] / static_cast<double>(t.states.size()) - pmf(m.a, m.b, m.y, u, z).get_d());
  CHECK(tv / 2 < 0.03);
}

TEST_CASE("Pearson statistic") {
  // rows (3,3), cols (3,3), expected 1.5 everywhere
  CHECK(pearson_x2(2, 2, {3, 0, 0, 3}) == doctest::Approx(6.0));
  CHECK(pearson_x2(2, 2, {0, 0, 0, 0}) == 0.0);
  CHECK(log_kernel_stat(RatVec(2, Rat(1)), {2, 3}) == doctest::Approx(2 * std::log(12.0)));
}

TEST_CASE("effective sample size") {
  std::vector<double> constant(100, 2.5);
  CHECK(ess(constant).ess == 100.0);
  CHECK_THROWS_AS(ess(std::vector<double>(5, 1.0)), ModelError);

  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  std::vector<double> iid(20000);
  for (auto& x : iid) x = g(rng);
  const auto r = ess(iid);
  CHECK(r.ess > 0.8 * 20000);
  CHECK(r.ess <= 20000);
  CHECK(r.cutoff >= 1);

  // AR(1) with rho = 0.6: N (1 - rho) / (1 + rho) = N / 4
  std::vector<double> ar(50000);
  double x = 0.0;
  for (auto& v : ar) v = x = 0.6 * x + g(rng);
  CHECK(ess(ar).ess == doctest::Approx(50000.0 / 4).epsilon(0.2));
}

TEST_CASE("built-in bases") {
  CHECK(builtin_basis(twoway_model({1, 2}, {2, 1})).size() == 1);
  CHECK(builtin_basis(poisson_model(5, 30, 10)).size() == 6);
  const auto g = ToricModel::from_hierarchical(HierarchicalSpec::binary("[12][13]"), CountVec(8, 1));
  CHECK_THROWS_AS(builtin_basis(g), ModelError);
}
