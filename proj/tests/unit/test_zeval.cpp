#include <doctest.h>

#include <random>
#include <thread>

#include "oracles.hpp"
#include "toric/families.hpp"
#include "toric/zeval.hpp"

using namespace toric;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t d, std::size_t m) {
  // first row all ones keeps (1,...,1) in the row span
  std::uniform_int_distribution<Count> e(0, 2);
  IntMatrix a(d, m);
  for (std::size_t j = 0; j < m; ++j) {
    a(0, j) = 1;
    for (std::size_t i = 1; i < d; ++i) a(i, j) = e(rng);
  }
  return a;
}

}  // namespace

TEST_CASE("fiber enumeration matches the odometer") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    const IntMatrix a = random_matrix(rng, 2 + rep % 2, 4);
    const CountVec u = oracle::random_table(4, 4, rng);
    const CountVec b = oracle::apply(a, u);
    auto fiber = enumerate_fiber(a, b);
    auto brute = oracle::odometer_fiber(a, b, 4);
    std::sort(fiber.begin(), fiber.end());
    CHECK(fiber == brute);
    CHECK(count_fiber(a, b, 1000) == brute.size());
    CHECK(first_fiber_point(a, b) == brute.front());
    const RatVec y = oracle::random_weights(4, rng);
    CHECK(z_oracle(a, b, y) == oracle::odometer_z(a, b, y, 4));
  }
}

TEST_CASE("empty and trivial fibers") {
  const IntMatrix a = IntMatrix::from_rows({{1, 1, 1}, {0, 2, 4}});
  CHECK(z_oracle(a, {0, 0}, RatVec(3, Rat(1))) == 1);
  CHECK(z_lattice(a, {0, 0}, RatVec(3, Rat(1))) == 1);
  CHECK(z_oracle(a, {2, 1}, RatVec(3, Rat(1))) == 0);  // odd second row
  CHECK(z_lattice(a, {2, 1}, RatVec(3, Rat(1))) == 0);
  CHECK(count_fiber(a, {2, 1}, 10) == 0u);
  CHECK_FALSE(first_fiber_point(a, {2, 1}));
  CHECK(z_lattice(a, {-1, 0}, RatVec(3, Rat(1))) == 0);
  CHECK_FALSE(count_fiber(a, {40, 80}, 5));
}

TEST_CASE("negative or zero columns are rejected") {
  const IntMatrix neg = IntMatrix::from_rows({{1, 1, 1}, {1, 0, -1}});
  CHECK_THROWS_AS(z_lattice(neg, {3, 0}, RatVec(3, Rat(1))), ModelError);
  CHECK_THROWS_AS(ZCache(neg, RatVec(3, Rat(1)), {3, 0}), ModelError);
  const IntMatrix zero = IntMatrix::from_rows({{1, 0}});
  CHECK_THROWS_AS(enumerate_fiber(zero, {1}), ModelError);
}

TEST_CASE("lattice cache agrees with enumeration at every node") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 10; ++rep) {
    const IntMatrix a = random_matrix(rng, 3, 5);
    const CountVec u = oracle::random_table(5, 5, rng);
    const CountVec b = oracle::apply(a, u);
    const RatVec y = oracle::random_weights(5, rng);
    ZCache cache(a, y, b);
    CHECK(cache.z(b) == z_oracle(a, b, y));
    const RatVec w = cache.weights(b);
    CHECK(w == oracle_weights(a, b, y));
    CHECK(w == oracle_weights_enumerated(a, b, y));
    // sum_j y_j Z(b - a_j) = deg(b) Z(b)
    Rat sum(0);
    for (const auto& x : w) sum += x;
    CHECK(sum == Rat(cache.degree(b)) * cache.z(b));
    const auto scaled = cache.scaled_weights(b);
    for (std::size_t j = 0; j < w.size(); ++j) {
      const Count deg = cache.degree(b);
      Rat expect = w[j] * Rat(factorial(deg - 1));
      for (Count k = 0; k < deg; ++k) expect *= Rat(cache.scale());
      CHECK(Rat(scaled[j]) == expect);
    }
  }
}

TEST_CASE("sparse cache storage gives the same values") {
  const IntMatrix a = poisson_A(5);
  const RatVec y{Rat(1), Rat(1, 2), Rat(3), Rat(1), Rat(2, 5)};
  ZCache dense(a, y, {20, 8});
  ZCache sparse(a, y, {5000, 2000});
  CHECK(dense.dense());
  CHECK_FALSE(sparse.dense());
  for (Count b1 = 0; b1 <= 20; b1 += 3) {
    for (Count b2 = 0; b2 <= 8; ++b2) CHECK(dense.z({b1, b2}) == sparse.z({b1, b2}));
  }
  CHECK(dense.z({12, 5}) == z_oracle(a, {12, 5}, y));
}

TEST_CASE("concurrent lookups are consistent") {
  const IntMatrix a = poisson_A(5);
  const RatVec y(5, Rat(1));
  ZCache cache(a, y, {60, 25});
  std::vector<Rat> got(8);
  std::vector<std::thread> ts;
  for (int t = 0; t < 8; ++t) {
    ts.emplace_back([&, t] { got[static_cast<std::size_t>(t)] = cache.z({60 - t, 25 - t}); });
  }
  for (auto& th : ts) th.join();
  ZCache fresh(a, y, {60, 25});
  for (int t = 0; t < 8; ++t) CHECK(got[static_cast<std::size_t>(t)] == fresh.z({60 - t, 25 - t}));
}

TEST_CASE("pmf sums to one over the fiber") {
  const IntMatrix a = IntMatrix::from_rows({{1, 1, 1, 1}, {0, 1, 2, 3}});
  const RatVec y{Rat(1), Rat(2), Rat(1, 3), Rat(5)};
  const CountVec b{4, 6};
  Rat total(0);
  for (const auto& u : enumerate_fiber(a, b)) total += pmf(a, b, y, u);
  CHECK(total == 1);
  CHECK_THROWS_AS(pmf(a, b, y, {4, 0, 0, 0}), InfeasibleError);
}
