#pragma once

// Metropolis chains over a Markov basis and effective sample sizes.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "toric/families.hpp"
#include "toric/model.hpp"
#include "toric/sampler.hpp"

namespace toric {

enum class Statistic { pearson, log_kernel };

struct ChainTrace {
  std::vector<CountVec> states;     // after burn-in; empty unless kept
  std::vector<double> stat_series;  // default statistic per kept step
  std::vector<double> log_kernel_series;
  Statistic statistic = Statistic::log_kernel;
  double acceptance_rate = 0.0;
  std::uint64_t seed = 0;
};

/// Exact Metropolis ratio (y^(u+z)/(u+z)!) / (y^u/u!) for a move z.
Rat metropolis_ratio(const CountVec& u, const Move& z, const RatVec& y);

/// One step: a uniform choice over basis x {+1, -1}; stays when the move
/// leaves the nonnegative orthant, otherwise accepts with min(1, ratio)
/// against a 53-bit uniform.
CountVec metropolis_step(const CountVec& u, const std::vector<Move>& basis, const RatVec& y, Rng& rng,
                         bool* accepted = nullptr);

struct ChainOptions {
  std::size_t steps = 0;
  std::size_t burnin = 0;
  std::uint64_t seed = 0;
  bool keep_states = true;
};

/// Throws InfeasibleError if u0 is not in the fiber of the model.
ChainTrace run_chain(const ToricModel& model, const std::vector<Move>& basis, const CountVec& u0,
                     const ChainOptions& options);

/// Pearson X^2 against u_i. u_.j / n for two-way models, otherwise
/// -2 log(y^u/u!).
Statistic default_statistic(const ToricModel& model);
double chi_square_stat(const ToricModel& model, const CountVec& u);
double pearson_x2(std::size_t r1, std::size_t r2, const CountVec& u);
double log_kernel_stat(const RatVec& y, const CountVec& u);

struct EssReport {
  std::size_t n = 0;
  std::vector<double> autocorrelations;  // rho_1 .. rho_cutoff
  std::size_t cutoff = 0;                // first lag with rho < 0.05
  double ess = 0.0;
};

/// N / (1 + 2 sum_{t < cutoff} rho_t) with the biased (1/N) autocovariance.
/// Needs at least 10 values; a constant series gives N.
EssReport ess(std::span<const double> series, double threshold = 0.05);

/// Built-in Markov basis for the model's family, if there is one.
std::vector<Move> builtin_basis(const ToricModel& model);

}  // namespace toric
