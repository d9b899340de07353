#include "toric/mcmc.hpp"

#include <algorithm>
#include <cmath>

namespace toric {

Rat metropolis_ratio(const CountVec& u, const Move& z, const RatVec& y) {
  Rat r(1);
  Int num(1), den(1);
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (z[j] == 0) continue;
    r *= pow(y[j], z[j]);
    if (z[j] > 0) {
      for (Count k = 1; k <= z[j]; ++k) den *= u[j] + k;
    } else {
      for (Count k = 0; k < -z[j]; ++k) num *= u[j] - k;
    }
  }
  return r * make_rat(num, den);
}

CountVec metropolis_step(const CountVec& u, const std::vector<Move>& basis, const RatVec& y, Rng& rng,
                         bool* accepted) {
  if (accepted) *accepted = false;
  if (basis.empty()) return u;
  const std::uint64_t pick = uniform_below(rng, 2 * basis.size());
  const Move& base = basis[pick / 2];
  Move z = base;
  if (pick % 2 == 1) {
    for (auto& v : z) v = -v;
  }
  CountVec next = u;
  for (std::size_t j = 0; j < u.size(); ++j) {
    next[j] += z[j];
    if (next[j] < 0) return u;
  }
  const Rat ratio = metropolis_ratio(u, z, y);
  if (ratio < 1) {
    // accept iff k / 2^53 < ratio
    const Int k(static_cast<unsigned long>(uniform_53(rng)));
    Int scale(1);
    scale <<= 53;
    if (!(k * ratio.get_den() < ratio.get_num() * scale)) return u;
  }
  if (accepted) *accepted = true;
  return next;
}

Statistic default_statistic(const ToricModel& model) {
  return is_twoway_model(model) ? Statistic::pearson : Statistic::log_kernel;
}

double pearson_x2(std::size_t r1, std::size_t r2, const CountVec& u) {
  if (u.size() != r1 * r2) throw ModelError("table does not match the two-way shape");
  std::vector<double> rows(r1, 0.0), cols(r2, 0.0);
  double n = 0.0;
  for (std::size_t i = 0; i < r1; ++i) {
    for (std::size_t j = 0; j < r2; ++j) {
      const double v = static_cast<double>(u[i * r2 + j]);
      rows[i] += v;
      cols[j] += v;
      n += v;
    }
  }
  if (n == 0.0) return 0.0;
  double x2 = 0.0;
  for (std::size_t i = 0; i < r1; ++i) {
    for (std::size_t j = 0; j < r2; ++j) {
      const double e = rows[i] * cols[j] / n;
      if (e == 0.0) continue;
      const double diff = static_cast<double>(u[i * r2 + j]) - e;
      x2 += diff * diff / e;
    }
  }
  return x2;
}

double log_kernel_stat(const RatVec& y, const CountVec& u) {
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double uj = static_cast<double>(u[j]);
    if (y[j] != 1) acc += uj * std::log(y[j].get_d());
    acc -= std::lgamma(uj + 1.0);
  }
  return -2.0 * acc;
}

double chi_square_stat(const ToricModel& model, const CountVec& u) {
  if (default_statistic(model) == Statistic::pearson) {
    return pearson_x2(static_cast<std::size_t>(model.spec->levels[0]), static_cast<std::size_t>(model.spec->levels[1]), u);
  }
  return log_kernel_stat(model.y, u);
}

ChainTrace run_chain(const ToricModel& model, const std::vector<Move>& basis, const CountVec& u0,
                     const ChainOptions& options) {
  if (u0.size() != model.cells() || std::any_of(u0.begin(), u0.end(), [](Count v) { return v < 0; }) ||
      multiply(model.a, u0) != model.b) {
    throw InfeasibleError("initial table is not in the fiber");
  }
  for (const auto& z : basis) {
    if (z.size() != model.cells()) throw ModelError("basis move has wrong length");
  }
  if (options.burnin > options.steps) throw ModelError("burn-in exceeds the number of steps");
  ChainTrace trace;
  trace.statistic = default_statistic(model);
  trace.seed = options.seed;
  Rng rng(options.seed);
  CountVec u = u0;
  std::size_t accepted_count = 0;
  for (std::size_t step = 0; step < options.steps; ++step) {
    bool accepted = false;
    u = metropolis_step(u, basis, model.y, rng, &accepted);
    if (accepted) ++accepted_count;
    if (step < options.burnin) continue;
    const double lk = log_kernel_stat(model.y, u);
    trace.log_kernel_series.push_back(lk);
    trace.stat_series.push_back(trace.statistic == Statistic::pearson ? chi_square_stat(model, u) : lk);
    if (options.keep_states) trace.states.push_back(u);
  }
  trace.acceptance_rate = options.steps == 0 ? 0.0 : static_cast<double>(accepted_count) / static_cast<double>(options.steps);
  return trace;
}

EssReport ess(std::span<const double> series, double threshold) {
  const std::size_t n = series.size();
  if (n < 10) throw ModelError("ESS needs at least 10 values");
  EssReport r;
  r.n = n;
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double v : series) c0 += (v - mean) * (v - mean);
  c0 /= static_cast<double>(n);
  if (c0 == 0.0) {
    r.ess = static_cast<double>(n);
    return r;
  }
  double sum = 0.0;
  r.cutoff = n;
  for (std::size_t t = 1; t < n; ++t) {
    double ct = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) ct += (series[i] - mean) * (series[i + t] - mean);
    const double rho = ct / static_cast<double>(n) / c0;
    r.autocorrelations.push_back(rho);
    if (rho < threshold) {
      r.cutoff = t;
      break;
    }
    sum += rho;
  }
  r.ess = std::min(static_cast<double>(n), static_cast<double>(n) / (1.0 + 2.0 * sum));
  return r;
}

std::vector<Move> builtin_basis(const ToricModel& model) {
  switch (detect_family(model)) {
    case Family::twoway:
      if (is_twoway_model(model)) return twoway_markov_basis(model.spec->levels[0], model.spec->levels[1]);
      break;
    case Family::poisson:
      if (is_poisson_model(model)) return poisson_markov_basis(static_cast<Count>(model.cells()));
      break;
    case Family::non_interaction_binary:
      if (int l = nonlway_order(model)) return {nonlway_markov_basis(l)};
      break;
    case Family::generic:
      break;
  }
  throw ModelError("no built-in Markov basis for this model; supply one with --basis");
}

}  // namespace toric
