#pragma once

// Paired direct-sampling vs Metropolis experiments at desk scale.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toric/model.hpp"

namespace toric::cli {

struct BenchOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t repeats = 10;
  std::optional<std::size_t> steps;   // MCMC steps per chain
  std::optional<std::size_t> burnin;
  std::optional<std::size_t> draws;   // direct draws per trial; 0 = ceil(mean ESS)
  std::string trace_dir;              // empty: no trace files
};

struct McmcRun {
  std::size_t steps = 0;
  std::size_t burnin = 0;
  std::string statistic;
  std::vector<std::uint64_t> seeds;
  std::vector<double> ess;
  std::vector<double> acceptance;
  std::vector<double> seconds;
  double mean_ess = 0.0;
};

struct DirectRun {
  std::string provider;
  std::size_t draws_per_trial = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> seconds;
  double setup_seconds = 0.0;  // building and filling shared tables (lattice cache, Bell table)
  std::vector<CountVec> tables;  // every draw of every trial
};

struct BenchCase {
  std::string name;
  ToricModel model;
  McmcRun mcmc;
  DirectRun direct;
  std::size_t checked_tables = 0;  // direct draws + MCMC states checked against Au = b
  bool all_in_fiber = true;
  double reference_mcmc_seconds = 0.0;
  double reference_direct_seconds = 0.0;
  double reference_ess = 0.0;
  std::vector<std::string> trace_files;
};

struct BenchReport {
  std::string experiment;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t repeats = 0;
  std::vector<BenchCase> cases;
};

/// m = 5, b = (288, 120): Bell provider vs 9000/1000 chains.
BenchReport bench_poisson(const BenchOptions& options);
/// 3x4 tables with rows (10, 14, 26), cols (6, 9, 15, 20): urn provider
/// under independence and lattice provider under the odds-ratio matrix,
/// each vs 10000/1000 chains.
BenchReport bench_twoway(const BenchOptions& options);

}  // namespace toric::cli
