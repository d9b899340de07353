#include "toric_cli/bench.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "toric/families.hpp"
#include "toric/mcmc.hpp"
#include "toric/sampler.hpp"

namespace toric::cli {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct CaseSetup {
  std::string name;
  ToricModel model;
  ProviderKind provider;
  std::size_t steps;
  std::size_t burnin;
  std::size_t default_draws;
  double ref_mcmc;
  double ref_direct;
  double ref_ess;
  std::uint64_t tag;
};

void write_series(const std::filesystem::path& path, const std::vector<double>& xs) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f.precision(17);
  for (double x : xs) f << x << '\n';
}

void write_tables(const std::filesystem::path& path, const std::vector<DrawResult>& draws) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  for (const auto& d : draws) {
    f << "{\"seed\":" << d.seed << ",\"u\":[";
    for (std::size_t j = 0; j < d.u.size(); ++j) f << (j ? "," : "") << d.u[j];
    f << "]}\n";
  }
}

BenchCase run_case(const CaseSetup& setup, const BenchOptions& opt, const std::string& experiment) {
  BenchCase out;
  out.name = setup.name;
  out.model = setup.model;
  out.reference_mcmc_seconds = setup.ref_mcmc;
  out.reference_direct_seconds = setup.ref_direct;
  out.reference_ess = setup.ref_ess;
  const ToricModel& model = setup.model;
  const std::uint64_t case_seed = derive_seed(opt.seed, setup.tag);

  std::filesystem::path dir;
  if (!opt.trace_dir.empty()) {
    dir = opt.trace_dir;
    std::filesystem::create_directories(dir);
  }
  auto trace_name = [&](const std::string& kind, std::size_t r, const char* ext) {
    return experiment + "-" + setup.name + "-" + kind + "-" + std::to_string(r) + ext;
  };
  auto in_fiber = [&](const CountVec& u) {
    ++out.checked_tables;
    if (multiply(model.a, u) != model.b) out.all_in_fiber = false;
  };

  auto t0 = Clock::now();
  const ProviderFactory factory = make_provider_factory(model, setup.provider);
  out.direct.setup_seconds = since(t0);
  out.direct.provider = std::string(provider_name(setup.provider));

  // Metropolis chains, each started from an exact draw.
  const std::vector<Move> basis = builtin_basis(model);
  McmcRun& mc = out.mcmc;
  mc.steps = opt.steps.value_or(setup.steps);
  mc.burnin = opt.burnin.value_or(setup.burnin);
  mc.statistic = default_statistic(model) == Statistic::pearson ? "pearson" : "log-kernel";
  double ess_sum = 0.0;
  for (std::size_t r = 0; r < opt.repeats; ++r) {
    const std::uint64_t s = derive_seed(case_seed, 2 * r);
    auto provider = factory();
    Rng start_rng(derive_seed(s, 0));
    t0 = Clock::now();
    const CountVec u0 = direct_sample(model, *provider, start_rng).u;
    // The first exact draw fills the shared tables.
    if (r == 0) out.direct.setup_seconds += since(t0);
    ChainOptions co;
    co.steps = mc.steps;
    co.burnin = mc.burnin;
    co.seed = s;
    co.keep_states = true;
    t0 = Clock::now();
    ChainTrace trace = run_chain(model, basis, u0, co);
    mc.seconds.push_back(since(t0));
    for (const auto& u : trace.states) in_fiber(u);
    const double e = trace.stat_series.size() >= 10 ? ess(trace.stat_series).ess : 0.0;
    mc.seeds.push_back(s);
    mc.ess.push_back(e);
    mc.acceptance.push_back(trace.acceptance_rate);
    ess_sum += e;
    if (!dir.empty()) {
      out.trace_files.push_back(trace_name("mcmc", r, ".csv"));
      write_series(dir / out.trace_files.back(), trace.stat_series);
    }
  }
  mc.mean_ess = opt.repeats ? ess_sum / static_cast<double>(opt.repeats) : 0.0;

  DirectRun& dr = out.direct;
  dr.draws_per_trial = opt.draws.value_or(setup.default_draws);
  if (dr.draws_per_trial == 0) dr.draws_per_trial = static_cast<std::size_t>(std::ceil(mc.mean_ess));
  for (std::size_t r = 0; r < opt.repeats; ++r) {
    const std::uint64_t s = derive_seed(case_seed, 2 * r + 1);
    t0 = Clock::now();
    auto draws = batch_sample(model, factory, dr.draws_per_trial, s, opt.threads);
    dr.seconds.push_back(since(t0));
    dr.seeds.push_back(s);
    for (auto& d : draws) {
      in_fiber(d.u);
      dr.tables.push_back(d.u);
    }
    if (!dir.empty()) {
      out.trace_files.push_back(trace_name("direct", r, ".jsonl"));
      write_tables(dir / out.trace_files.back(), draws);
    }
  }
  return out;
}

}  // namespace

BenchReport bench_poisson(const BenchOptions& options) {
  BenchReport report;
  report.experiment = "poisson";
  report.seed = options.seed;
  report.threads = options.threads;
  report.repeats = options.repeats;
  CaseSetup c{"m5", poisson_model(5, 288, 120), ProviderKind::bell, 9000, 1000, 1977, 10.72, 5.50, 1977.3, 1};
  report.cases.push_back(run_case(c, options, report.experiment));
  return report;
}

BenchReport bench_twoway(const BenchOptions& options) {
  BenchReport report;
  report.experiment = "twoway";
  report.seed = options.seed;
  report.threads = options.threads;
  report.repeats = options.repeats;
  const CountVec rows{10, 14, 26};
  const CountVec cols{6, 9, 15, 20};
  CaseSetup indep{"independence", twoway_model(rows, cols), ProviderKind::urn, 10000, 1000, 425, 1.80, 0.21, 425.1, 2};
  report.cases.push_back(run_case(indep, options, report.experiment));

  RatVec z;
  for (const char* v : {"1/2", "1/11", "1/13", "1", "1/7", "1/3", "1/5", "1", "1", "1", "1", "1"}) {
    z.push_back(parse_rational(v));
  }
  CaseSetup dep{"dependence", twoway_model(rows, cols, twoway_y_from_odds(3, 4, z)), ProviderKind::lattice, 10000, 1000,
                281, 1.96, 1645.6, 280.9, 3};
  report.cases.push_back(run_case(dep, options, report.experiment));
  return report;
}

}  // namespace toric::cli
