#include "toric_cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "toric/chordal.hpp"
#include "toric/families.hpp"
#include "toric/mcmc.hpp"
#include "toric/model.hpp"
#include "toric/sampler.hpp"
#include "toric/spec_io.hpp"
#include "toric/zeval.hpp"
#include "toric_cli/bench.hpp"

namespace toric::cli {

namespace {

using json = nlohmann::ordered_json;

// Instances whose fiber is at most this large are cross-checked by
// enumeration under --verify.
constexpr std::uint64_t kVerifyFiberLimit = 20000;
constexpr std::uint64_t kCountFiberLimit = 1000000;
constexpr std::size_t kVerifyPaths = 20;

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool verify = false;
  std::string format = "json";
};

json counts_json(const CountVec& v) {
  json a = json::array();
  for (Count x : v) a.push_back(x);
  return a;
}

json rats_json(const RatVec& v) {
  json a = json::array();
  for (const Rat& x : v) a.push_back(to_string(x));
  return a;
}

json vertex_set_json(const VertexSet& s) {
  json a = json::array();
  for (Vertex v : s) a.push_back(v + 1);
  return a;
}

// ---- zpoly ----------------------------------------------------------------

struct ZEval {
  Rat z;
  std::string evaluator;
};

std::optional<ZEval> closed_form(const ToricModel& m) {
  if (!m.unit_weights()) return std::nullopt;
  if (is_twoway_model(m)) {
    const auto r1 = static_cast<std::size_t>(m.spec->levels[0]);
    const CountVec rows(m.b.begin(), m.b.begin() + static_cast<std::ptrdiff_t>(r1));
    const CountVec cols(m.b.begin() + static_cast<std::ptrdiff_t>(r1), m.b.end());
    return ZEval{twoway_z_indep(rows, cols), "twoway-closed-form"};
  }
  if (is_poisson_model(m)) {
    const Count b1 = m.b[0], b2 = m.b[1];
    if (b2 >= 1 && b1 >= b2 && static_cast<Count>(m.cells()) >= b1 - b2 + 1) {
      return ZEval{lah_closed_form(b1, b2), "lah-closed-form"};
    }
    return std::nullopt;
  }
  if (m.spec && is_graphical(*m.spec) && analyze_chordal(interaction_graph(*m.spec)).is_chordal) {
    return ZEval{sundberg_z(*m.spec, m.b), "sundberg"};
  }
  return std::nullopt;
}

ZEval best_z(const ToricModel& m) {
  if (auto c = closed_form(m)) return *c;
  if (is_poisson_model(m)) {
    BellTable t(static_cast<Count>(m.cells()), m.b[0], m.b[1], m.y);
    return {t.z(m.b[0], m.b[1]), "bell-recurrence"};
  }
  if (int l = nonlway_order(m)) {
    try {
      const KFParams p = nonlway_params(l, m.b, m.y);
      return {p.prefactor * p.y_power * kf_eval(p.c, p.d, p.z, 0), "kf-series"};
    } catch (const InfeasibleError&) {
      return {Rat(0), "kf-series"};
    }
  }
  if (m.a.nonnegative()) return {z_lattice(m.a, m.b, m.y), "lattice"};
  return {z_oracle(m.a, m.b, m.y), "oracle"};
}

json kf_json(const KFParams& p) {
  json j;
  j["k"] = p.k;
  j["c"] = counts_json(p.c);
  j["d"] = counts_json(p.d);
  j["z"] = to_string(p.z);
  j["prefactor"] = to_string(p.prefactor);
  j["y_power"] = to_string(p.y_power);
  return j;
}

int cmd_zpoly(const Globals& g, const std::string& path, std::ostream& out) {
  const ToricModel m = load_model_file(path);
  const ZEval best = best_z(m);
  std::optional<std::uint64_t> fiber;
  if (m.a.nonnegative()) fiber = count_fiber(m.a, m.b, kCountFiberLimit);

  json verified = json::array();
  if (g.verify) {
    auto check = [&](const Rat& other, const char* name) {
      if (other != best.z) {
        throw Error(std::string("evaluator mismatch: ") + best.evaluator + " gives " + to_string(best.z) + ", " + name +
                    " gives " + to_string(other));
      }
      verified.push_back(name);
    };
    if (m.a.nonnegative() && best.evaluator != "lattice") check(z_lattice(m.a, m.b, m.y), "lattice");
    if (fiber && *fiber <= kVerifyFiberLimit && best.evaluator != "oracle") check(z_oracle(m.a, m.b, m.y), "oracle");
  }

  if (g.format == "csv") {
    out << "Z,evaluator,degree,fiber_size\n";
    out << to_string(best.z) << ',' << best.evaluator << ',' << degree_of(m.a, m.b) << ',';
    if (fiber) out << *fiber;
    out << '\n';
    return 0;
  }
  json j;
  j["Z"] = to_string(best.z);
  j["evaluator"] = best.evaluator;
  j["family"] = std::string(family_name(detect_family(m)));
  j["degree"] = degree_of(m.a, m.b);
  if (fiber) {
    j["fiber_size"] = *fiber;
  } else {
    j["fiber_size"] = nullptr;
    if (m.a.nonnegative()) j["fiber_size_exceeds"] = kCountFiberLimit;
  }
  if (g.verify) j["verified_against"] = verified;
  if (is_twoway_model(m)) {
    const auto r1 = static_cast<std::size_t>(m.spec->levels[0]);
    const TwowayThyp t = twoway_thyp_params(CountVec(m.b.begin(), m.b.begin() + static_cast<std::ptrdiff_t>(r1)),
                                            CountVec(m.b.begin() + static_cast<std::ptrdiff_t>(r1), m.b.end()));
    j["thyp"] = {{"alpha", counts_json(t.alpha)}, {"beta", counts_json(t.beta)}, {"gamma", t.gamma}};
  }
  if (int l = nonlway_order(m)) {
    try {
      j["kf"] = kf_json(nonlway_params(l, m.b, m.y));
    } catch (const InfeasibleError&) {
    }
  }
  out << j.dump(2) << '\n';
  return 0;
}

// ---- sample -----------------------------------------------------------------

bool proportional(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) return false;
  Rat ratio(0);
  for (std::size_t j = 0; j < a.size(); ++j) {
    if ((a[j] == 0) != (b[j] == 0)) return false;
    if (a[j] == 0) continue;
    const Rat r = a[j] / b[j];
    if (ratio == 0) {
      ratio = r;
    } else if (r != ratio) {
      return false;
    }
  }
  return true;
}

// Replays a sample path and compares the provider against enumeration.
void verify_path(const ToricModel& m, const ProviderFactory& factory, const DrawResult& d) {
  auto provider = factory();
  provider->reset(m.b);
  CountVec v = m.b;
  for (std::size_t j : d.path) {
    if (!proportional(provider->weights(), oracle_weights(m.a, v, m.y))) {
      throw Error("provider " + d.provider + " disagrees with the oracle at a node of draw seed " +
                  std::to_string(d.seed));
    }
    provider->advance(j);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= m.a(i, j);
  }
}

int cmd_sample(const Globals& g, const std::string& path, const std::string& method, const std::string& provider,
               std::size_t samples, bool with_path, std::ostream& out) {
  if (method != "direct") throw ModelError("unknown sampling method '" + method + "'; use mcmc for chains");
  const ToricModel m = load_model_file(path);
  ProviderKind kind = parse_provider(provider);
  if (kind == ProviderKind::automatic) kind = resolve_provider(m);
  const ProviderFactory factory = make_provider_factory(m, kind);
  const auto draws = batch_sample(m, factory, samples, g.seed, g.threads);

  if (g.verify && m.a.nonnegative()) {
    const auto fiber = count_fiber(m.a, m.b, kVerifyFiberLimit);
    if (fiber) {
      for (std::size_t i = 0; i < std::min(kVerifyPaths, draws.size()); ++i) verify_path(m, factory, draws[i]);
    }
  }

  if (g.format == "csv") {
    out << "draw,seed,provider";
    for (std::size_t j = 0; j < m.cells(); ++j) out << ",u" << j + 1;
    out << '\n';
    for (std::size_t i = 0; i < draws.size(); ++i) {
      out << i << ',' << draws[i].seed << ',' << draws[i].provider;
      for (Count x : draws[i].u) out << ',' << x;
      out << '\n';
    }
    return 0;
  }
  for (std::size_t i = 0; i < draws.size(); ++i) {
    json j;
    j["draw"] = i;
    j["seed"] = draws[i].seed;
    j["provider"] = draws[i].provider;
    j["u"] = counts_json(draws[i].u);
    if (with_path) j["path"] = draws[i].path;
    out << j.dump() << '\n';
  }
  return 0;
}

// ---- mcmc -------------------------------------------------------------------

json ess_json(const EssReport& r) {
  json j;
  j["n"] = r.n;
  j["ess"] = r.ess;
  j["cutoff"] = r.cutoff;
  j["autocorrelations"] = r.autocorrelations;
  return j;
}

CountVec start_state(const ToricModel& m, std::uint64_t seed) {
  if (m.a.nonnegative()) {
    if (auto small = count_fiber(m.a, m.b, kVerifyFiberLimit)) {
      if (*small == 0) throw InfeasibleError("empty fiber");
      return *first_fiber_point(m.a, m.b);
    }
  }
  auto provider = make_provider_factory(m, ProviderKind::automatic)();
  Rng rng(seed);
  return direct_sample(m, *provider, rng).u;
}

int cmd_mcmc(const Globals& g, const std::string& path, std::size_t steps, std::size_t burnin,
             const std::string& basis_arg, bool with_states, std::ostream& out) {
  const ToricModel m = load_model_file(path);
  const std::vector<Move> basis = basis_arg == "auto" ? builtin_basis(m) : load_basis_file(basis_arg, m.cells());
  for (const auto& z : basis) {
    if (multiply(m.a, z) != CountVec(m.rows(), 0)) throw ModelError("basis move is not in the kernel of A");
  }
  const CountVec u0 = start_state(m, derive_seed(g.seed, 0));
  ChainOptions co;
  co.steps = steps;
  co.burnin = burnin;
  co.seed = g.seed;
  co.keep_states = with_states;
  const ChainTrace t = run_chain(m, basis, u0, co);

  if (g.format == "csv") {
    std::ostringstream s;
    s.precision(17);
    for (double x : t.stat_series) s << x << '\n';
    out << s.str();
    return 0;
  }
  json j;
  j["steps"] = steps;
  j["burnin"] = burnin;
  j["seed"] = g.seed;
  j["basis_size"] = basis.size();
  j["statistic"] = t.statistic == Statistic::pearson ? "pearson" : "log-kernel";
  j["acceptance_rate"] = t.acceptance_rate;
  j["start"] = counts_json(u0);
  if (t.stat_series.size() >= 10) {
    j["ess"] = ess_json(ess(t.stat_series));
  } else {
    j["ess"] = nullptr;
  }
  j["stat_series"] = t.stat_series;
  j["log_kernel_series"] = t.log_kernel_series;
  if (with_states) {
    json states = json::array();
    for (const auto& u : t.states) states.push_back(counts_json(u));
    j["states"] = states;
  }
  out << j.dump(2) << '\n';
  return 0;
}

// ---- ess --------------------------------------------------------------------

double series_value(const json& v, std::size_t line) {
  if (v.is_number()) return v.get<double>();
  if (v.is_object()) {
    for (const char* key : {"stat", "value", "x"}) {
      if (v.contains(key) && v[key].is_number()) return v[key].get<double>();
    }
  }
  throw ModelError("line " + std::to_string(line) + ": expected a number");
}

std::vector<double> read_series(const std::string& text) {
  std::vector<double> xs;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    const json arr = json::parse(text, nullptr, false);
    if (arr.is_discarded() || !arr.is_array()) throw ModelError("malformed JSON array");
    for (std::size_t i = 0; i < arr.size(); ++i) xs.push_back(series_value(arr[i], i + 1));
    return xs;
  }
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    line = line.substr(b);
    if (line[0] == '{') {
      const json v = json::parse(line, nullptr, false);
      if (v.is_discarded()) throw ModelError("line " + std::to_string(n) + ": malformed JSON");
      xs.push_back(series_value(v, n));
      continue;
    }
    const std::string field = line.substr(0, line.find(','));
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(field, &used));
    } catch (const std::exception&) {
      if (n == 1) continue;  // header
      throw ModelError("line " + std::to_string(n) + ": expected a number");
    }
  }
  return xs;
}

int cmd_ess(const Globals& g, const std::string& path, double threshold, std::ostream& out) {
  const std::vector<double> xs = read_series(read_text_file(path));
  const EssReport r = ess(xs, threshold);
  if (g.format == "csv") {
    out << "n,ess,cutoff\n" << r.n << ',' << json(r.ess).dump() << ',' << r.cutoff << '\n';
    return 0;
  }
  out << ess_json(r).dump(2) << '\n';
  return 0;
}

// ---- chordal ----------------------------------------------------------------

int cmd_chordal(const Globals& g, const std::string& path, const std::string& complex, std::ostream& out) {
  HierarchicalSpec spec;
  if (!complex.empty()) {
    spec = HierarchicalSpec::binary(complex);
  } else if (!path.empty()) {
    const ToricModel m = load_model_file(path);
    if (!m.spec) throw ModelError("chordal needs a hierarchical model");
    spec = *m.spec;
  } else {
    throw ModelError("give a model file or --complex");
  }
  const Graph graph = interaction_graph(spec);
  const ChordalReport r = analyze_chordal(graph);
  const bool graphical = is_graphical(spec);
  if (g.format == "csv") {
    out << "complex,is_graphical,is_chordal\n"
        << spec.complex.to_string() << ',' << (graphical ? "true" : "false") << ',' << (r.is_chordal ? "true" : "false")
        << '\n';
    return 0;
  }
  json j;
  j["complex"] = spec.complex.to_string();
  j["is_graphical"] = graphical;
  j["is_chordal"] = r.is_chordal;
  json edges = json::array();
  for (Vertex a = 0; a < graph.n; ++a) {
    for (Vertex b = a + 1; b < graph.n; ++b) {
      if (graph.has_edge(a, b)) edges.push_back({a + 1, b + 1});
    }
  }
  j["edges"] = edges;
  if (r.is_chordal) {
    j["numbering"] = vertex_set_json(r.numbering);
    json cliques = json::array(), seps = json::array(), mult = json::array();
    for (const auto& c : r.sequence.cliques) cliques.push_back(vertex_set_json(c));
    for (std::size_t i = 1; i < r.sequence.separators.size(); ++i) seps.push_back(vertex_set_json(r.sequence.separators[i]));
    for (const auto& [s, n] : r.sequence.multiplicity) mult.push_back({{"separator", vertex_set_json(s)}, {"count", n}});
    j["cliques"] = cliques;
    j["separators"] = seps;
    j["multiplicities"] = mult;
  }
  out << j.dump(2) << '\n';
  return 0;
}

// ---- basis ------------------------------------------------------------------

struct BasisArgs {
  std::string family;
  std::string model;
  Count r1 = 0, r2 = 0, m = 0;
  int l = 0;
};

int cmd_basis(const Globals& g, const BasisArgs& a, std::ostream& out) {
  std::vector<Move> moves;
  std::string family = a.family;
  json extra;
  if (!a.model.empty()) {
    const ToricModel m = load_model_file(a.model);
    moves = builtin_basis(m);
    family = std::string(family_name(detect_family(m)));
  } else {
    switch (parse_family(a.family)) {
      case Family::twoway:
        if (a.r1 < 2 || a.r2 < 2) throw ModelError("twoway basis needs --r1 >= 2 and --r2 >= 2");
        moves = twoway_markov_basis(a.r1, a.r2);
        extra["volume"] = to_string(twoway_volume(a.r1, a.r2));
        break;
      case Family::poisson:
        if (a.m < 2) throw ModelError("poisson basis needs --m >= 2");
        moves = poisson_markov_basis(a.m);
        break;
      case Family::non_interaction_binary:
        moves = {nonlway_markov_basis(a.l)};
        break;
      case Family::generic:
        throw ModelError("no built-in Markov basis for the generic family");
    }
  }
  if (g.format == "csv") {
    for (const auto& z : moves) {
      for (std::size_t j = 0; j < z.size(); ++j) out << (j ? "," : "") << z[j];
      out << '\n';
    }
    return 0;
  }
  json j;
  j["family"] = family;
  j["cells"] = moves.empty() ? 0 : moves[0].size();
  j["count"] = moves.size();
  for (auto& [k, v] : extra.items()) j[k] = v;
  json arr = json::array();
  for (const auto& z : moves) arr.push_back(counts_json(z));
  j["moves"] = arr;
  out << j.dump(2) << '\n';
  return 0;
}

// ---- bench ------------------------------------------------------------------

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

json bench_json(const BenchReport& r) {
  json j;
  j["experiment"] = r.experiment;
  j["seed"] = r.seed;
  j["threads"] = r.threads;
  j["repeats"] = r.repeats;
  j["machine"] = {{"compiler", __VERSION__}, {"hardware_threads", std::thread::hardware_concurrency()}};
  json cases = json::array();
  for (const auto& c : r.cases) {
    json k;
    k["name"] = c.name;
    k["b"] = counts_json(c.model.b);
    k["y"] = rats_json(c.model.y);
    k["mcmc"] = {{"steps", c.mcmc.steps},
                 {"burnin", c.mcmc.burnin},
                 {"statistic", c.mcmc.statistic},
                 {"seeds", c.mcmc.seeds},
                 {"ess", c.mcmc.ess},
                 {"mean_ess", c.mcmc.mean_ess},
                 {"acceptance_rate", c.mcmc.acceptance}};
    k["direct"] = {{"provider", c.direct.provider},
                   {"draws_per_trial", c.direct.draws_per_trial},
                   {"trials", c.direct.seeds.size()},
                   {"seeds", c.direct.seeds}};
    k["checked_tables"] = c.checked_tables;
    k["all_in_fiber"] = c.all_in_fiber;
    k["reference"] = {{"mcmc_seconds", c.reference_mcmc_seconds},
                      {"direct_seconds", c.reference_direct_seconds},
                      {"mean_ess", c.reference_ess},
                      {"note", "published timings on other hardware; not a target"}};
    k["trace_files"] = c.trace_files;
    cases.push_back(k);
  }
  j["cases"] = cases;
  return j;
}

// Wall-clock numbers vary between runs, so they go to stderr and to the
// trace directory rather than into the reproducible report.
json timing_json(const BenchReport& r) {
  json j = json::array();
  for (const auto& c : r.cases) {
    const double mc = mean(c.mcmc.seconds);
    const double di = mean(c.direct.seconds);
    j.push_back({{"case", c.name},
                 {"mcmc_mean_seconds", mc},
                 {"mcmc_seconds", c.mcmc.seconds},
                 {"mcmc_effective_draws_per_second", mc > 0 ? c.mcmc.mean_ess / mc : 0.0},
                 {"direct_setup_seconds", c.direct.setup_seconds},
                 {"direct_mean_seconds", di},
                 {"direct_seconds", c.direct.seconds},
                 {"direct_draws_per_second", di > 0 ? static_cast<double>(c.direct.draws_per_trial) / di : 0.0}});
  }
  return j;
}

int cmd_bench(const Globals& g, const std::string& experiment, BenchOptions opt, std::ostream& out, std::ostream& err) {
  opt.seed = g.seed;
  opt.threads = g.threads;
  BenchReport r;
  if (experiment == "poisson") {
    r = bench_poisson(opt);
  } else if (experiment == "twoway") {
    r = bench_twoway(opt);
  } else {
    throw ModelError("unknown benchmark '" + experiment + "'");
  }
  for (const auto& c : r.cases) {
    if (!c.all_in_fiber) throw Error("benchmark " + c.name + " produced a table outside the fiber");
  }
  const json report = bench_json(r);
  const json timing = timing_json(r);
  if (!opt.trace_dir.empty()) {
    json full = report;
    full["timing"] = timing;
    std::ofstream f(std::filesystem::path(opt.trace_dir) / (experiment + "-report.json"));
    if (!f) throw Error("cannot write the report to " + opt.trace_dir);
    f << full.dump(2) << '\n';
  }
  err << json{{"timing", timing}}.dump() << '\n';
  if (g.format == "csv") {
    out << "case,method,provider,draws,mean_ess,in_fiber\n";
    for (const auto& c : r.cases) {
      out << c.name << ",mcmc,," << c.mcmc.steps - c.mcmc.burnin << ',' << json(c.mcmc.mean_ess).dump() << ','
          << c.all_in_fiber << '\n';
      out << c.name << ",direct," << c.direct.provider << ',' << c.direct.draws_per_trial << ",," << c.all_in_fiber
          << '\n';
    }
    return 0;
  }
  out << report.dump(2) << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and Metropolis sampling from A-hypergeometric distributions", "toric-sampler"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Base seed for every random stream")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for direct sampling")
      ->envname("TORIC_SAMPLER_THREADS")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  app.add_flag("--verify", g.verify, "Cross-check against enumeration on small instances");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  std::string model_path;

  auto* zpoly = app.add_subcommand("zpoly", "Evaluate Z_A(b;y) exactly");
  zpoly->add_option("model", model_path, "Model JSON file")->required();

  std::string method = "direct", provider = "auto";
  std::size_t samples = 1;
  bool with_path = false;
  auto* sample = app.add_subcommand("sample", "Direct samples from the fiber, one JSON line each");
  sample->add_option("model", model_path, "Model JSON file")->required();
  sample->add_option("--method", method)->capture_default_str();
  sample->add_option("--provider", provider, "auto|oracle|lattice|chordal|urn|bell|pfaffian")->capture_default_str();
  sample->add_option("--samples", samples)->capture_default_str();
  sample->add_flag("--with-path", with_path, "Include the column sequence of each draw");

  std::size_t steps = 10000, burnin = 1000;
  std::string basis_arg = "auto";
  bool with_states = false;
  auto* mcmc = app.add_subcommand("mcmc", "Metropolis chain over a Markov basis");
  mcmc->add_option("model", model_path, "Model JSON file")->required();
  mcmc->add_option("--steps", steps)->capture_default_str();
  mcmc->add_option("--burnin", burnin)->capture_default_str();
  mcmc->add_option("--basis", basis_arg, "auto or a JSON move file")->capture_default_str();
  mcmc->add_flag("--with-states", with_states, "Include every post burn-in state");

  std::string series_path;
  double threshold = 0.05;
  auto* ess_cmd = app.add_subcommand("ess", "Effective sample size of a statistic series");
  ess_cmd->add_option("series", series_path, "CSV (one value per line), JSON lines or a JSON array")->required();
  ess_cmd->add_option("--threshold", threshold, "Autocorrelation cutoff")->capture_default_str();

  std::string complex;
  auto* chordal = app.add_subcommand("chordal", "Interaction graph, chordality and perfect sequence");
  chordal->add_option("model", model_path, "Model JSON file");
  chordal->add_option("--complex", complex, "Bracket notation such as [12][13][23]");

  BasisArgs ba;
  auto* basis = app.add_subcommand("basis", "Built-in Markov bases as JSON move lists");
  basis->add_option("--family", ba.family, "twoway|poisson|non-interaction-binary");
  basis->add_option("--model", ba.model, "Take the family from a model file");
  basis->add_option("--r1", ba.r1);
  basis->add_option("--r2", ba.r2);
  basis->add_option("--m", ba.m);
  basis->add_option("--l", ba.l);

  std::string experiment;
  BenchOptions bo;
  std::size_t b_steps = 0, b_burnin = 0, b_draws = 0;
  auto* bench = app.add_subcommand("bench", "Direct sampling vs Metropolis on the reference problems");
  bench->add_option("experiment", experiment, "poisson|twoway")->required()->check(CLI::IsMember({"poisson", "twoway"}));
  bench->add_option("--repeats", bo.repeats, "Chains and direct trials per case")->capture_default_str();
  auto* steps_opt = bench->add_option("--steps", b_steps, "MCMC steps per chain");
  auto* burnin_opt = bench->add_option("--burnin", b_burnin, "MCMC burn-in steps");
  auto* draws_opt = bench->add_option("--draws", b_draws, "Direct draws per trial; 0 uses ceil(mean ESS)");
  bench->add_option("--trace-dir", bo.trace_dir, "Write series, draws and the timed report here");

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("toric-sampler");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*zpoly) return cmd_zpoly(g, model_path, out);
    if (*sample) return cmd_sample(g, model_path, method, provider, samples, with_path, out);
    if (*mcmc) return cmd_mcmc(g, model_path, steps, burnin, basis_arg, with_states, out);
    if (*ess_cmd) return cmd_ess(g, series_path, threshold, out);
    if (*chordal) return cmd_chordal(g, model_path, complex, out);
    if (*basis) {
      if (ba.family.empty() && ba.model.empty()) throw ModelError("basis needs --family or --model");
      return cmd_basis(g, ba, out);
    }
    if (*bench) {
      if (*steps_opt) bo.steps = b_steps;
      if (*burnin_opt) bo.burnin = b_burnin;
      if (*draws_opt) bo.draws = b_draws;
      return cmd_bench(g, experiment, bo, out, err);
    }
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return 3;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "model error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace toric::cli
