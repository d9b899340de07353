#include "toric/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace toric {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n == 0) throw Error("uniform_below: empty range");
  const std::uint64_t threshold = (0 - n) % n;
  std::uint64_t x = rng();
  while (x < threshold) x = rng();
  return x % n;
}

Int uniform_below(Rng& rng, const Int& bound) {
  if (bound <= 0) throw Error("uniform_below: empty range");
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  for (;;) {
    Int r(0);
    for (std::size_t w = 0; w < words; ++w) {
      r <<= 64;
      r += Int(static_cast<unsigned long>(rng()));
    }
    r >>= static_cast<mp_bitcnt_t>(words * 64 - bits);
    if (r < bound) return r;
  }
}

std::uint64_t uniform_53(Rng& rng) { return rng() >> 11; }

std::size_t select_exact(const RatVec& w, Rng& rng) {
  const Int l = common_denominator(w);
  std::vector<Int> scaled(w.size());
  Int total(0);
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] < 0) throw Error("negative transition weight");
    scaled[j] = w[j].get_num() * (l / w[j].get_den());
    total += scaled[j];
  }
  if (total == 0) throw Error("all transition weights are zero");
  const Int r = uniform_below(rng, total);
  Int cum(0);
  for (std::size_t j = 0; j < scaled.size(); ++j) {
    cum += scaled[j];
    if (r < cum) return j;
  }
  throw Error("select_exact: cumulative weights exhausted");
}

std::string_view provider_name(ProviderKind k) {
  switch (k) {
    case ProviderKind::automatic: return "auto";
    case ProviderKind::oracle: return "oracle";
    case ProviderKind::lattice: return "lattice";
    case ProviderKind::chordal: return "chordal";
    case ProviderKind::urn: return "urn";
    case ProviderKind::bell: return "bell";
    case ProviderKind::pfaffian: return "pfaffian";
  }
  return "auto";
}

ProviderKind parse_provider(std::string_view name) {
  for (auto k : {ProviderKind::automatic, ProviderKind::oracle, ProviderKind::lattice, ProviderKind::chordal,
                 ProviderKind::urn, ProviderKind::bell, ProviderKind::pfaffian}) {
    if (provider_name(k) == name) return k;
  }
  throw ModelError("unknown provider '" + std::string(name) + "'");
}

namespace {

class OracleProvider final : public WeightProvider {
 public:
  explicit OracleProvider(const ToricModel& m) : a_(m.a), y_(m.y) {}
  std::string_view name() const override { return "oracle"; }
  void reset(const CountVec& b) override { v_ = b; }
  RatVec weights() override { return oracle_weights_enumerated(a_, v_, y_); }
  void advance(std::size_t j) override {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= a_(i, j);
  }

 private:
  IntMatrix a_;
  RatVec y_;
  CountVec v_;
};

class LatticeProvider final : public WeightProvider {
 public:
  explicit LatticeProvider(std::shared_ptr<ZCache> cache) : cache_(std::move(cache)) {}
  std::string_view name() const override { return "lattice"; }
  void reset(const CountVec& b) override { v_ = b; }
  RatVec weights() override {
    const auto scaled = cache_->scaled_weights(v_);
    return RatVec(scaled.begin(), scaled.end());
  }
  void advance(std::size_t j) override {
    const IntMatrix& a = cache_->matrix();
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= a(i, j);
  }

 private:
  std::shared_ptr<ZCache> cache_;
  CountVec v_;
};

class ChordalProvider final : public WeightProvider {
 public:
  ChordalProvider(const ToricModel& m, PerfectSequence seq) : spec_(*m.spec), config_(*m.config), seq_(std::move(seq)) {}
  std::string_view name() const override { return "chordal"; }
  void reset(const CountVec& b) override { v_ = b; }
  RatVec weights() override { return chordal_weights(spec_, config_, v_, seq_); }
  void advance(std::size_t j) override {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= config_.entries(i, j);
  }

 private:
  HierarchicalSpec spec_;
  ConfigMatrix config_;
  PerfectSequence seq_;
  CountVec v_;
};

class UrnProvider final : public WeightProvider {
 public:
  explicit UrnProvider(const ToricModel& m)
      : r1_(static_cast<std::size_t>(m.spec->levels[0])), r2_(static_cast<std::size_t>(m.spec->levels[1])) {}
  std::string_view name() const override { return "urn"; }
  void reset(const CountVec& b) override { v_ = b; }
  RatVec weights() override {
    Count n = 0;
    for (std::size_t i = 0; i < r1_; ++i) n += v_[i];
    RatVec w(r1_ * r2_, Rat(0));
    if (n == 0) return w;
    for (std::size_t i = 0; i < r1_; ++i) {
      for (std::size_t j = 0; j < r2_; ++j) {
        const Count e = v_[i] * v_[r1_ + j];
        if (e != 0) w[i * r2_ + j] = make_rat(Int(static_cast<long>(e)), Int(static_cast<long>(n)));
      }
    }
    return w;
  }
  void advance(std::size_t j) override {
    --v_[j / r2_];
    --v_[r1_ + j % r2_];
  }

 private:
  std::size_t r1_, r2_;
  CountVec v_;
};

class BellProvider final : public WeightProvider {
 public:
  explicit BellProvider(std::shared_ptr<const BellTable> table) : table_(std::move(table)) {}
  std::string_view name() const override { return "bell"; }
  void reset(const CountVec& b) override { v_ = b; }
  RatVec weights() override { return table_->weights(v_[0], v_[1]); }
  void advance(std::size_t j) override {
    v_[0] -= static_cast<Count>(j) + 1;
    v_[1] -= 1;
  }

 private:
  std::shared_ptr<const BellTable> table_;
  CountVec v_;
};

class PfaffianProvider final : public WeightProvider {
 public:
  PfaffianProvider(int l, RatVec y) : l_(l), y_(std::move(y)) {}
  std::string_view name() const override { return "pfaffian"; }
  void reset(const CountVec& b) override { state_.emplace(l_, b, y_); }
  RatVec weights() override { return state_->weights(); }
  void advance(std::size_t j) override { state_->advance(j); }

 private:
  int l_;
  RatVec y_;
  std::optional<NonlwayPfaffian> state_;
};

}  // namespace

std::optional<std::string> provider_unsupported(ProviderKind kind, const ToricModel& model) {
  switch (kind) {
    case ProviderKind::automatic:
      return std::nullopt;
    case ProviderKind::oracle:
    case ProviderKind::lattice:
      if (!model.a.nonnegative()) return "matrix has negative entries";
      return std::nullopt;
    case ProviderKind::chordal: {
      if (!model.spec) return "chordal provider needs a hierarchical model";
      if (!model.unit_weights()) return "chordal provider needs y = 1";
      if (!is_graphical(*model.spec)) return "model is not graphical";
      if (!analyze_chordal(interaction_graph(*model.spec)).is_chordal) return "interaction graph is not chordal";
      return std::nullopt;
    }
    case ProviderKind::urn:
      if (!is_twoway_model(model)) return "urn provider needs a two-way independence model";
      if (!model.unit_weights()) return "urn provider needs y = 1";
      return std::nullopt;
    case ProviderKind::bell:
      if (!is_poisson_model(model)) return "bell provider needs the Poisson regression matrix";
      return std::nullopt;
    case ProviderKind::pfaffian: {
      const int l = nonlway_order(model);
      if (l == 0) return "pfaffian provider needs a binary model without the l-way interaction";
      if (nonlway_z(model.y) == 1) return "pfaffian provider needs z != 1";
      return std::nullopt;
    }
  }
  return "unknown provider";
}

ProviderKind resolve_provider(const ToricModel& model) {
  for (auto k : {ProviderKind::urn, ProviderKind::chordal, ProviderKind::bell, ProviderKind::pfaffian,
                 ProviderKind::lattice}) {
    if (!provider_unsupported(k, model)) return k;
  }
  throw ModelError("no sampler for configuration matrices with negative entries");
}

ProviderFactory make_provider_factory(const ToricModel& model, ProviderKind kind) {
  if (kind == ProviderKind::automatic) kind = resolve_provider(model);
  if (auto why = provider_unsupported(kind, model)) {
    throw ModelError(std::string(provider_name(kind)) + ": " + *why);
  }
  switch (kind) {
    case ProviderKind::oracle:
      return [model] { return std::make_unique<OracleProvider>(model); };
    case ProviderKind::lattice: {
      auto cache = std::make_shared<ZCache>(model.a, model.y, model.b);
      return [cache] { return std::make_unique<LatticeProvider>(cache); };
    }
    case ProviderKind::chordal: {
      auto seq = analyze_chordal(interaction_graph(*model.spec)).sequence;
      return [model, seq] { return std::make_unique<ChordalProvider>(model, seq); };
    }
    case ProviderKind::urn:
      return [model] { return std::make_unique<UrnProvider>(model); };
    case ProviderKind::bell: {
      auto table = std::make_shared<const BellTable>(static_cast<Count>(model.cells()), model.b[0], model.b[1], model.y);
      return [table] { return std::make_unique<BellProvider>(table); };
    }
    case ProviderKind::pfaffian: {
      const int l = nonlway_order(model);
      return [l, y = model.y] { return std::make_unique<PfaffianProvider>(l, y); };
    }
    case ProviderKind::automatic:
      break;
  }
  throw ModelError("unresolved provider");
}

DrawResult direct_sample(const ToricModel& model, WeightProvider& provider, Rng& rng, const SampleOptions& options) {
  const Count deg = degree_of(model.a, model.b);
  DrawResult out;
  out.u.assign(model.cells(), 0);
  out.provider = std::string(provider.name());
  out.seed = options.seed;
  out.path.reserve(static_cast<std::size_t>(deg));
  provider.reset(model.b);
  for (Count t = 0; t < deg; ++t) {
    const RatVec w = provider.weights();
    if (std::all_of(w.begin(), w.end(), [](const Rat& x) { return x == 0; })) {
      if (t == 0) throw InfeasibleError("fiber is empty");
      throw Error(std::string(provider.name()) + " provider returned zero weights before reaching the origin");
    }
    const std::size_t j = select_exact(w, rng);
    if (options.record_probabilities) {
      Rat total(0);
      for (const Rat& x : w) total += x;
      out.step_probabilities.push_back(w[j] / total);
    }
    out.path.push_back(j);
    ++out.u[j];
    provider.advance(j);
  }
  if (multiply(model.a, out.u) != model.b) throw Error("sampled table does not reproduce b");
  return out;
}

DrawResult direct_sample_pfaffian(const ToricModel& model, Rng& rng, const SampleOptions& options) {
  auto provider = make_provider_factory(model, ProviderKind::pfaffian)();
  return direct_sample(model, *provider, rng, options);
}

std::vector<DrawResult> batch_sample(const ToricModel& model, const ProviderFactory& factory, std::size_t n,
                                     std::uint64_t base_seed, unsigned workers, bool record_probabilities) {
  std::vector<DrawResult> results(n);
  if (n == 0) return results;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::size_t>(n, 1024))));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      auto provider = factory();
      for (std::size_t i = next++; i < n; i = next++) {
        SampleOptions opt;
        opt.seed = derive_seed(base_seed, i);
        opt.record_probabilities = record_probabilities;
        Rng rng(opt.seed);
        results[i] = direct_sample(model, *provider, rng, opt);
      }
    } catch (...) {
      std::scoped_lock lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace toric
