#pragma once

// Direct sampling from A-hypergeometric distributions: walk down the Markov
// lattice from b to 0, choosing column j with probability proportional to
// y_j Z(v - a_j).

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "toric/chordal.hpp"
#include "toric/exactmath.hpp"
#include "toric/families.hpp"
#include "toric/model.hpp"
#include "toric/pfaffian.hpp"
#include "toric/zeval.hpp"

namespace toric {

using Rng = std::mt19937_64;

/// splitmix64 of (base, index); one independent stream per draw index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Uniform integer in [0, n) by rejection.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);
/// Uniform integer in [0, bound) for an arbitrary-precision bound.
Int uniform_below(Rng& rng, const Int& bound);
/// 53-bit uniform in [0, 1) as the integer numerator over 2^53.
std::uint64_t uniform_53(Rng& rng);

/// Index j drawn with probability w_j / sum(w), exactly.
std::size_t select_exact(const RatVec& w, Rng& rng);

/// Source of transition weights along one sample path. weights() must
/// return y_j Z(v - a_j) at the current node v, possibly times one common
/// positive factor.
class WeightProvider {
 public:
  virtual ~WeightProvider() = default;
  virtual std::string_view name() const = 0;
  virtual void reset(const CountVec& b) = 0;
  virtual RatVec weights() = 0;
  virtual void advance(std::size_t j) = 0;
};

enum class ProviderKind { automatic, oracle, lattice, chordal, urn, bell, pfaffian };

std::string_view provider_name(ProviderKind k);
ProviderKind parse_provider(std::string_view name);

/// Whether a provider can serve this model, with a reason when not.
std::optional<std::string> provider_unsupported(ProviderKind kind, const ToricModel& model);
/// The provider `automatic` resolves to.
ProviderKind resolve_provider(const ToricModel& model);

using ProviderFactory = std::function<std::unique_ptr<WeightProvider>()>;

/// Factory sharing read-only tables (lattice cache, Bell table) between
/// the providers it creates. Throws ModelError for unsupported pairs.
ProviderFactory make_provider_factory(const ToricModel& model, ProviderKind kind);

struct DrawResult {
  CountVec u;
  std::vector<std::size_t> path;
  std::string provider;
  std::uint64_t seed = 0;
  /// w_{j_t} / sum w at each step, when requested.
  std::vector<Rat> step_probabilities;
};

struct SampleOptions {
  bool record_probabilities = false;
  std::uint64_t seed = 0;  // stored in the result
};

DrawResult direct_sample(const ToricModel& model, WeightProvider& provider, Rng& rng,
                         const SampleOptions& options = {});

/// direct_sample with the Gauss-Manin provider of a binary non-l-way model.
DrawResult direct_sample_pfaffian(const ToricModel& model, Rng& rng, const SampleOptions& options = {});

/// N draws; draw i uses seed derive_seed(base_seed, i), so the output is the
/// same for any worker count.
std::vector<DrawResult> batch_sample(const ToricModel& model, const ProviderFactory& factory, std::size_t n,
                                     std::uint64_t base_seed, unsigned workers, bool record_probabilities = false);

}  // namespace toric
