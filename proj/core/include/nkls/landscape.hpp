#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nkls/config.hpp"
#include "nkls/errors.hpp"
#include "nkls/rng.hpp"

namespace nkls {

enum class DependencyScheme { kRandom, kAdjacent };

std::string to_string(DependencyScheme scheme);
DependencyScheme dependency_scheme_from_string(const std::string& s);

/// For each node i, the k other nodes whose state feeds node i's
/// contribution. deps[i] entries are pairwise distinct and never i itself.
struct InteractionMap {
  int n = 0;
  int k = 0;
  std::vector<std::vector<std::uint32_t>> deps;

  /// Throws ParameterDomainError on any structural violation.
  void validate() const;
};

/// `random`: deps[i] drawn uniformly without replacement from the other
/// nodes. `adjacent`: the k nodes following i cyclically.
InteractionMap build_interaction_map(int n, int k, DependencyScheme scheme,
                                     SplitMix64& rng);

/// Flipping node `flipped` changes the contribution of node `node`; XORing
/// `mask` into node's packed substate index applies the flip.
struct FlipEffect {
  std::uint32_t node;
  std::uint32_t mask;
};

/// An NK fitness landscape: per node, a dense table of contribution values
/// over the 2^(k+1) substates of the node and its k dependencies.
///
/// Substate packing: the focal bit occupies bit 0; dependency d (in deps[i]
/// order) occupies bit d+1. Landscapes are immutable after construction and
/// safe for concurrent reads.
class Landscape {
 public:
  static constexpr std::uint64_t kDefaultEntryCap = 1ull << 28;

  Landscape() = default;

  /// Builds a landscape from explicit parts, validating every invariant:
  /// deps structure, table sizes of exactly 2^(k+1), and every contribution
  /// strictly inside (0,1). Used by import and by hand-built fixtures.
  static Landscape from_parts(int n, int k, DependencyScheme scheme,
                              std::uint64_t seed, InteractionMap interactions,
                              std::vector<std::vector<double>> tables);

  int n() const { return n_; }
  int k() const { return k_; }
  DependencyScheme scheme() const { return scheme_; }
  std::uint64_t seed() const { return seed_; }
  const InteractionMap& interactions() const { return interactions_; }

  /// Contribution table of one node; exactly 2^(k+1) entries.
  std::span<const double> table(int node) const {
    return {tables_.data() + static_cast<std::size_t>(node) * stride_, stride_};
  }

  std::size_t table_size() const { return stride_; }
  std::uint64_t total_entries() const { return static_cast<std::uint64_t>(n_) * stride_; }

  /// Packed substate index of `node` under `config` (focal bit lowest).
  std::uint32_t substate(const Configuration& config, int node) const;

  /// Arithmetic mean of the n per-node contributions. Always in (0,1).
  /// Throws DimensionMismatchError if config.n() != n().
  double overall_fitness(const Configuration& config) const;

  /// True iff config is strictly fitter than all n single-bit-flip neighbors.
  bool is_local_optimum(const Configuration& config) const;

  /// Nodes whose contribution changes when `node` flips, with the substate
  /// masks that apply the flip. Contains node itself plus every dependent.
  std::span<const FlipEffect> flip_effects(int node) const {
    return {effects_.data() + effect_offsets_[static_cast<std::size_t>(node)],
            effect_offsets_[static_cast<std::size_t>(node) + 1] -
                effect_offsets_[static_cast<std::size_t>(node)]};
  }

 private:
  friend void generate_landscape_into(Landscape&, int, int, DependencyScheme,
                                      std::uint64_t, std::uint64_t);
  void build_flip_effects();

  int n_ = 0;
  int k_ = 0;
  DependencyScheme scheme_ = DependencyScheme::kRandom;
  std::uint64_t seed_ = 0;
  InteractionMap interactions_;
  std::size_t stride_ = 0;           // 2^(k+1)
  std::vector<double> tables_;       // flat, n * stride
  std::vector<FlipEffect> effects_;  // flattened per-node flip lists
  std::vector<std::size_t> effect_offsets_;
};

/// Deterministically generates a landscape from (n, k, scheme, seed): the
/// interaction map from stream derive_seed(seed, 0) and node i's table from
/// stream derive_seed(derive_seed(seed, 1), i), each entry uniform on (0,1).
/// Throws MemoryGuardError when n * 2^(k+1) exceeds entry_cap.
Landscape generate_landscape(int n, int k, DependencyScheme scheme,
                             std::uint64_t seed,
                             std::uint64_t entry_cap = Landscape::kDefaultEntryCap);

/// Same contract as generate_landscape but reuses `out`'s table storage;
/// batch runners regenerate thousands of landscapes per worker this way.
void generate_landscape_into(Landscape& out, int n, int k, DependencyScheme scheme,
                             std::uint64_t seed,
                             std::uint64_t entry_cap = Landscape::kDefaultEntryCap);

struct GlobalOptimumReport {
  Configuration optimum_config;
  double optimum_fitness = 0.0;
  std::uint64_t local_optima_count = 0;
};

/// Scans all 2^n configurations; ties on the maximum break toward the lowest
/// packed encoding. Throws EnumerationCapError when n exceeds max_n.
GlobalOptimumReport enumerate_global_optimum(const Landscape& landscape, int max_n = 24);

/// Incremental fitness evaluation for single-bit flips. Keeps the packed
/// substate index and contribution of every node for a current configuration;
/// candidate_delta() prices a flip from the flip-effect lists alone, and
/// flip() commits one. The contribution sum is re-added over all n nodes on
/// each commit, so fitness() stays exactly equal to a fresh
/// overall_fitness() of the current configuration.
class IncrementalEvaluator {
 public:
  IncrementalEvaluator(const Landscape& landscape, const Configuration& start);

  void reset(const Configuration& config);

  const Configuration& config() const { return config_; }
  double contribution_sum() const { return sum_; }
  double fitness() const { return sum_ / landscape_->n(); }

  /// Change in the contribution sum if `node` were flipped; the candidate
  /// configuration's fitness is (contribution_sum() + delta) / n.
  double candidate_delta(int node) const;

  void flip(int node);

 private:
  const Landscape* landscape_;
  Configuration config_;
  std::vector<std::uint32_t> substates_;
  std::vector<double> contribs_;
  double sum_ = 0.0;
};

/// JSON document round-trip. `seed` is emitted as a decimal string (64-bit
/// values do not survive JSON number precision); import accepts either form
/// and validates all structural invariants.
std::string landscape_to_json(const Landscape& landscape);
Landscape landscape_from_json(const std::string& json_text);
void save_landscape(const Landscape& landscape, const std::string& path);
Landscape load_landscape(const std::string& path);

}  // namespace nkls
