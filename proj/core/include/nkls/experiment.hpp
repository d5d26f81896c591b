#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nkls/landscape.hpp"
#include "nkls/search.hpp"
#include "nkls/tables.hpp"

namespace nkls {

enum class Algorithm { kSmmls, kImmls, kBoth };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

/// Stream identifiers for the splittable seed construction. For replication
/// r of a batch with master seed M, the stream seeds are
///   derive_seed(derive_seed(M, id), r)
/// so distinct replications and distinct roles never share a stream.
enum StreamId : std::uint64_t {
  kStreamLandscape = 0,
  kStreamStart = 1,
  kStreamSmmls = 2,
  kStreamImmls = 3,
  kStreamCell = 4,  // grid runners derive one sub-master per (n, k, T) cell
};

inline std::uint64_t replication_seed(std::uint64_t master_seed, StreamId id,
                                      std::uint64_t replication) {
  return derive_seed(derive_seed(master_seed, id), replication);
}

/// Sub-master for one grid cell; depends only on (master, n, k, t), so a
/// cell's results do not change when other cells are added to a sweep.
inline std::uint64_t cell_seed(std::uint64_t master_seed, int n, int k, std::uint64_t t) {
  std::uint64_t s = derive_seed(master_seed, kStreamCell);
  s = derive_seed(s, static_cast<std::uint64_t>(n));
  s = derive_seed(s, static_cast<std::uint64_t>(k));
  return derive_seed(s, t);
}

struct ExperimentSpec {
  int n = 16;
  int k = 0;
  DependencyScheme scheme = DependencyScheme::kRandom;
  Algorithm algorithm = Algorithm::kBoth;
  std::uint64_t budget_t = 100;
  std::uint64_t iterations = 10000;
  std::uint64_t master_seed = 42;
  SweepOrder order_mode = SweepOrder::kFixed;

  void validate() const;
};

/// JSON round-trip; field names: n, k, scheme, algorithm, budget_T,
/// iterations, master_seed (number or decimal string), order_mode.
ExperimentSpec experiment_spec_from_json(const std::string& json_text);
std::string experiment_spec_to_json(const ExperimentSpec& spec);

/// Per-algorithm means over the batch, each with its standard error.
struct WalkStats {
  double mean_initial_fitness = 0.0, se_initial_fitness = 0.0;
  double mean_final_fitness = 0.0, se_final_fitness = 0.0;
  double mean_fitness_improvement = 0.0, se_fitness_improvement = 0.0;
  double mean_successful_moves = 0.0, se_successful_moves = 0.0;
  double mean_evaluations_used = 0.0, se_evaluations_used = 0.0;
  double mean_resource_consumption_pct = 0.0, se_resource_consumption_pct = 0.0;
  double equilibrium_fraction = 0.0;
  std::uint64_t iterations = 0;
};

/// Paired per-replication differences, SMMLS minus IMMLS.
struct PairedStats {
  double mean_fitness_difference = 0.0, se_fitness_difference = 0.0;
  double mean_moves_difference = 0.0, se_moves_difference = 0.0;
};

struct AggregateStats {
  std::optional<WalkStats> smmls;
  std::optional<WalkStats> immls;
  std::optional<PairedStats> paired;  // present when both algorithms ran
  std::uint64_t iterations = 0;
};

/// Runs `spec.iterations` independent replications: replication r draws its
/// landscape from (master_seed, r), one random start, and a fresh meter per
/// walker. With Algorithm::kBoth both walkers share the landscape and the
/// start, so difference statistics are paired. Replications may execute on
/// `threads` workers (0 = hardware concurrency); aggregation is in
/// replication order, so results are identical for any thread count.
AggregateStats run_batch(const ExperimentSpec& spec, int threads = 0);

/// One paired run_batch per (k, T) cell; rows ordered k-major.
ComparisonTable compare_grid(int n, const std::vector<int>& k_values,
                             const std::vector<std::uint64_t>& t_values,
                             std::uint64_t iterations, std::uint64_t master_seed,
                             DependencyScheme scheme = DependencyScheme::kRandom,
                             SweepOrder order_mode = SweepOrder::kFixed,
                             int threads = 0);

inline constexpr std::uint64_t kDockingBudget = 1ull << 16;
inline constexpr int kDockingN = 16;
inline constexpr int kDockingKValues[] = {0, 2, 4, 8, 15};

/// Runs SMMLS to stagnation (budget 2^16) at n=16 over the reference K
/// values and tabulates the measured means beside the published rows.
DockingTable dock(std::uint64_t iterations, std::uint64_t master_seed, int threads = 0);

/// Paired comparison along the maximum-interdependence diagonal
/// (n, k) = (16,15)..(20,19); rows carry k/n as the complexity axis.
ComparisonTable robustness_sweep(const std::vector<std::uint64_t>& t_values,
                                 std::uint64_t iterations, std::uint64_t master_seed,
                                 int threads = 0);

}  // namespace nkls
