#include "nkls/experiment.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "nkls/version.hpp"

namespace nkls {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kSmmls: return "smmls";
    case Algorithm::kImmls: return "immls";
    case Algorithm::kBoth: return "both";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "smmls") return Algorithm::kSmmls;
  if (s == "immls") return Algorithm::kImmls;
  if (s == "both") return Algorithm::kBoth;
  throw FormatError("unknown algorithm: " + s);
}

void ExperimentSpec::validate() const {
  if (n < 1) throw ParameterDomainError("experiment: n must be >= 1");
  if (k < 0 || k > n - 1) throw ParameterDomainError("experiment: k must be in [0, n-1]");
  if (iterations < 1) throw ParameterDomainError("experiment: iterations must be >= 1");
  if (budget_t < 1) throw ZeroBudgetError("experiment: budget_T must be >= 1");
}

namespace {

// Runs fn(replication, worker) for every replication on a small worker pool.
// Workers only write into per-replication slots, so the caller's subsequent
// in-order reduction is identical for every thread count.
void parallel_replications(std::uint64_t count, int threads,
                           const std::function<void(std::uint64_t, int)>& fn) {
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : static_cast<int>(hw);
  }
  if (static_cast<std::uint64_t>(threads) > count)
    threads = static_cast<int>(count);
  if (threads <= 1) {
    for (std::uint64_t r = 0; r < count; ++r) fn(r, 0);
    return;
  }

  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto body = [&](int worker) {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::uint64_t r = next.fetch_add(1, std::memory_order_relaxed);
      if (r >= count) return;
      try {
        fn(r, worker);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) pool.emplace_back(body, w);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct RepRecord {
  double initial_fitness = 0.0;
  double final_fitness = 0.0;
  double improvement = 0.0;
  double moves = 0.0;
  double evals = 0.0;
  double consumption_pct = 0.0;
  std::uint8_t equilibrium = 0;
};

RepRecord pack_record(const WalkResult& r, std::uint64_t budget) {
  RepRecord rec;
  rec.initial_fitness = r.initial_fitness;
  rec.final_fitness = r.final_fitness;
  rec.improvement = fitness_improvement(r);
  rec.moves = static_cast<double>(r.successful_moves);
  rec.evals = static_cast<double>(r.evaluations_used);
  rec.consumption_pct = resource_consumption_pct(r, budget);
  rec.equilibrium = r.termination == Termination::kEquilibrium ? 1 : 0;
  return rec;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

// Two-pass mean and standard error, accumulated in replication order.
template <typename Get>
MeanSe mean_se(const std::vector<RepRecord>& rows, Get get) {
  const auto count = static_cast<double>(rows.size());
  double sum = 0.0;
  for (const auto& row : rows) sum += get(row);
  const double mean = sum / count;
  if (rows.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const auto& row : rows) {
    const double d = get(row) - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / (count - 1.0) / count)};
}

WalkStats reduce_stats(const std::vector<RepRecord>& rows) {
  WalkStats stats;
  stats.iterations = rows.size();
  MeanSe m = mean_se(rows, [](const RepRecord& r) { return r.initial_fitness; });
  stats.mean_initial_fitness = m.mean;
  stats.se_initial_fitness = m.se;
  m = mean_se(rows, [](const RepRecord& r) { return r.final_fitness; });
  stats.mean_final_fitness = m.mean;
  stats.se_final_fitness = m.se;
  m = mean_se(rows, [](const RepRecord& r) { return r.improvement; });
  stats.mean_fitness_improvement = m.mean;
  stats.se_fitness_improvement = m.se;
  m = mean_se(rows, [](const RepRecord& r) { return r.moves; });
  stats.mean_successful_moves = m.mean;
  stats.se_successful_moves = m.se;
  m = mean_se(rows, [](const RepRecord& r) { return r.evals; });
  stats.mean_evaluations_used = m.mean;
  stats.se_evaluations_used = m.se;
  m = mean_se(rows, [](const RepRecord& r) { return r.consumption_pct; });
  stats.mean_resource_consumption_pct = m.mean;
  stats.se_resource_consumption_pct = m.se;
  double eq = 0.0;
  for (const auto& r : rows) eq += r.equilibrium;
  stats.equilibrium_fraction = eq / static_cast<double>(rows.size());
  return stats;
}

// Worker-resident landscape storage stays within a fixed byte budget; with
// big tables (n=20, k=19 is 168 MB) fewer workers run side by side.
int cap_threads_by_memory(int threads, int n, int k) {
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : static_cast<int>(hw);
  }
  if (k + 1 >= 40) return 1;  // generation will throw; keep it single-threaded
  const std::uint64_t bytes =
      static_cast<std::uint64_t>(n) * (1ull << (k + 1)) * sizeof(double);
  constexpr std::uint64_t kWorkerBudgetBytes = 6ull << 30;
  const std::uint64_t fit = bytes == 0 ? 64 : kWorkerBudgetBytes / (bytes + 1);
  if (fit < 1) return 1;
  return static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), fit));
}

}  // namespace

AggregateStats run_batch(const ExperimentSpec& spec, int threads) {
  spec.validate();
  const bool want_smmls = spec.algorithm != Algorithm::kImmls;
  const bool want_immls = spec.algorithm != Algorithm::kSmmls;

  std::vector<RepRecord> smmls_rows(want_smmls ? spec.iterations : 0);
  std::vector<RepRecord> immls_rows(want_immls ? spec.iterations : 0);

  threads = cap_threads_by_memory(threads, spec.n, spec.k);
  std::vector<Landscape> worker_landscape(static_cast<std::size_t>(
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(
                                     static_cast<std::uint64_t>(threads), spec.iterations))));

  parallel_replications(
      spec.iterations, threads, [&](std::uint64_t rep, int worker) {
        Landscape& ls = worker_landscape[static_cast<std::size_t>(worker)];
        generate_landscape_into(ls, spec.n, spec.k, spec.scheme,
                                replication_seed(spec.master_seed, kStreamLandscape, rep));
        SplitMix64 start_rng(replication_seed(spec.master_seed, kStreamStart, rep));
        const Configuration start = random_config(spec.n, start_rng);
        if (want_smmls) {
          SplitMix64 walk_rng(replication_seed(spec.master_seed, kStreamSmmls, rep));
          smmls_rows[rep] =
              pack_record(run_smmls(ls, start, Meter{spec.budget_t}, walk_rng), spec.budget_t);
        }
        if (want_immls) {
          SplitMix64 walk_rng(replication_seed(spec.master_seed, kStreamImmls, rep));
          immls_rows[rep] = pack_record(
              run_immls(ls, start, Meter{spec.budget_t}, spec.order_mode, &walk_rng),
              spec.budget_t);
        }
      });

  AggregateStats stats;
  stats.iterations = spec.iterations;
  if (want_smmls) stats.smmls = reduce_stats(smmls_rows);
  if (want_immls) stats.immls = reduce_stats(immls_rows);
  if (want_smmls && want_immls) {
    std::vector<RepRecord> diffs(spec.iterations);
    for (std::uint64_t r = 0; r < spec.iterations; ++r) {
      diffs[r].final_fitness = smmls_rows[r].final_fitness - immls_rows[r].final_fitness;
      diffs[r].moves = smmls_rows[r].moves - immls_rows[r].moves;
    }
    PairedStats paired;
    MeanSe m = mean_se(diffs, [](const RepRecord& r) { return r.final_fitness; });
    paired.mean_fitness_difference = m.mean;
    paired.se_fitness_difference = m.se;
    m = mean_se(diffs, [](const RepRecord& r) { return r.moves; });
    paired.mean_moves_difference = m.mean;
    paired.se_moves_difference = m.se;
    stats.paired = paired;
  }
  return stats;
}

namespace {

ComparisonRow row_from_stats(int n, int k, std::uint64_t t, const AggregateStats& stats) {
  ComparisonRow row;
  row.n = n;
  row.k = k;
  row.k_over_n = static_cast<double>(k) / static_cast<double>(n);
  row.t = t;
  row.fitness_difference = stats.paired->mean_fitness_difference;
  row.fitness_difference_se = stats.paired->se_fitness_difference;
  row.consumption_pct_smmls = stats.smmls->mean_resource_consumption_pct;
  row.consumption_pct_smmls_se = stats.smmls->se_resource_consumption_pct;
  row.consumption_pct_immls = stats.immls->mean_resource_consumption_pct;
  row.consumption_pct_immls_se = stats.immls->se_resource_consumption_pct;
  row.improvement_smmls = stats.smmls->mean_fitness_improvement;
  row.improvement_smmls_se = stats.smmls->se_fitness_improvement;
  row.improvement_immls = stats.immls->mean_fitness_improvement;
  row.improvement_immls_se = stats.immls->se_fitness_improvement;
  row.moves_smmls = stats.smmls->mean_successful_moves;
  row.moves_smmls_se = stats.smmls->se_successful_moves;
  row.moves_immls = stats.immls->mean_successful_moves;
  row.moves_immls_se = stats.immls->se_successful_moves;
  row.moves_difference = stats.paired->mean_moves_difference;
  row.moves_difference_se = stats.paired->se_moves_difference;
  return row;
}

TableMetadata make_meta(const std::string& table, const std::string& axis,
                        DependencyScheme scheme, SweepOrder order_mode,
                        std::uint64_t iterations, std::uint64_t master_seed) {
  TableMetadata meta;
  meta.table = table;
  meta.version = kVersion;
  meta.axis = axis;
  meta.scheme = scheme;
  meta.order_mode = order_mode;
  meta.iterations = iterations;
  meta.master_seed = master_seed;
  return meta;
}

}  // namespace

ComparisonTable compare_grid(int n, const std::vector<int>& k_values,
                             const std::vector<std::uint64_t>& t_values,
                             std::uint64_t iterations, std::uint64_t master_seed,
                             DependencyScheme scheme, SweepOrder order_mode,
                             int threads) {
  ComparisonTable table;
  table.meta = make_meta("comparison", "k", scheme, order_mode, iterations, master_seed);
  table.rows.reserve(k_values.size() * t_values.size());
  for (int k : k_values) {
    for (std::uint64_t t : t_values) {
      ExperimentSpec spec;
      spec.n = n;
      spec.k = k;
      spec.scheme = scheme;
      spec.algorithm = Algorithm::kBoth;
      spec.budget_t = t;
      spec.iterations = iterations;
      spec.master_seed = cell_seed(master_seed, n, k, t);
      spec.order_mode = order_mode;
      table.rows.push_back(row_from_stats(n, k, t, run_batch(spec, threads)));
    }
  }
  return table;
}

DockingTable dock(std::uint64_t iterations, std::uint64_t master_seed, int threads) {
  DockingTable table;
  table.meta = make_meta("docking", "k", DependencyScheme::kRandom, SweepOrder::kFixed,
                         iterations, master_seed);
  table.meta.budget = kDockingBudget;
  table.n = kDockingN;
  table.k_values.assign(std::begin(kDockingKValues), std::end(kDockingKValues));
  table.kauffman = {0.65, 0.70, 0.71, 0.68, 0.65};
  table.sendero = {0.67, 0.71, 0.70, 0.68, 0.64};
  table.smmls_paper = {0.66, 0.71, 0.71, 0.69, 0.64};

  for (int k : table.k_values) {
    ExperimentSpec spec;
    spec.n = kDockingN;
    spec.k = k;
    spec.scheme = DependencyScheme::kRandom;
    spec.algorithm = Algorithm::kSmmls;
    spec.budget_t = kDockingBudget;
    spec.iterations = iterations;
    spec.master_seed = cell_seed(master_seed, kDockingN, k, kDockingBudget);
    const AggregateStats stats = run_batch(spec, threads);
    table.smmls_measured.push_back(stats.smmls->mean_final_fitness);
    table.smmls_measured_se.push_back(stats.smmls->se_final_fitness);
  }
  for (std::size_t i = 0; i < table.k_values.size(); ++i) {
    table.abs_deviation.push_back(
        std::abs(table.smmls_measured[i] - table.smmls_paper[i]));
  }
  return table;
}

ComparisonTable robustness_sweep(const std::vector<std::uint64_t>& t_values,
                                 std::uint64_t iterations, std::uint64_t master_seed,
                                 int threads) {
  ComparisonTable table;
  table.meta = make_meta("comparison", "k_over_n", DependencyScheme::kRandom,
                         SweepOrder::kFixed, iterations, master_seed);
  for (int n = 16; n <= 20; ++n) {
    const int k = n - 1;
    for (std::uint64_t t : t_values) {
      ExperimentSpec spec;
      spec.n = n;
      spec.k = k;
      spec.scheme = DependencyScheme::kRandom;
      spec.algorithm = Algorithm::kBoth;
      spec.budget_t = t;
      spec.iterations = iterations;
      spec.master_seed = cell_seed(master_seed, n, k, t);
      spec.order_mode = SweepOrder::kFixed;
      table.rows.push_back(row_from_stats(n, k, t, run_batch(spec, threads)));
    }
  }
  return table;
}

namespace {

std::uint64_t u64_from_json(const nlohmann::json& value, const char* field) {
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    std::size_t pos = 0;
    const std::uint64_t parsed = std::stoull(s, &pos);
    if (pos != s.size())
      throw FormatError(std::string("experiment spec: malformed ") + field);
    return parsed;
  }
  if (value.is_number_unsigned() || value.is_number_integer())
    return value.get<std::uint64_t>();
  throw FormatError(std::string("experiment spec: ") + field +
                    " must be an integer or decimal string");
}

}  // namespace

ExperimentSpec experiment_spec_from_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("experiment spec: ") + e.what());
  }
  static const char* kFields[] = {"n",          "k",          "scheme",
                                  "algorithm",  "budget_T",   "iterations",
                                  "master_seed", "order_mode"};
  for (const char* field : kFields) {
    if (!doc.contains(field))
      throw FormatError(std::string("experiment spec: missing field ") + field);
  }
  for (const auto& [key, _] : doc.items()) {
    bool known = false;
    for (const char* field : kFields) known = known || key == field;
    if (!known) throw FormatError("experiment spec: unexpected field " + key);
  }
  try {
    ExperimentSpec spec;
    spec.n = doc["n"].get<int>();
    spec.k = doc["k"].get<int>();
    spec.scheme = dependency_scheme_from_string(doc["scheme"].get<std::string>());
    spec.algorithm = algorithm_from_string(doc["algorithm"].get<std::string>());
    spec.budget_t = u64_from_json(doc["budget_T"], "budget_T");
    spec.iterations = u64_from_json(doc["iterations"], "iterations");
    spec.master_seed = u64_from_json(doc["master_seed"], "master_seed");
    spec.order_mode = sweep_order_from_string(doc["order_mode"].get<std::string>());
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("experiment spec: ") + e.what());
  }
}

std::string experiment_spec_to_json(const ExperimentSpec& spec) {
  nlohmann::json doc;
  doc["n"] = spec.n;
  doc["k"] = spec.k;
  doc["scheme"] = to_string(spec.scheme);
  doc["algorithm"] = to_string(spec.algorithm);
  doc["budget_T"] = spec.budget_t;
  doc["iterations"] = spec.iterations;
  doc["master_seed"] = std::to_string(spec.master_seed);
  doc["order_mode"] = to_string(spec.order_mode);
  return doc.dump();
}

}  // namespace nkls
