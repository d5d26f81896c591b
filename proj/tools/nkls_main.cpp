// nkls: metered local search on NK fitness landscapes.
//
// Subcommands: dock, sweep, robustness, walk, oracle. Every run echoes its
// fully resolved configuration on stderr and embeds it in output metadata,
// so any emitted table can be regenerated from its own header.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "nkls/experiment.hpp"
#include "nkls/report.hpp"
#include "nkls/version.hpp"

using namespace nkls;

namespace {

// "a..b" (inclusive) or comma list; mixes allowed: "0..3,8,15"
std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> values;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token.empty()) throw ParameterDomainError("empty entry in list: " + text);
    const auto dots = token.find("..");
    try {
      if (dots == std::string::npos) {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(token, &pos);
        if (pos != token.size()) throw std::invalid_argument(token);
        values.push_back(v);
       } else {
        std::size_t pos = 0;
        const std::string lo_text = token.substr(0, dots);
        const std::string hi_text = token.substr(dots + 2);
        const std::int64_t lo = std::stoll(lo_text, &pos);
        if (pos != lo_text.size()) throw std::invalid_argument(token);
        const std::int64_t hi = std::stoll(hi_text, &pos);
        if (pos != hi_text.size()) throw std::invalid_argument(token);
        if (hi < lo) throw ParameterDomainError("descending range: " + token);
        for (std::int64_t v = lo; v <= hi; ++v) values.push_back(v);
      }
    } catch (const ParameterDomainError&) {
      throw;
    } catch (const std::exception&) {
      throw ParameterDomainError("malformed list entry: " + token);
    }
  }
  if (values.empty()) throw ParameterDomainError("empty list: " + text);
  return values;
}

std::vector<int> as_int_vector(const std::vector<std::int64_t>& values) {
  return {values.begin(), values.end()};
}

std::vector<std::uint64_t> as_u64_vector(const std::vector<std::int64_t>& values) {
  std::vector<std::uint64_t> out;
  for (auto v : values) {
    if (v < 1) throw ParameterDomainError("value must be >= 1: " + std::to_string(v));
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

struct GlobalOptions {
  std::uint64_t seed = 42;
  std::uint64_t iterations = 10000;
  std::string out = "-";
  std::string format = "csv";
  int threads = 0;

  TableFormat table_format() const {
    return format == "json" ? TableFormat::kJson : TableFormat::kCsv;
  }
};

void emit(const std::string& text, const std::string& out) {
  if (out == "-") {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw IoError("cannot open for writing: " + out);
  file << text;
  file.flush();
  if (!file) throw IoError("write failed: " + out);
}

void echo_resolved(const std::string& line) { std::fprintf(stderr, "resolved: %s\n", line.c_str()); }

int cmd_dock(const GlobalOptions& g, double tolerance) {
  std::ostringstream resolved;
  resolved << "dock --iterations " << g.iterations << " --seed " << g.seed
           << " --tolerance " << tolerance << " --threads " << g.threads << " --format "
           << g.format << " --out " << g.out;
  echo_resolved(resolved.str());

  DockingTable table = dock(g.iterations, g.seed, g.threads);
  table.meta.command = resolved.str();
  emit(g.table_format() == TableFormat::kCsv ? docking_to_csv(table)
                                             : docking_to_json(table),
       g.out);
  std::fputs(summarize(table, tolerance).c_str(), stderr);
  return table.max_abs_deviation() <= tolerance ? 0 : 1;
}

int cmd_sweep(const GlobalOptions& g, int n, const std::string& k_list,
              const std::string& t_list, const std::string& scheme,
              const std::string& order_mode) {
  std::ostringstream resolved;
  resolved << "sweep --n " << n << " --k-list " << k_list << " --t-list " << t_list
           << " --scheme " << scheme << " --order-mode " << order_mode
           << " --iterations " << g.iterations << " --seed " << g.seed << " --threads "
           << g.threads << " --format " << g.format << " --out " << g.out;
  echo_resolved(resolved.str());

  ComparisonTable table = compare_grid(
      n, as_int_vector(parse_int_list(k_list)), as_u64_vector(parse_int_list(t_list)),
      g.iterations, g.seed, dependency_scheme_from_string(scheme),
      sweep_order_from_string(order_mode), g.threads);
  table.meta.command = resolved.str();
  emit(g.table_format() == TableFormat::kCsv ? comparison_to_csv(table)
                                             : comparison_to_json(table),
       g.out);
  std::fputs(summarize(table).c_str(), stderr);
  return 0;
}

int cmd_robustness(const GlobalOptions& g, const std::string& t_list) {
  std::ostringstream resolved;
  resolved << "robustness --t-list " << t_list << " --iterations " << g.iterations
           << " --seed " << g.seed << " --threads " << g.threads << " --format "
           << g.format << " --out " << g.out;
  echo_resolved(resolved.str());

  ComparisonTable table = robustness_sweep(as_u64_vector(parse_int_list(t_list)),
                                           g.iterations, g.seed, g.threads);
  table.meta.command = resolved.str();
  emit(g.table_format() == TableFormat::kCsv ? comparison_to_csv(table)
                                             : comparison_to_json(table),
       g.out);
  std::fputs(summarize(table).c_str(), stderr);
  return 0;
}

int cmd_walk(const GlobalOptions& g, const std::string& algorithm, int n, int k,
             std::uint64_t t, bool trace) {
  std::ostringstream resolved;
  resolved << "walk --algorithm " << algorithm << " --n " << n << " --k " << k << " --t "
           << t << (trace ? " --trace" : "") << " --seed " << g.seed;
  echo_resolved(resolved.str());

  // a walk reproduces replication 0 of a batch with the same master seed
  const Landscape ls = generate_landscape(
      n, k, DependencyScheme::kRandom, replication_seed(g.seed, kStreamLandscape, 0));
  SplitMix64 start_rng(replication_seed(g.seed, kStreamStart, 0));
  const Configuration start = random_config(n, start_rng);

  std::ostringstream out;
  const TraceSink sink = [&](const TraceEvent& e) {
    out << "eval step=" << e.time_step << " node=" << e.node << " candidate=";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", e.candidate_fitness);
    out << buf << " accept=" << (e.accepted ? 1 : 0) << " meter=" << e.meter_consumed
        << "\n";
  };

  WalkResult r;
  if (algorithm == "smmls") {
    SplitMix64 rng(replication_seed(g.seed, kStreamSmmls, 0));
    r = run_smmls(ls, start, Meter{t}, rng, trace ? sink : TraceSink{});
  } else {
    SplitMix64 rng(replication_seed(g.seed, kStreamImmls, 0));
    r = run_immls(ls, start, Meter{t}, SweepOrder::kFixed, &rng,
                  trace ? sink : TraceSink{});
  }

  char buf[64];
  out << "algorithm: " << algorithm << "\n";
  out << "n: " << n << "\nk: " << k << "\nbudget: " << t << "\n";
  out << "initial_config: " << r.initial_config.to_string() << "\n";
  std::snprintf(buf, sizeof buf, "%.6f", r.initial_fitness);
  out << "initial_fitness: " << buf << "\n";
  out << "final_config: " << r.final_config.to_string() << "\n";
  std::snprintf(buf, sizeof buf, "%.6f", r.final_fitness);
  out << "final_fitness: " << buf << "\n";
  out << "evaluations_used: " << r.evaluations_used << "\n";
  out << "successful_moves: " << r.successful_moves << "\n";
  out << "time_steps_executed: " << r.time_steps_executed << "\n";
  out << "termination: " << to_string(r.termination) << "\n";
  std::fputs(out.str().c_str(), stdout);
  return 0;
}

int cmd_oracle(const GlobalOptions& g, int n, int k) {
  std::ostringstream resolved;
  resolved << "oracle --n " << n << " --k " << k << " --seed " << g.seed;
  echo_resolved(resolved.str());

  const std::uint64_t landscape_seed = replication_seed(g.seed, kStreamLandscape, 0);
  const Landscape ls = generate_landscape(n, k, DependencyScheme::kRandom, landscape_seed);
  const GlobalOptimumReport report = enumerate_global_optimum(ls);

  std::ostringstream out;
  char buf[64];
  out << "n: " << n << "\nk: " << k << "\nseed: " << g.seed << "\nlandscape_seed: "
      << landscape_seed << "\n";
  out << "optimum: " << report.optimum_config.to_string() << "\n";
  out << "optimum_packed: " << report.optimum_config.packed() << "\n";
  std::snprintf(buf, sizeof buf, "%.6f", report.optimum_fitness);
  out << "optimum_fitness: " << buf << "\n";
  out << "local_optima: " << report.local_optima_count << "\n";
  std::fputs(out.str().c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("nkls ") + kVersion +
               " - metered local search on NK fitness landscapes"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "master seed (default 42)");
  app.add_option("--iterations", g.iterations, "replications per cell (default 10000)");
  app.add_option("--out", g.out, "output path, '-' for stdout (default '-')");
  app.add_option("--format", g.format, "table format (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "worker threads, 0 = auto (default 0)");

  auto* dock_cmd = app.add_subcommand("dock", "reproduce the reference fitness table");
  double tolerance = 0.01;
  dock_cmd->add_option("--tolerance", tolerance,
                       "max allowed |measured - published| (default 0.01)");
  dock_cmd->fallthrough();

  auto* sweep_cmd = app.add_subcommand("sweep", "paired SMMLS/IMMLS grid over (K, T)");
  int sweep_n = 16;
  std::string k_list = "0..15";
  std::string t_list = "10,50,100,200";
  std::string scheme = "random";
  std::string order_mode = "fixed";
  sweep_cmd->add_option("--n", sweep_n, "node count (default 16)");
  sweep_cmd->add_option("--k-list", k_list, "K values, e.g. 0..15 or 0,2,4 (default 0..15)");
  sweep_cmd->add_option("--t-list", t_list, "budgets, e.g. 10,50,100,200");
  sweep_cmd->add_option("--scheme", scheme, "dependency scheme (default random)")
      ->check(CLI::IsMember({"random", "adjacent"}));
  sweep_cmd->add_option("--order-mode", order_mode, "IMMLS sweep order (default fixed)")
      ->check(CLI::IsMember({"fixed", "permuted"}));
  sweep_cmd->fallthrough();

  auto* robustness_cmd =
      app.add_subcommand("robustness", "K = N-1 diagonal for N = 16..20");
  std::string robustness_t_list = "10,50,100,200";
  robustness_cmd->add_option("--t-list", robustness_t_list, "budgets (default 10,50,100,200)");
  robustness_cmd->fallthrough();

  auto* walk_cmd = app.add_subcommand("walk", "run one metered walk");
  std::string algorithm;
  int walk_n = 16, walk_k = 4;
  std::uint64_t walk_t = 100;
  bool trace = false;
  walk_cmd->add_option("--algorithm", algorithm, "smmls or immls")
      ->required()
      ->check(CLI::IsMember({"smmls", "immls"}));
  walk_cmd->add_option("--n", walk_n, "node count (default 16)");
  walk_cmd->add_option("--k", walk_k, "interdependence degree (default 4)");
  walk_cmd->add_option("--t", walk_t, "evaluation budget (default 100)");
  walk_cmd->add_flag("--trace", trace, "print every evaluation");
  walk_cmd->fallthrough();

  auto* oracle_cmd =
      app.add_subcommand("oracle", "exhaustive global optimum and local-optima count");
  int oracle_n = 16, oracle_k = 4;
  oracle_cmd->add_option("--n", oracle_n, "node count, at most 24 (default 16)");
  oracle_cmd->add_option("--k", oracle_k, "interdependence degree (default 4)");
  oracle_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion") {
      return app.exit(e);
    }
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (dock_cmd->parsed()) return cmd_dock(g, tolerance);
    if (sweep_cmd->parsed()) return cmd_sweep(g, sweep_n, k_list, t_list, scheme, order_mode);
    if (robustness_cmd->parsed()) return cmd_robustness(g, robustness_t_list);
    if (walk_cmd->parsed()) return cmd_walk(g, algorithm, walk_n, walk_k, walk_t, trace);
    if (oracle_cmd->parsed()) return cmd_oracle(g, oracle_n, oracle_k);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
