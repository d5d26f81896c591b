#include "nkls/landscape.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace nkls {

std::string to_string(DependencyScheme scheme) {
  return scheme == DependencyScheme::kRandom ? "random" : "adjacent";
}

DependencyScheme dependency_scheme_from_string(const std::string& s) {
  if (s == "random") return DependencyScheme::kRandom;
  if (s == "adjacent") return DependencyScheme::kAdjacent;
  throw FormatError("unknown dependency scheme: " + s);
}

void InteractionMap::validate() const {
  if (n < 1) throw ParameterDomainError("interaction map: n must be >= 1");
  if (k < 0 || k > n - 1)
    throw ParameterDomainError("interaction map: k must be in [0, n-1]");
  if (deps.size() != static_cast<std::size_t>(n))
    throw ParameterDomainError("interaction map: deps must have one list per node");
  for (int i = 0; i < n; ++i) {
    const auto& d = deps[static_cast<std::size_t>(i)];
    if (d.size() != static_cast<std::size_t>(k))
      throw ParameterDomainError("interaction map: every node needs exactly k dependencies");
    std::vector<std::uint32_t> sorted(d);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      if (sorted[j] >= static_cast<std::uint32_t>(n))
        throw ParameterDomainError("interaction map: dependency index out of range");
      if (sorted[j] == static_cast<std::uint32_t>(i))
        throw ParameterDomainError("interaction map: node depends on itself");
      if (j > 0 && sorted[j] == sorted[j - 1])
        throw ParameterDomainError("interaction map: duplicate dependency");
    }
  }
}

InteractionMap build_interaction_map(int n, int k, DependencyScheme scheme,
                                     SplitMix64& rng) {
  if (n < 1) throw ParameterDomainError("build_interaction_map: n must be >= 1");
  if (k < 0 || k > n - 1)
    throw ParameterDomainError("build_interaction_map: k must be in [0, n-1]");

  InteractionMap im;
  im.n = n;
  im.k = k;
  im.deps.resize(static_cast<std::size_t>(n));

  if (scheme == DependencyScheme::kAdjacent) {
    for (int i = 0; i < n; ++i) {
      auto& d = im.deps[static_cast<std::size_t>(i)];
      d.reserve(static_cast<std::size_t>(k));
      for (int step = 1; step <= k; ++step)
        d.push_back(static_cast<std::uint32_t>((i + step) % n));
    }
    return im;
  }

  // random scheme: partial Fisher-Yates over the other n-1 nodes
  std::vector<std::uint32_t> pool(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) {
    std::uint32_t next = 0;
    for (auto& p : pool) {
      if (next == static_cast<std::uint32_t>(i)) ++next;
      p = next++;
    }
    auto& d = im.deps[static_cast<std::size_t>(i)];
    d.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      const std::size_t pick =
          static_cast<std::size_t>(j) +
          rng.uniform_below(static_cast<std::uint64_t>(n - 1 - j));
      std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
      d[static_cast<std::size_t>(j)] = pool[static_cast<std::size_t>(j)];
    }
  }
  return im;
}

void Landscape::build_flip_effects() {
  const auto n = static_cast<std::size_t>(n_);
  std::vector<std::vector<FlipEffect>> per(n);
  for (std::size_t j = 0; j < n; ++j)
    per[j].push_back({static_cast<std::uint32_t>(j), 1u});
  for (std::size_t i = 0; i < n; ++i) {
    const auto& deps = interactions_.deps[i];
    for (std::size_t d = 0; d < deps.size(); ++d) {
      per[deps[d]].push_back(
          {static_cast<std::uint32_t>(i), 1u << (d + 1)});
    }
  }
  effects_.clear();
  effect_offsets_.assign(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) {
    effect_offsets_[j] = effects_.size();
    effects_.insert(effects_.end(), per[j].begin(), per[j].end());
  }
  effect_offsets_[n] = effects_.size();
}

void generate_landscape_into(Landscape& out, int n, int k, DependencyScheme scheme,
                             std::uint64_t seed, std::uint64_t entry_cap) {
  if (n < 1) throw ParameterDomainError("generate_landscape: n must be >= 1");
  if (k < 0 || k > n - 1)
    throw ParameterDomainError("generate_landscape: k must be in [0, n-1]");
  if (k + 1 >= 40)  // 2^40 entries is far beyond any configurable cap in use
    throw MemoryGuardError("generate_landscape: table width 2^(k+1) too large");
  const std::uint64_t stride = 1ull << (k + 1);
  const std::uint64_t total = static_cast<std::uint64_t>(n) * stride;
  if (total > entry_cap) {
    std::ostringstream msg;
    msg << "generate_landscape: " << total << " table entries exceed the cap of "
        << entry_cap;
    throw MemoryGuardError(msg.str());
  }

  out.n_ = n;
  out.k_ = k;
  out.scheme_ = scheme;
  out.seed_ = seed;
  SplitMix64 dep_rng(derive_seed(seed, 0));
  out.interactions_ = build_interaction_map(n, k, scheme, dep_rng);
  out.stride_ = static_cast<std::size_t>(stride);
  out.tables_.resize(static_cast<std::size_t>(total));

  const std::uint64_t table_root = derive_seed(seed, 1);
  for (int i = 0; i < n; ++i) {
    SplitMix64 rng(derive_seed(table_root, static_cast<std::uint64_t>(i)));
    double* t = out.tables_.data() + static_cast<std::size_t>(i) * out.stride_;
    for (std::uint64_t s = 0; s < stride; ++s) t[s] = rng.uniform_open();
  }
  out.build_flip_effects();
}

Landscape generate_landscape(int n, int k, DependencyScheme scheme,
                             std::uint64_t seed, std::uint64_t entry_cap) {
  Landscape ls;
  generate_landscape_into(ls, n, k, scheme, seed, entry_cap);
  return ls;
}

Landscape Landscape::from_parts(int n, int k, DependencyScheme scheme,
                                std::uint64_t seed, InteractionMap interactions,
                                std::vector<std::vector<double>> tables) {
  if (n < 1) throw ParameterDomainError("landscape: n must be >= 1");
  if (k < 0 || k > n - 1) throw ParameterDomainError("landscape: k must be in [0, n-1]");
  if (interactions.n != n || interactions.k != k)
    throw ParameterDomainError("landscape: interaction map does not match (n, k)");
  interactions.validate();
  if (tables.size() != static_cast<std::size_t>(n))
    throw ParameterDomainError("landscape: one contribution table per node required");
  const std::size_t stride = static_cast<std::size_t>(1) << (k + 1);
  for (const auto& t : tables) {
    if (t.size() != stride)
      throw ParameterDomainError("landscape: every table needs exactly 2^(k+1) entries");
    for (double v : t) {
      if (!(v > 0.0 && v < 1.0))
        throw ParameterDomainError("landscape: contributions must lie strictly in (0,1)");
    }
  }

  Landscape ls;
  ls.n_ = n;
  ls.k_ = k;
  ls.scheme_ = scheme;
  ls.seed_ = seed;
  ls.interactions_ = std::move(interactions);
  ls.stride_ = stride;
  ls.tables_.reserve(static_cast<std::size_t>(n) * stride);
  for (const auto& t : tables) ls.tables_.insert(ls.tables_.end(), t.begin(), t.end());
  ls.build_flip_effects();
  return ls;
}

std::uint32_t Landscape::substate(const Configuration& config, int node) const {
  std::uint32_t index = config.bits[static_cast<std::size_t>(node)];
  const auto& deps = interactions_.deps[static_cast<std::size_t>(node)];
  for (std::size_t d = 0; d < deps.size(); ++d)
    index |= static_cast<std::uint32_t>(config.bits[deps[d]]) << (d + 1);
  return index;
}

double Landscape::overall_fitness(const Configuration& config) const {
  if (config.n() != n_)
    throw DimensionMismatchError("overall_fitness: configuration has wrong length");
  double total = 0.0;
  for (int i = 0; i < n_; ++i) total += table(i)[substate(config, i)];
  return total / n_;
}

bool Landscape::is_local_optimum(const Configuration& config) const {
  const double own = overall_fitness(config);
  Configuration neighbor = config;
  for (int j = 0; j < n_; ++j) {
    neighbor.bits[static_cast<std::size_t>(j)] ^= 1u;
    const double f = overall_fitness(neighbor);
    neighbor.bits[static_cast<std::size_t>(j)] ^= 1u;
    if (f >= own) return false;
  }
  return true;
}

IncrementalEvaluator::IncrementalEvaluator(const Landscape& landscape,
                                           const Configuration& start)
    : landscape_(&landscape) {
  reset(start);
}

void IncrementalEvaluator::reset(const Configuration& config) {
  const Landscape& ls = *landscape_;
  if (config.n() != ls.n())
    throw DimensionMismatchError("incremental evaluator: configuration has wrong length");
  config_ = config;
  const auto n = static_cast<std::size_t>(ls.n());
  substates_.resize(n);
  contribs_.resize(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    substates_[i] = ls.substate(config, static_cast<int>(i));
    contribs_[i] = ls.table(static_cast<int>(i))[substates_[i]];
    s += contribs_[i];
  }
  sum_ = s;
}

double IncrementalEvaluator::candidate_delta(int node) const {
  const Landscape& ls = *landscape_;
  double delta = 0.0;
  for (const FlipEffect& e : ls.flip_effects(node))
    delta += ls.table(static_cast<int>(e.node))[substates_[e.node] ^ e.mask] -
             contribs_[e.node];
  return delta;
}

void IncrementalEvaluator::flip(int node) {
  const Landscape& ls = *landscape_;
  for (const FlipEffect& e : ls.flip_effects(node)) {
    substates_[e.node] ^= e.mask;
    contribs_[e.node] = ls.table(static_cast<int>(e.node))[substates_[e.node]];
  }
  config_.bits[static_cast<std::size_t>(node)] ^= 1u;
  // left-to-right re-add keeps the running sum bit-identical to a fresh
  // overall_fitness of the current configuration
  double s = 0.0;
  for (double c : contribs_) s += c;
  sum_ = s;
}

GlobalOptimumReport enumerate_global_optimum(const Landscape& landscape, int max_n) {
  const int n = landscape.n();
  if (n > max_n || n > 62) {
    std::ostringstream msg;
    msg << "enumerate_global_optimum: n=" << n << " exceeds the cap of " << max_n;
    throw EnumerationCapError(msg.str());
  }
  const std::uint64_t total = 1ull << n;
  std::vector<double> fitness(total);

  // Gray-code walk: one bit flip per step covers all 2^n configurations.
  IncrementalEvaluator eval(landscape, Configuration::from_packed(0, n));
  std::uint64_t gray = 0;
  fitness[0] = eval.fitness();
  for (std::uint64_t v = 1; v < total; ++v) {
    const int bit = std::countr_zero(v);
    gray ^= 1ull << bit;
    eval.flip(bit);
    fitness[gray] = eval.fitness();
  }

  GlobalOptimumReport report;
  std::uint64_t best = 0;
  for (std::uint64_t v = 1; v < total; ++v) {
    if (fitness[v] > fitness[best]) best = v;  // strict: lowest encoding wins ties
  }
  report.optimum_config = Configuration::from_packed(best, n);
  report.optimum_fitness = fitness[best];

  for (std::uint64_t v = 0; v < total; ++v) {
    bool is_peak = true;
    for (int j = 0; j < n && is_peak; ++j)
      is_peak = fitness[v] > fitness[v ^ (1ull << j)];
    report.local_optima_count += is_peak;
  }
  return report;
}

namespace {

std::uint64_t seed_from_json(const nlohmann::json& value) {
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    std::size_t pos = 0;
    const std::uint64_t seed = std::stoull(s, &pos);
    if (pos != s.size()) throw FormatError("landscape json: malformed seed string");
    return seed;
  }
  if (value.is_number_unsigned() || value.is_number_integer())
    return value.get<std::uint64_t>();
  throw FormatError("landscape json: seed must be a decimal string or integer");
}

}  // namespace

std::string landscape_to_json(const Landscape& landscape) {
  nlohmann::json doc;
  doc["n"] = landscape.n();
  doc["k"] = landscape.k();
  doc["scheme"] = to_string(landscape.scheme());
  doc["seed"] = std::to_string(landscape.seed());
  doc["deps"] = landscape.interactions().deps;
  nlohmann::json tables = nlohmann::json::array();
  for (int i = 0; i < landscape.n(); ++i) {
    const auto t = landscape.table(i);
    tables.push_back(std::vector<double>(t.begin(), t.end()));
  }
  doc["tables"] = std::move(tables);
  return doc.dump();
}

Landscape landscape_from_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("landscape json: ") + e.what());
  }
  try {
    for (const char* field : {"n", "k", "scheme", "seed", "deps", "tables"}) {
      if (!doc.contains(field))
        throw FormatError(std::string("landscape json: missing field ") + field);
    }
    const int n = doc["n"].get<int>();
    const int k = doc["k"].get<int>();
    const DependencyScheme scheme =
        dependency_scheme_from_string(doc["scheme"].get<std::string>());
    const std::uint64_t seed = seed_from_json(doc["seed"]);
    InteractionMap im;
    im.n = n;
    im.k = k;
    im.deps = doc["deps"].get<std::vector<std::vector<std::uint32_t>>>();
    auto tables = doc["tables"].get<std::vector<std::vector<double>>>();
    return Landscape::from_parts(n, k, scheme, seed, std::move(im), std::move(tables));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("landscape json: ") + e.what());
  }
}

void save_landscape(const Landscape& landscape, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << landscape_to_json(landscape);
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

Landscape load_landscape(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return landscape_from_json(buf.str());
}

}  // namespace nkls
