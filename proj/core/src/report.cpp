#include "nkls/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace nkls {

namespace {

constexpr const char* kComparisonHeader =
    "n,k,k_over_n,t,fitness_difference,fitness_difference_se,"
    "consumption_pct_smmls,consumption_pct_smmls_se,"
    "consumption_pct_immls,consumption_pct_immls_se,"
    "improvement_smmls,improvement_smmls_se,improvement_immls,improvement_immls_se,"
    "moves_smmls,moves_smmls_se,moves_immls,moves_immls_se,"
    "moves_difference,moves_difference_se";

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void require_finite(double v) {
  if (!std::isfinite(v)) throw FormatError("refusing to serialize a non-finite value");
}

void require_finite(const ComparisonRow& r) {
  for (double v : {r.k_over_n, r.fitness_difference, r.fitness_difference_se,
                   r.consumption_pct_smmls, r.consumption_pct_smmls_se,
                   r.consumption_pct_immls, r.consumption_pct_immls_se,
                   r.improvement_smmls, r.improvement_smmls_se, r.improvement_immls,
                   r.improvement_immls_se, r.moves_smmls, r.moves_smmls_se,
                   r.moves_immls, r.moves_immls_se, r.moves_difference,
                   r.moves_difference_se}) {
    require_finite(v);
  }
}

void require_finite(const DockingTable& t) {
  for (const auto* row : {&t.kauffman, &t.sendero, &t.smmls_paper, &t.smmls_measured,
                          &t.smmls_measured_se, &t.abs_deviation}) {
    for (double v : *row) require_finite(v);
  }
}

void append_meta(std::ostringstream& out, const TableMetadata& meta) {
  out << "# table: " << meta.table << "\n";
  out << "# version: " << meta.version << "\n";
  out << "# axis: " << meta.axis << "\n";
  out << "# scheme: " << to_string(meta.scheme) << "\n";
  out << "# order_mode: " << to_string(meta.order_mode) << "\n";
  out << "# iterations: " << meta.iterations << "\n";
  out << "# master_seed: " << meta.master_seed << "\n";
  if (meta.budget != 0) out << "# budget: " << meta.budget << "\n";
  if (!meta.command.empty()) out << "# command: " << meta.command << "\n";
}

// "# key: value" -> (key, value)
bool parse_meta_line(const std::string& line, std::string& key, std::string& value) {
  if (line.rfind("# ", 0) != 0) return false;
  const auto colon = line.find(": ");
  if (colon == std::string::npos || colon < 2) return false;
  key = line.substr(2, colon - 2);
  value = line.substr(colon + 2);
  return true;
}

void apply_meta(TableMetadata& meta, const std::string& key, const std::string& value) {
  try {
    if (key == "table") meta.table = value;
    else if (key == "version") meta.version = value;
    else if (key == "axis") meta.axis = value;
    else if (key == "scheme") meta.scheme = dependency_scheme_from_string(value);
    else if (key == "order_mode") meta.order_mode = sweep_order_from_string(value);
    else if (key == "iterations") meta.iterations = std::stoull(value);
    else if (key == "master_seed") meta.master_seed = std::stoull(value);
    else if (key == "budget") meta.budget = std::stoull(value);
    else if (key == "command") meta.command = value;
  } catch (const std::exception&) {
    throw FormatError("csv metadata: malformed value for " + key);
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw FormatError("csv: malformed number " + s);
  return v;
}

long long to_ll(const std::string& s) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') throw FormatError("csv: malformed integer " + s);
  return v;
}

}  // namespace

std::string comparison_to_csv(const ComparisonTable& table) {
  for (const auto& row : table.rows) require_finite(row);
  std::ostringstream out;
  append_meta(out, table.meta);
  out << kComparisonHeader << "\n";
  for (const auto& r : table.rows) {
    out << r.n << ',' << r.k << ',' << fmt6(r.k_over_n) << ',' << r.t << ','
        << fmt6(r.fitness_difference) << ',' << fmt6(r.fitness_difference_se) << ','
        << fmt6(r.consumption_pct_smmls) << ',' << fmt6(r.consumption_pct_smmls_se) << ','
        << fmt6(r.consumption_pct_immls) << ',' << fmt6(r.consumption_pct_immls_se) << ','
        << fmt6(r.improvement_smmls) << ',' << fmt6(r.improvement_smmls_se) << ','
        << fmt6(r.improvement_immls) << ',' << fmt6(r.improvement_immls_se) << ','
        << fmt6(r.moves_smmls) << ',' << fmt6(r.moves_smmls_se) << ','
        << fmt6(r.moves_immls) << ',' << fmt6(r.moves_immls_se) << ','
        << fmt6(r.moves_difference) << ',' << fmt6(r.moves_difference_se) << "\n";
  }
  return out.str();
}

ComparisonTable comparison_from_csv(const std::string& text) {
  ComparisonTable table;
  std::istringstream in(text);
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind('#', 0) == 0) {
      std::string key, value;
      if (parse_meta_line(line, key, value)) apply_meta(table.meta, key, value);
      continue;
    }
    if (!saw_header) {
      if (line != kComparisonHeader)
        throw FormatError("comparison csv: unexpected header row");
      saw_header = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 20) throw FormatError("comparison csv: wrong column count");
    ComparisonRow r;
    r.n = static_cast<int>(to_ll(f[0]));
    r.k = static_cast<int>(to_ll(f[1]));
    r.k_over_n = to_double(f[2]);
    r.t = static_cast<std::uint64_t>(to_ll(f[3]));
    r.fitness_difference = to_double(f[4]);
    r.fitness_difference_se = to_double(f[5]);
    r.consumption_pct_smmls = to_double(f[6]);
    r.consumption_pct_smmls_se = to_double(f[7]);
    r.consumption_pct_immls = to_double(f[8]);
    r.consumption_pct_immls_se = to_double(f[9]);
    r.improvement_smmls = to_double(f[10]);
    r.improvement_smmls_se = to_double(f[11]);
    r.improvement_immls = to_double(f[12]);
    r.improvement_immls_se = to_double(f[13]);
    r.moves_smmls = to_double(f[14]);
    r.moves_smmls_se = to_double(f[15]);
    r.moves_immls = to_double(f[16]);
    r.moves_immls_se = to_double(f[17]);
    r.moves_difference = to_double(f[18]);
    r.moves_difference_se = to_double(f[19]);
    table.rows.push_back(r);
  }
  if (!saw_header) throw FormatError("comparison csv: missing header row");
  return table;
}

std::string docking_to_csv(const DockingTable& table) {
  require_finite(table);
  std::ostringstream out;
  append_meta(out, table.meta);
  out << "# n: " << table.n << "\n";
  out << "source";
  for (int k : table.k_values) out << ",k" << k;
  out << "\n";
  const std::pair<const char*, const std::vector<double>*> rows[] = {
      {"kauffman", &table.kauffman},
      {"sendero", &table.sendero},
      {"smmls_paper", &table.smmls_paper},
      {"smmls_measured", &table.smmls_measured},
  };
  for (const auto& [name, values] : rows) {
    if (values->size() != table.k_values.size())
      throw FormatError("docking table: row length does not match k_values");
    out << name;
    for (double v : *values) out << ',' << fmt6(v);
    out << "\n";
  }
  return out.str();
}

DockingTable docking_from_csv(const std::string& text) {
  DockingTable table;
  table.k_values.clear();
  std::istringstream in(text);
  std::string line;
  bool saw_header = false;
  std::map<std::string, std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind('#', 0) == 0) {
      std::string key, value;
      if (parse_meta_line(line, key, value)) {
        if (key == "n") {
          table.n = static_cast<int>(to_ll(value));
        } else {
          apply_meta(table.meta, key, value);
        }
      }
      continue;
    }
    const auto f = split_csv(line);
    if (!saw_header) {
      if (f.empty() || f[0] != "source")
        throw FormatError("docking csv: unexpected header row");
      for (std::size_t i = 1; i < f.size(); ++i) {
        if (f[i].size() < 2 || f[i][0] != 'k')
          throw FormatError("docking csv: malformed column " + f[i]);
        table.k_values.push_back(static_cast<int>(to_ll(f[i].substr(1))));
      }
      saw_header = true;
      continue;
    }
    if (f.size() != table.k_values.size() + 1)
      throw FormatError("docking csv: wrong column count");
    std::vector<double> values;
    for (std::size_t i = 1; i < f.size(); ++i) values.push_back(to_double(f[i]));
    rows[f[0]] = std::move(values);
  }
  if (!saw_header) throw FormatError("docking csv: missing header row");
  for (const char* name : {"kauffman", "sendero", "smmls_paper", "smmls_measured"}) {
    if (rows.find(name) == rows.end())
      throw FormatError(std::string("docking csv: missing row ") + name);
  }
  table.kauffman = rows["kauffman"];
  table.sendero = rows["sendero"];
  table.smmls_paper = rows["smmls_paper"];
  table.smmls_measured = rows["smmls_measured"];
  table.smmls_measured_se.assign(table.k_values.size(), 0.0);  // not carried by csv
  table.abs_deviation.clear();
  for (std::size_t i = 0; i < table.k_values.size(); ++i)
    table.abs_deviation.push_back(std::abs(table.smmls_measured[i] - table.smmls_paper[i]));
  return table;
}

namespace {

nlohmann::json meta_to_json(const TableMetadata& meta) {
  nlohmann::json doc;
  doc["version"] = meta.version;
  doc["axis"] = meta.axis;
  doc["scheme"] = to_string(meta.scheme);
  doc["order_mode"] = to_string(meta.order_mode);
  doc["iterations"] = meta.iterations;
  doc["master_seed"] = std::to_string(meta.master_seed);
  if (meta.budget != 0) doc["budget"] = meta.budget;
  if (!meta.command.empty()) doc["command"] = meta.command;
  return doc;
}

TableMetadata meta_from_json(const nlohmann::json& doc, const std::string& table) {
  TableMetadata meta;
  meta.table = table;
  meta.version = doc.at("version").get<std::string>();
  meta.axis = doc.at("axis").get<std::string>();
  meta.scheme = dependency_scheme_from_string(doc.at("scheme").get<std::string>());
  meta.order_mode = sweep_order_from_string(doc.at("order_mode").get<std::string>());
  meta.iterations = doc.at("iterations").get<std::uint64_t>();
  meta.master_seed = std::stoull(doc.at("master_seed").get<std::string>());
  if (doc.contains("budget")) meta.budget = doc.at("budget").get<std::uint64_t>();
  if (doc.contains("command")) meta.command = doc.at("command").get<std::string>();
  return meta;
}

}  // namespace

std::string comparison_to_json(const ComparisonTable& table) {
  for (const auto& row : table.rows) require_finite(row);
  nlohmann::json doc;
  doc["table"] = "comparison";
  doc["metadata"] = meta_to_json(table.meta);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"n", r.n},
                    {"k", r.k},
                    {"k_over_n", r.k_over_n},
                    {"t", r.t},
                    {"fitness_difference", r.fitness_difference},
                    {"fitness_difference_se", r.fitness_difference_se},
                    {"consumption_pct_smmls", r.consumption_pct_smmls},
                    {"consumption_pct_smmls_se", r.consumption_pct_smmls_se},
                    {"consumption_pct_immls", r.consumption_pct_immls},
                    {"consumption_pct_immls_se", r.consumption_pct_immls_se},
                    {"improvement_smmls", r.improvement_smmls},
                    {"improvement_smmls_se", r.improvement_smmls_se},
                    {"improvement_immls", r.improvement_immls},
                    {"improvement_immls_se", r.improvement_immls_se},
                    {"moves_smmls", r.moves_smmls},
                    {"moves_smmls_se", r.moves_smmls_se},
                    {"moves_immls", r.moves_immls},
                    {"moves_immls_se", r.moves_immls_se},
                    {"moves_difference", r.moves_difference},
                    {"moves_difference_se", r.moves_difference_se}});
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

ComparisonTable comparison_from_json(const std::string& text) {
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.at("table") != "comparison")
      throw FormatError("comparison json: wrong table kind");
    ComparisonTable table;
    table.meta = meta_from_json(doc.at("metadata"), "comparison");
    for (const auto& j : doc.at("rows")) {
      ComparisonRow r;
      r.n = j.at("n").get<int>();
      r.k = j.at("k").get<int>();
      r.k_over_n = j.at("k_over_n").get<double>();
      r.t = j.at("t").get<std::uint64_t>();
      r.fitness_difference = j.at("fitness_difference").get<double>();
      r.fitness_difference_se = j.at("fitness_difference_se").get<double>();
      r.consumption_pct_smmls = j.at("consumption_pct_smmls").get<double>();
      r.consumption_pct_smmls_se = j.at("consumption_pct_smmls_se").get<double>();
      r.consumption_pct_immls = j.at("consumption_pct_immls").get<double>();
      r.consumption_pct_immls_se = j.at("consumption_pct_immls_se").get<double>();
      r.improvement_smmls = j.at("improvement_smmls").get<double>();
      r.improvement_smmls_se = j.at("improvement_smmls_se").get<double>();
      r.improvement_immls = j.at("improvement_immls").get<double>();
      r.improvement_immls_se = j.at("improvement_immls_se").get<double>();
      r.moves_smmls = j.at("moves_smmls").get<double>();
      r.moves_smmls_se = j.at("moves_smmls_se").get<double>();
      r.moves_immls = j.at("moves_immls").get<double>();
      r.moves_immls_se = j.at("moves_immls_se").get<double>();
      r.moves_difference = j.at("moves_difference").get<double>();
      r.moves_difference_se = j.at("moves_difference_se").get<double>();
      table.rows.push_back(r);
    }
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("comparison json: ") + e.what());
  }
}

std::string docking_to_json(const DockingTable& table) {
  require_finite(table);
  nlohmann::json doc;
  doc["table"] = "docking";
  doc["metadata"] = meta_to_json(table.meta);
  doc["n"] = table.n;
  doc["k_values"] = table.k_values;
  doc["kauffman"] = table.kauffman;
  doc["sendero"] = table.sendero;
  doc["smmls_paper"] = table.smmls_paper;
  doc["smmls_measured"] = table.smmls_measured;
  doc["smmls_measured_se"] = table.smmls_measured_se;
  doc["abs_deviation"] = table.abs_deviation;
  return doc.dump(2) + "\n";
}

DockingTable docking_from_json(const std::string& text) {
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.at("table") != "docking") throw FormatError("docking json: wrong table kind");
    DockingTable table;
    table.meta = meta_from_json(doc.at("metadata"), "docking");
    table.n = doc.at("n").get<int>();
    table.k_values = doc.at("k_values").get<std::vector<int>>();
    table.kauffman = doc.at("kauffman").get<std::vector<double>>();
    table.sendero = doc.at("sendero").get<std::vector<double>>();
    table.smmls_paper = doc.at("smmls_paper").get<std::vector<double>>();
    table.smmls_measured = doc.at("smmls_measured").get<std::vector<double>>();
    table.smmls_measured_se = doc.at("smmls_measured_se").get<std::vector<double>>();
    table.abs_deviation = doc.at("abs_deviation").get<std::vector<double>>();
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("docking json: ") + e.what());
  }
}

namespace {

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

void write_comparison(const ComparisonTable& table, const std::string& path,
                      TableFormat format) {
  write_text(format == TableFormat::kCsv ? comparison_to_csv(table)
                                         : comparison_to_json(table),
             path);
}

void write_docking(const DockingTable& table, const std::string& path,
                   TableFormat format) {
  write_text(format == TableFormat::kCsv ? docking_to_csv(table) : docking_to_json(table),
             path);
}

std::string summarize(const ComparisonTable& table) {
  if (table.rows.empty()) return "comparison table: no data\n";
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%4s %4s %6s %12s %10s %10s %9s %9s %8s %8s\n", "n",
                "k", "t", "fit_diff", "cons_smm", "cons_imm", "impr_smm", "impr_imm",
                "mv_smm", "mv_imm");
  out << line;
  for (const auto& r : table.rows) {
    std::snprintf(line, sizeof line,
                  "%4d %4d %6llu %12.6f %10.4f %10.4f %9.4f %9.4f %8.3f %8.3f\n", r.n,
                  r.k, static_cast<unsigned long long>(r.t), r.fitness_difference,
                  r.consumption_pct_smmls, r.consumption_pct_immls, r.improvement_smmls,
                  r.improvement_immls, r.moves_smmls, r.moves_immls);
    out << line;
  }

  // headline claims
  double max_diff = 0.0;
  bool any_t100 = false;
  for (const auto& r : table.rows) {
    if (r.t >= 100) {
      any_t100 = true;
      max_diff = std::max(max_diff, std::abs(r.fitness_difference));
    }
  }
  if (any_t100) {
    out << "CLAIM fitness convergence (T >= 100): max |fitness difference| = "
        << fmt6(max_diff) << " -> " << (max_diff < 0.01 ? "PASS" : "FAIL")
        << " (threshold 0.01)\n";
  } else {
    out << "CLAIM fitness convergence (T >= 100): no rows with T >= 100\n";
  }

  // consumption must not rise with T within one (n, k) group, for T >= 50
  std::map<std::pair<int, int>, std::map<std::uint64_t, double>> groups;
  for (const auto& r : table.rows) {
    if (r.t >= 50) groups[{r.n, r.k}][r.t] = r.consumption_pct_immls;
  }
  bool trend_ok = true;
  bool trend_any = false;
  for (const auto& [key, series] : groups) {
    double prev = 101.0;
    for (const auto& [t, pct] : series) {  // std::map: ascending t
      trend_any = trend_any || prev <= 100.0;
      if (pct > prev) trend_ok = false;
      prev = pct;
    }
  }
  if (trend_any) {
    out << "CLAIM consumption non-increasing in T (T >= 50): "
        << (trend_ok ? "PASS" : "FAIL") << "\n";
  }
  return out.str();
}

std::string summarize(const DockingTable& table, double tolerance) {
  if (table.k_values.empty()) return "docking table: no data\n";
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s", "source");
  out << line;
  for (int k : table.k_values) {
    std::snprintf(line, sizeof line, " %8s", ("K=" + std::to_string(k)).c_str());
    out << line;
  }
  out << "\n";
  const std::pair<const char*, const std::vector<double>*> rows[] = {
      {"kauffman", &table.kauffman},
      {"sendero", &table.sendero},
      {"smmls_paper", &table.smmls_paper},
      {"smmls_measured", &table.smmls_measured},
      {"abs_deviation", &table.abs_deviation},
  };
  for (const auto& [name, values] : rows) {
    std::snprintf(line, sizeof line, "%-16s", name);
    out << line;
    for (double v : *values) {
      std::snprintf(line, sizeof line, " %8.4f", v);
      out << line;
    }
    out << "\n";
  }
  const double max_dev = table.max_abs_deviation();
  out << "DOCKING: " << (max_dev <= tolerance ? "PASS" : "FAIL") << " (max |diff| = "
      << fmt6(max_dev) << ", tolerance " << fmt6(tolerance) << ")\n";
  return out.str();
}

}  // namespace nkls
