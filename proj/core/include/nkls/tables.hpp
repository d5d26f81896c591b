#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nkls/landscape.hpp"
#include "nkls/search.hpp"

namespace nkls {

struct TableMetadata {
  std::string table;  // "comparison" | "docking"
  std::string version;
  std::string axis;  // "k" | "k_over_n"
  DependencyScheme scheme = DependencyScheme::kRandom;
  SweepOrder order_mode = SweepOrder::kFixed;
  std::uint64_t iterations = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t budget = 0;   // docking only; 0 = not applicable
  std::string command;        // resolved CLI echo; empty when library-driven
};

/// One (k, T) cell of a paired SMMLS/IMMLS comparison. Differences are
/// SMMLS minus IMMLS over walks sharing landscape and start; _se columns are
/// standard errors of the means (paired for the difference columns).
struct ComparisonRow {
  int n = 0;
  int k = 0;
  double k_over_n = 0.0;
  std::uint64_t t = 0;
  double fitness_difference = 0.0;
  double fitness_difference_se = 0.0;
  double consumption_pct_smmls = 0.0;
  double consumption_pct_smmls_se = 0.0;
  double consumption_pct_immls = 0.0;
  double consumption_pct_immls_se = 0.0;
  double improvement_smmls = 0.0;
  double improvement_smmls_se = 0.0;
  double improvement_immls = 0.0;
  double improvement_immls_se = 0.0;
  double moves_smmls = 0.0;
  double moves_smmls_se = 0.0;
  double moves_immls = 0.0;
  double moves_immls_se = 0.0;
  double moves_difference = 0.0;
  double moves_difference_se = 0.0;
};

struct ComparisonTable {
  TableMetadata meta;
  std::vector<ComparisonRow> rows;
};

/// Measured mean final fitness beside the published reference rows, one
/// column per K value.
struct DockingTable {
  TableMetadata meta;
  int n = 16;
  std::vector<int> k_values;
  std::vector<double> kauffman;
  std::vector<double> sendero;
  std::vector<double> smmls_paper;
  std::vector<double> smmls_measured;
  std::vector<double> smmls_measured_se;
  std::vector<double> abs_deviation;  // |measured - smmls_paper|

  double max_abs_deviation() const {
    double m = 0.0;
    for (double d : abs_deviation) m = d > m ? d : m;
    return m;
  }
};

}  // namespace nkls
