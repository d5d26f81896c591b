#pragma once

#include <string>

#include "nkls/tables.hpp"

namespace nkls {

/// CSV: UTF-8, comma delimiter, "\n" line endings, leading '#' metadata
/// lines, header row, floats fixed at 6 decimals. Serializing a NaN or
/// infinity anywhere is a FormatError.
std::string comparison_to_csv(const ComparisonTable& table);
std::string docking_to_csv(const DockingTable& table);

/// Single JSON object mirroring the table structure, full float precision;
/// master_seed is emitted as a decimal string.
std::string comparison_to_json(const ComparisonTable& table);
std::string docking_to_json(const DockingTable& table);

ComparisonTable comparison_from_csv(const std::string& text);
DockingTable docking_from_csv(const std::string& text);
ComparisonTable comparison_from_json(const std::string& text);
DockingTable docking_from_json(const std::string& text);

enum class TableFormat { kCsv, kJson };

void write_comparison(const ComparisonTable& table, const std::string& path,
                      TableFormat format);
void write_docking(const DockingTable& table, const std::string& path,
                   TableFormat format);

/// Fixed-width console rendering plus one PASS/FAIL line per headline claim:
/// max |fitness difference| over rows with T >= 100 (threshold 0.01), and
/// IMMLS consumption non-increasing in T per axis value (rows with T >= 50).
std::string summarize(const ComparisonTable& table);

/// Docking verdict against the published walker row at `tolerance`.
std::string summarize(const DockingTable& table, double tolerance = 0.01);

}  // namespace nkls
