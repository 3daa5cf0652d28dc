#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "gpucb/point.hpp"

namespace gpucb {

struct TableRow {
    Point x;
    double value = 0.0;
};

using Table = std::vector<TableRow>;

/// Reads a UTF-8 CSV with header `x1,...,xd,value`.
///
/// Throws IngestionError naming the 1-based file line (and column for bad cells) on
/// an empty file, a bad header, a wrong column count, or a non-numeric/non-finite cell.
Table ingest_table(const std::filesystem::path& path);
Table parse_table(std::istream& in);

/// Writes the same format with shortest round-trip numbers; parse_table reads it back exactly.
void write_table(const std::filesystem::path& path, const Table& table);
void write_table(std::ostream& out, const Table& table);

}  // namespace gpucb
