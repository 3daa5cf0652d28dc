#include "gpucb/table.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "gpucb/error.hpp"
#include "gpucb/format.hpp"

namespace gpucb {

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) { s.remove_prefix(1); }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) { s.remove_suffix(1); }
    return s;
}

}  // namespace

Table parse_table(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) { throw IngestionError("dataset is empty", line_no); }
    if (line.starts_with("\xEF\xBB\xBF")) { line.erase(0, 3); }

    const auto header = split(trim(line));
    if (header.size() < 2) { throw IngestionError("header must be x1,...,xd,value with d >= 1", line_no); }
    const std::size_t d = header.size() - 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (trim(header[i]) != "x" + std::to_string(i + 1)) {
            throw IngestionError("header column " + std::to_string(i + 1) + " must be named x" + std::to_string(i + 1),
                                 line_no, i + 1);
        }
    }
    if (trim(header.back()) != "value") {
        throw IngestionError("last header column must be named value", line_no, d + 1);
    }

    Table table;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty()) { continue; }
        const auto cells = split(row);
        if (cells.size() != d + 1) {
            throw IngestionError("line " + std::to_string(line_no) + ": expected " + std::to_string(d + 1) +
                                     " columns, found " + std::to_string(cells.size()),
                                 line_no);
        }
        std::vector<double> values(d + 1);
        for (std::size_t c = 0; c <= d; ++c) {
            const auto v = parse_double(trim(cells[c]));
            if (!v || !std::isfinite(*v)) {
                throw IngestionError("line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                                         ": not a finite number: '" + std::string(trim(cells[c])) + "'",
                                     line_no, c + 1);
            }
            values[c] = *v;
        }
        const double value = values.back();
        values.pop_back();
        table.push_back({Point(std::move(values)), value});
    }
    if (table.empty()) { throw IngestionError("dataset has a header but no rows", line_no); }
    return table;
}

Table ingest_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) { throw IngestionError("cannot open dataset " + path.string(), 0); }
    return parse_table(in);
}

void write_table(std::ostream& out, const Table& table) {
    if (table.empty()) { throw InputError("write_table: empty table"); }
    const std::size_t d = table.front().x.dimension();
    for (std::size_t i = 0; i < d; ++i) { out << 'x' << (i + 1) << ','; }
    out << "value\n";
    for (const auto& row : table) {
        if (row.x.dimension() != d) { throw InputError("write_table: rows differ in dimension"); }
        for (double c : row.x.coords()) { out << format_double(c) << ','; }
        out << format_double(row.value) << '\n';
    }
}

void write_table(const std::filesystem::path& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) { throw InputError("cannot write " + path.string()); }
    write_table(out, table);
}

}  // namespace gpucb
