// csv.hpp — the tabular output format
//
//   # provenance line ...
//   col_a,col_b,flags
//   0.10000000000000001,2.5e-07,ok
//
// Numbers use 17 significant digits so a read-back reproduces every double exactly.
// Empty cells mark values that could not be computed.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tritherm {

struct CsvTable {
    std::vector<std::string> comments;  // without the leading "# "
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string format_double(double value);
std::string format_cell(const std::optional<double>& value);

/// Parses a cell written by format_double; empty cells give nullopt.
std::optional<double> parse_double(std::string_view cell);

void write_csv(const CsvTable& table, std::ostream& out);
void write_csv(const CsvTable& table, const std::string& path);

CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::string& path);

/// Column index by name; throws InvalidArgument if absent.
std::size_t column_index(const CsvTable& table, std::string_view name);

}  // namespace tritherm
