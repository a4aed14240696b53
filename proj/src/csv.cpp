#include "tritherm/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tritherm/errors.hpp"

namespace tritherm {

namespace {

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

std::string format_cell(const std::optional<double>& value) { return value ? format_double(*value) : std::string(); }

std::optional<double> parse_double(std::string_view cell) {
    if (cell.empty()) return std::nullopt;
    if (cell == "nan") return std::nan("");
    if (cell == "inf") return HUGE_VAL;
    if (cell == "-inf") return -HUGE_VAL;
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw Error(ErrorCode::ParseError, "not a number: '" + std::string(cell) + "'");
    return v;
}

void write_csv(const CsvTable& table, std::ostream& out) {
    for (const auto& c : table.comments) out << "# " << c << '\n';
    write_row(out, table.columns);
    for (const auto& row : table.rows) write_row(out, row);
}

void write_csv(const CsvTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    write_csv(table, out);
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("#", 0) == 0) {
            table.comments.push_back(line.size() > 1 && line[1] == ' ' ? line.substr(2) : line.substr(1));
            continue;
        }
        if (!header) {
            table.columns = split(line);
            header = true;
            continue;
        }
        auto cells = split(line);
        if (cells.size() != table.columns.size())
            throw Error(ErrorCode::ParseError, "row " + std::to_string(table.rows.size() + 1) + " has " +
                                                   std::to_string(cells.size()) + " cells, expected " +
                                                   std::to_string(table.columns.size()));
        table.rows.push_back(std::move(cells));
    }
    if (!header) throw Error(ErrorCode::ParseError, "CSV has no header row");
    return table;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    return read_csv(in);
}

std::size_t column_index(const CsvTable& table, std::string_view name) {
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        if (table.columns[i] == name) return i;
    throw Error(ErrorCode::InvalidArgument, "no column '" + std::string(name) + "'");
}

}  // namespace tritherm
