// sweep.hpp — deterministic one- and two-axis parameter sweeps
//
// Rows come out in grid order (axis 1 major) whatever the thread count. A point
// whose steady state cannot be computed keeps its row, with empty cells and the
// error name in the flags column.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tritherm/config.hpp"
#include "tritherm/csv.hpp"

namespace tritherm {

struct SweepRow {
    std::vector<double> axes;
    std::vector<std::optional<double>> values;  // one per SweepResult::columns entry
    std::vector<std::string> flags;             // empty means "ok"
    bool failed{false};                         // steady state itself failed
};

struct SweepResult {
    std::vector<std::string> axis_names;
    std::vector<std::string> columns;  // outputs, with populations expanded to p1..p8
    std::vector<SweepRow> rows;
    std::vector<std::string> provenance;
    std::size_t failures{0};
};

/// Output column names for a list of requested outputs.
std::vector<std::string> output_columns(const std::vector<std::string>& outputs);

/// FNV-1a over the axis names and the exact bytes of every grid value.
std::uint64_t grid_hash(const std::vector<std::string>& names, const std::vector<std::vector<double>>& axes);

/// Evaluates every grid point of config.sweep (and config.sweep2). Throws InvalidSpec
/// without a sweep axis and PointFailure when more than half of the points fail.
SweepResult run_sweep(const RunConfig& config, unsigned threads = 1);

CsvTable to_table(const SweepResult& result);

/// Version string baked in at build time.
const char* version();

}  // namespace tritherm
