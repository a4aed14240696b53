#include "tritherm/sweep.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "tritherm/parallel.hpp"

#ifndef TRITHERM_VERSION
#define TRITHERM_VERSION "0.0.0"
#endif

namespace tritherm {

namespace {

std::string hex(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << v;
    return os.str();
}

// Fills one row; `cfg` already carries the axis values.
void evaluate_row(const RunConfig& cfg, const std::vector<std::string>& outputs, SweepRow& row) {
    const std::size_t width = output_columns(outputs).size();
    row.values.assign(width, std::nullopt);

    Configuration config;
    OperatingPoint op;
    try {
        config = validated(cfg);
        op = evaluate(config);
    } catch (const Error& e) {
        row.failed = true;
        row.flags.emplace_back(to_string(e.code()));
        return;
    }
    if (!op.secular.valid) row.flags.emplace_back("secular");

    std::optional<AmplificationResult> amp;
    std::optional<double> R;
    std::size_t col = 0;
    for (const std::string& name : outputs) {
        if (name == "Q_L" || name == "Q_M" || name == "Q_R") {
            row.values[col++] = op.currents[parse_terminal(name.substr(2))];
        } else if (name == "secular_ratio") {
            row.values[col++] = op.secular.ratio;
        } else if (name == "populations") {
            for (double p : op.state.populations) row.values[col++] = p;
        } else if (name == "alpha_L" || name == "alpha_R") {
            if (!amp) {
                try {
                    amp = amplification(config, cfg.amplifier_step);
                    if (amp->flagged) row.flags.emplace_back("richardson");
                } catch (const Error& e) {
                    row.flags.emplace_back(to_string(e.code()));
                    amp = AmplificationResult{};
                    amp->step = -1.0;  // marks "no value"
                }
            }
            if (amp->step > 0.0) row.values[col] = name == "alpha_L" ? amp->alpha_L : amp->alpha_R;
            ++col;
        } else if (name == "R") {
            if (!R) {
                try {
                    const auto mode = cfg.rectify.two_terminal ? RectifierMode::TwoTerminal : RectifierMode::ThreeTerminal;
                    R = rectification(config, cfg.rectify.delta_T, cfg.rectify.T_A, mode).R;
                } catch (const Error& e) {
                    row.flags.emplace_back(to_string(e.code()));
                    R = std::nan("");
                }
            }
            if (!std::isnan(*R)) row.values[col] = *R;
            ++col;
        }
    }
}

}  // namespace

const char* version() { return TRITHERM_VERSION; }

std::vector<std::string> output_columns(const std::vector<std::string>& outputs) {
    std::vector<std::string> cols;
    for (const std::string& name : outputs) {
        if (name == "populations") {
            for (int k = 1; k <= kLevels; ++k) cols.push_back("p" + std::to_string(k));
        } else {
            cols.push_back(name);
        }
    }
    return cols;
}

std::uint64_t grid_hash(const std::vector<std::string>& names, const std::vector<std::vector<double>>& axes) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](const void* data, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
    };
    for (const auto& n : names) mix(n.c_str(), n.size() + 1);  // include the terminator as a separator
    for (const auto& axis : axes)
        for (double v : axis) {
            unsigned char b[sizeof(double)];
            std::memcpy(b, &v, sizeof v);
            mix(b, sizeof b);
        }
    return h;
}

SweepResult run_sweep(const RunConfig& config, unsigned threads) {
    if (!config.sweep) throw Error(ErrorCode::InvalidSpec, "config has no sweep axis (sweep.param/start/stop/count)");

    SweepResult result;
    std::vector<std::vector<double>> axes{config.sweep->values()};
    result.axis_names.push_back(config.sweep->param);
    if (config.sweep2) {
        axes.push_back(config.sweep2->values());
        result.axis_names.push_back(config.sweep2->param);
    }
    result.columns = output_columns(config.outputs);

    const std::size_t inner = axes.size() > 1 ? axes[1].size() : 1;
    const std::size_t total = axes[0].size() * inner;
    result.rows.resize(total);

    // Validate the fixed part once so that a broken base config is a spec error, not N point failures.
    if (!(config.sweep->param == "omega_L" || config.sweep->param == "device.omega_L")) {
        RunConfig probe = config;
        set_parameter(probe, config.sweep->param, axes[0][0]);
        if (config.sweep2) set_parameter(probe, config.sweep2->param, axes[1][0]);
        validated(probe);
    }

    parallel_for(total, threads, [&](std::size_t i) {
        SweepRow& row = result.rows[i];
        RunConfig cfg = config;
        row.axes.push_back(axes[0][i / inner]);
        set_parameter(cfg, config.sweep->param, row.axes.back());
        if (config.sweep2) {
            row.axes.push_back(axes[1][i % inner]);
            set_parameter(cfg, config.sweep2->param, row.axes.back());
        }
        evaluate_row(cfg, config.outputs, row);
    });

    for (const auto& row : result.rows) result.failures += row.failed ? 1 : 0;
    if (2 * result.failures > total)
        throw Error(ErrorCode::PointFailure, std::to_string(result.failures) + " of " + std::to_string(total) +
                                                 " grid points failed");

    result.provenance.push_back(std::string("tritherm ") + version());
    for (const auto& line : config_echo(config)) result.provenance.push_back("config " + line);
    result.provenance.push_back("grid " + std::to_string(total) + " points, hash " +
                                hex(grid_hash(result.axis_names, axes)));
    return result;
}

CsvTable to_table(const SweepResult& result) {
    CsvTable t;
    t.comments = result.provenance;
    t.columns = result.axis_names;
    t.columns.insert(t.columns.end(), result.columns.begin(), result.columns.end());
    t.columns.push_back("flags");
    for (const auto& row : result.rows) {
        std::vector<std::string> cells;
        for (double a : row.axes) cells.push_back(format_double(a));
        for (const auto& v : row.values) cells.push_back(format_cell(v));
        std::string flags;
        for (const auto& f : row.flags) flags += (flags.empty() ? "" : ";") + f;
        cells.push_back(flags.empty() ? "ok" : flags);
        t.rows.push_back(std::move(cells));
    }
    return t;
}

}  // namespace tritherm
