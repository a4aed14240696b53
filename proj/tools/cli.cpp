#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tritherm/config.hpp"
#include "tritherm/csv.hpp"
#include "tritherm/functions.hpp"
#include "tritherm/parallel.hpp"
#include "tritherm/sweep.hpp"
#include "tritherm/validation.hpp"

namespace tritherm::cli {

namespace {

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    unsigned threads{0};
};

struct Options {
    Common common;
    std::string range;
    std::optional<double> step;
    std::optional<double> epsilon;
    std::optional<double> delta_T;
    bool two_terminal{false};
    std::string terminal;
    std::uint64_t seed{0};
    std::size_t draws{100};
};

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config_path, "Run file (JSON)")->required();
    sub->add_option("--set", c.overrides, "Override one config key, e.g. bath.M.temperature=0.1 (repeatable)")
        ->allow_extra_args(false);
    sub->add_option("--out", c.out_path, "Write a CSV here");
    sub->add_option("--threads", c.threads, "Worker threads for grid scans (0 = all cores)")->capture_default_str();
}

void add_range(CLI::App* sub, Options& o, const std::string& what) {
    sub->add_option("--range", o.range, what + " as start:stop:count (default: scan.* from the config)");
}

RunConfig load(const Common& c) {
    RunConfig rc = read_config(c.config_path);
    for (const auto& o : c.overrides) apply_override(rc, o);
    return rc;
}

ScanRange pick_range(const Options& o, const RunConfig& rc, ScanRange fallback) {
    if (!o.range.empty()) return parse_range(o.range);
    if (rc.scan) return *rc.scan;
    return fallback;
}

std::vector<std::string> provenance(const std::string& command, const RunConfig& rc) {
    std::vector<std::string> lines{std::string("tritherm ") + version(), "command " + command};
    for (const auto& l : config_echo(rc)) lines.push_back("config " + l);
    return lines;
}

void save(const CsvTable& table, const std::string& path, std::ostream& out) {
    write_csv(table, path);
    out << "wrote " << table.rows.size() << " rows to " << path << "\n";
}

std::string flag_of(const ScanPoint& p) { return p.error ? std::string(to_string(*p.error)) : "ok"; }

void currents_cells(std::vector<std::string>& row, const std::optional<HeatCurrents>& q) {
    for (Terminal t : kTerminals) row.push_back(q ? format_double((*q)[t]) : "");
}

void warn_secular(const Configuration& cfg, std::ostream& err) {
    const SecularReport s = assess_secular(build_channels(cfg.device), cfg.baths);
    if (!s.valid)
        err << "warning: secular ratio " << num(s.ratio) << " >= " << kSecularThreshold
            << "; damping is not small against the Bohr-frequency gaps\n";
}

// ---- subcommands -----------------------------------------------------------

int cmd_steady(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig rc = load(o.common);
    const Configuration cfg = validated(rc);
    const OperatingPoint op = evaluate(cfg);

    out << "heat currents (omega_R^2; positive = absorbed from that bath)\n";
    for (Terminal t : kTerminals) out << "  Q_" << to_char(t) << " = " << num(op.currents[t]) << "\n";
    out << "  sum = " << num(op.currents.sum()) << "\n";
    const bool cold = std::any_of(cfg.baths.begin(), cfg.baths.end(),
                                  [](const BathSpec& b) { return b.attached() && b.temperature == 0.0; });
    out << "entropy production: " << (cold ? std::string("unbounded (attached bath at T = 0)")
                                             : num(op.currents.entropy_production(cfg.baths)))
        << "\n";
    out << "populations (eigenbasis, ascending energy)\n";
    for (int k = 0; k < kLevels; ++k) out << "  p" << k + 1 << " = " << num(op.state.populations[k]) << "\n";
    out << "secular ratio: " << num(op.secular.ratio) << (op.secular.valid ? " (ok)" : " (WARNING)") << "\n";
    warn_secular(cfg, err);

    if (!o.common.out_path.empty()) {
        CsvTable t;
        t.comments = provenance("steady", rc);
        t.columns = {"Q_L", "Q_M", "Q_R"};
        for (int k = 1; k <= kLevels; ++k) t.columns.push_back("p" + std::to_string(k));
        t.columns.push_back("secular_ratio");
        std::vector<std::string> row;
        currents_cells(row, op.currents);
        for (double p : op.state.populations) row.push_back(format_double(p));
        row.push_back(format_double(op.secular.ratio));
        t.rows.push_back(row);
        save(t, o.common.out_path, out);
    }
    return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.common.out_path.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs --out");
    const RunConfig rc = load(o.common);
    const SweepResult result = run_sweep(rc, o.common.threads);
    save(to_table(result), o.common.out_path, out);
    if (result.failures > 0)
        err << "warning: " << result.failures << " of " << result.rows.size() << " grid points failed (flagged)\n";
    return kExitOk;
}

int cmd_amplifier(const Options& o, std::ostream& out, std::ostream& err) {
    RunConfig rc = load(o.common);
    const double step = o.step.value_or(rc.amplifier_step);
    const Configuration cfg = validated(rc);
    warn_secular(cfg, err);

    std::vector<double> grid{cfg.bath(Terminal::M).temperature};
    if (!o.range.empty() || rc.scan) {
        const ScanRange r = pick_range(o, rc, {});
        grid = linspace(r.start, r.stop, r.count);
    }

    struct Point {
        std::optional<HeatCurrents> q;
        std::optional<AmplificationResult> a;
        std::string flag{"ok"};
    };
    std::vector<Point> pts(grid.size());
    parallel_for(grid.size(), o.common.threads, [&](std::size_t i) {
        const Configuration c = with_temperature(cfg, Terminal::M, grid[i]);
        try {
            pts[i].q = steady_currents(c);
            pts[i].a = amplification(c, step);
            if (pts[i].a->flagged) pts[i].flag = "richardson";
        } catch (const Error& e) {
            pts[i].flag = std::string(to_string(e.code()));
        }
    });

    double max_L = 0.0, max_R = 0.0, worst_sum = 0.0;
    std::size_t defined = 0, flagged = 0;
    for (const Point& p : pts) {
        if (!p.a) continue;
        ++defined;
        flagged += p.a->flagged ? 1 : 0;
        max_L = std::max(max_L, std::abs(p.a->alpha_L));
        max_R = std::max(max_R, std::abs(p.a->alpha_R));
        worst_sum = std::max(worst_sum, std::abs(p.a->alpha_L + p.a->alpha_R + 1.0));
    }
    if (grid.size() == 1 && pts[0].a) {
        out << "T_M = " << num(grid[0]) << "\n"
            << "  alpha_L = " << num(pts[0].a->alpha_L) << "\n"
            << "  alpha_R = " << num(pts[0].a->alpha_R) << "\n"
            << "  dQ_M/dT_M = " << num(pts[0].a->dQ_M_dT) << "\n"
            << "  step = " << num(step) << ", Richardson change " << num(pts[0].a->richardson) << "\n";
    } else {
        out << "amplifier scan over T_M in [" << num(grid.front()) << ", " << num(grid.back()) << "], "
            << grid.size() << " points, " << defined << " defined\n"
            << "  max |alpha_L| = " << num(max_L) << "\n"
            << "  max |alpha_R| = " << num(max_R) << "\n"
            << "  max |alpha_L + alpha_R + 1| = " << num(worst_sum) << "\n";
    }
    if (defined < grid.size())
        err << "warning: " << grid.size() - defined << " point(s) have no amplification factor (flagged)\n";
    if (flagged > 0) err << "warning: " << flagged << " point(s) changed by more than 1% between h and h/2\n";

    if (!o.common.out_path.empty()) {
        CsvTable t;
        t.comments = provenance("amplifier", rc);
        t.comments.push_back("step " + format_double(step));
        t.columns = {"T_M", "Q_L", "Q_M", "Q_R", "alpha_L", "alpha_R", "flags"};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::vector<std::string> row{format_double(grid[i])};
            currents_cells(row, pts[i].q);
            row.push_back(pts[i].a ? format_double(pts[i].a->alpha_L) : "");
            row.push_back(pts[i].a ? format_double(pts[i].a->alpha_R) : "");
            row.push_back(pts[i].flag);
            t.rows.push_back(row);
        }
        save(t, o.common.out_path, out);
    }
    return kExitOk;
}

CsvTable grid_table(const std::string& axis, const std::vector<ScanPoint>& grid) {
    CsvTable t;
    t.columns = {axis, "Q_L", "Q_M", "Q_R", "flags"};
    for (const ScanPoint& p : grid) {
        std::vector<std::string> row{format_double(p.x)};
        currents_cells(row, p.currents);
        row.push_back(flag_of(p));
        t.rows.push_back(row);
    }
    return t;
}

std::size_t count_failures(const std::vector<ScanPoint>& grid, std::ostream& err) {
    const auto n = static_cast<std::size_t>(
        std::count_if(grid.begin(), grid.end(), [](const ScanPoint& p) { return !p.currents.has_value(); }));
    if (n > 0) err << "warning: " << n << " of " << grid.size() << " grid points failed (flagged)\n";
    return n;
}

int cmd_valve(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig rc = load(o.common);
    const Configuration cfg = validated(rc);
    warn_secular(cfg, err);
    const ScanRange r = pick_range(o, rc, {0.01, 1.0, kDefaultValveGrid});
    const ValveReport rep = valve_crossings(cfg, r.start, r.stop, r.count, 1e-6, o.common.threads);
    count_failures(rep.grid, err);

    out << "valve crossings over T_M in [" << num(r.start) << ", " << num(r.stop) << "] (" << r.count
        << " points)\n";
    if (rep.crossings.empty()) out << "  none\n";
    for (const ValveCrossing& c : rep.crossings)
        out << "  Q_" << to_char(c.terminal) << " = 0 at T_M = " << std::fixed << std::setprecision(6) << c.T_M
            << std::defaultfloat << "  (bracket " << num(c.bracket) << ", residual " << num(c.Q_at) << ")\n";

    if (!o.common.out_path.empty()) {
        CsvTable t = grid_table("T_M", rep.grid);
        t.comments = provenance("valve", rc);
        for (const ValveCrossing& c : rep.crossings)
            t.comments.push_back(std::string("crossing Q_") + to_char(c.terminal) + " " + format_double(c.T_M));
        save(t, o.common.out_path, out);
    }
    return kExitOk;
}

int cmd_rectify(const Options& o, std::ostream& out, std::ostream& err) {
    RunConfig rc = load(o.common);
    if (o.two_terminal) rc.rectify.two_terminal = true;
    const double T_A = rc.rectify.T_A;
    const auto mode = rc.rectify.two_terminal ? RectifierMode::TwoTerminal : RectifierMode::ThreeTerminal;
    const Configuration cfg = validated(rc);
    warn_secular(cfg, err);

    if (o.range.empty()) {
        const double dT = o.delta_T.value_or(rc.rectify.delta_T);
        const RectificationResult r = rectification(cfg, dT, T_A, mode);
        out << (mode == RectifierMode::TwoTerminal ? "two-terminal" : "three-terminal") << " rectifier, T_A = "
            << num(T_A) << ", |delta_T| = " << num(std::abs(dT)) << "\n"
            << "  Q_fore = " << num(r.Q_fore) << "\n"
            << "  Q_back = " << num(r.Q_back) << "\n"
            << "  R = " << num(r.R) << "\n";
        if (!o.common.out_path.empty()) {
            CsvTable t;
            t.comments = provenance("rectify", rc);
            t.columns = {"delta_T", "Q_fore", "Q_back", "R"};
            t.rows.push_back({format_double(dT), format_double(r.Q_fore), format_double(r.Q_back), format_double(r.R)});
            save(t, o.common.out_path, out);
        }
        return kExitOk;
    }

    const ScanRange range = parse_range(o.range);
    const std::vector<double> grid = linspace(range.start, range.stop, range.count);
    Configuration biased = cfg;
    if (mode == RectifierMode::TwoTerminal) biased.bath(Terminal::L).gamma = 0.0;
    struct Point {
        std::optional<HeatCurrents> q;
        std::optional<RectificationResult> r;
        std::string flag{"ok"};
    };
    std::vector<Point> pts(grid.size());
    parallel_for(grid.size(), o.common.threads, [&](std::size_t i) {
        try {
            pts[i].q = biased_currents(biased, grid[i], T_A);
            pts[i].r = rectification(cfg, grid[i], T_A, mode);
        } catch (const Error& e) {
            pts[i].flag = std::string(to_string(e.code()));
        }
    });

    out << "rectifier scan over delta_T in [" << num(range.start) << ", " << num(range.stop) << "], T_A = "
        << num(T_A) << "\n";
    double best = -1.0, best_at = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (pts[i].r && pts[i].r->R > best) best = pts[i].r->R, best_at = grid[i];
    if (best >= 0.0) out << "  max R = " << num(best) << " at delta_T = " << num(best_at) << "\n";
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (!pts[i].q || !pts[i + 1].q) continue;
        const double a = pts[i].q->Q_R, b = pts[i + 1].q->Q_R;
        if ((a < 0.0) != (b < 0.0))
            out << "  Q_R changes sign near delta_T = " << num(grid[i] - a * (grid[i + 1] - grid[i]) / (b - a)) << "\n";
    }
    const auto missing = std::count_if(pts.begin(), pts.end(), [](const Point& p) { return !p.r; });
    if (missing > 0) err << "warning: " << missing << " point(s) have no rectification factor (flagged)\n";

    if (!o.common.out_path.empty()) {
        CsvTable t;
        t.comments = provenance("rectify", rc);
        t.columns = {"delta_T", "Q_L", "Q_M", "Q_R", "Q_fore", "Q_back", "R", "flags"};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::vector<std::string> row{format_double(grid[i])};
            currents_cells(row, pts[i].q);
            row.push_back(pts[i].r ? format_double(pts[i].r->Q_fore) : "");
            row.push_back(pts[i].r ? format_double(pts[i].r->Q_back) : "");
            row.push_back(pts[i].r ? format_double(pts[i].r->R) : "");
            row.push_back(pts[i].flag);
            t.rows.push_back(row);
        }
        save(t, o.common.out_path, out);
    }
    return kExitOk;
}

int cmd_stabilizer(const Options& o, std::ostream& out, std::ostream& err) {
    RunConfig rc = load(o.common);
    const Terminal terminal = o.terminal.empty() ? rc.stabilizer_terminal : parse_terminal(o.terminal);
    const Configuration cfg = validated(rc);
    warn_secular(cfg, err);
    const ScanRange r = pick_range(o, rc, {0.0, 0.8, kDefaultStabilizerGrid});
    const StabilizerReport rep = stabilizer_sensitivity(cfg, terminal, r.start, r.stop, r.count, o.common.threads);

    out << "stabilizer scan over T_" << to_char(terminal) << " in [" << num(r.start) << ", " << num(r.stop)
        << "]\n";
    for (Terminal t : kTerminals) {
        const Flatness& f = rep.currents[index(t)];
        out << "  Q_" << to_char(t) << ": flatness " << num(f.ratio) << ", range [" << num(f.min) << ", "
            << num(f.max) << "], peak |dQ/dT| " << num(f.peak_slope) << "\n";
    }
    if (!o.common.out_path.empty()) {
        CsvTable t = grid_table(std::string("T_") + to_char(terminal), rep.grid);
        t.comments = provenance("stabilizer", rc);
        save(t, o.common.out_path, out);
    }
    return kExitOk;
}

int cmd_switch(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig rc = load(o.common);
    const double eps = o.epsilon.value_or(rc.switch_epsilon);
    const Configuration cfg = validated(rc);
    warn_secular(cfg, err);
    const ScanRange r = pick_range(o, rc, {0.0, 0.6, 601});
    const SwitchResult res = switch_threshold(cfg, eps, r.start, r.stop, r.count, o.common.threads);
    count_failures(res.grid, err);

    out << "switch threshold for epsilon = " << num(eps) << " over T_M in [" << num(r.start) << ", "
        << num(r.stop) << "]\n";
    if (res.found)
        out << "  |Q_L|, |Q_R| <= epsilon for all T_M <= " << num(res.threshold) << "\n";
    else
        out << "  none: the currents exceed epsilon already at T_M = " << num(r.start) << "\n";
    if (!o.common.out_path.empty()) {
        CsvTable t = grid_table("T_M", res.grid);
        t.comments = provenance("switch", rc);
        t.comments.push_back("epsilon " + format_double(eps));
        t.comments.push_back(res.found ? "threshold " + format_double(res.threshold) : std::string("threshold none"));
        save(t, o.common.out_path, out);
    }
    return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig rc = load(o.common);
    const Configuration cfg = validated(rc);
    const ValidationReport rep = run_validation(cfg, o.seed, o.draws);

    std::size_t failed = 0;
    for (const CheckResult& c : rep.checks) {
        const char* tag = c.passed ? "PASS" : (c.advisory ? "WARN" : "FAIL");
        if (!c.passed && !c.advisory) ++failed;
        out << tag << "  " << std::left << std::setw(28) << c.name << std::right << " " << std::setw(12)
            << num(c.value) << "  (limit " << num(c.tolerance) << ")";
        if (!c.detail.empty()) out << "  " << c.detail;
        out << "\n";
    }
    out << rep.checks.size() << " checks, " << failed << " failed\n";
    if (!o.common.out_path.empty()) {
        CsvTable t;
        t.comments = provenance("validate", rc);
        t.comments.push_back("seed " + std::to_string(o.seed) + ", draws " + std::to_string(o.draws));
        t.columns = {"check", "status", "value", "limit"};
        for (const CheckResult& c : rep.checks)
            t.rows.push_back({c.name, c.passed ? "pass" : (c.advisory ? "warn" : "fail"), format_double(c.value),
                              format_double(c.tolerance)});
        save(t, o.common.out_path, out);
    }
    if (failed > 0) err << "validation failed\n";
    return failed == 0 ? kExitOk : kExitNumerical;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steady-state heat currents of a three-qubit thermal device", "tritherm"};
    app.set_version_flag("--version", std::string("tritherm ") + version());
    app.require_subcommand(1);

    Options o;
    auto* steady = app.add_subcommand("steady", "Currents, populations and secular check at one operating point");
    add_common(steady, o.common);

    auto* sweep = app.add_subcommand("sweep", "Grid sweep described by sweep.* / sweep2.* / outputs in the config");
    add_common(sweep, o.common);

    auto* amp = app.add_subcommand("amplifier", "Amplification factors alpha_L, alpha_R along T_M");
    add_common(amp, o.common);
    add_range(amp, o, "T_M scan");
    amp->add_option("--step", o.step, "Finite-difference step in T_M (default amplifier.step or 1e-4)");

    auto* valve = app.add_subcommand("valve", "Control temperatures T_M at which each current vanishes");
    add_common(valve, o.common);
    add_range(valve, o, "T_M scan (fallback 0.01:1:400)");

    auto* rect = app.add_subcommand("rectify", "Rectification factor R for a bias delta_T = T_R - T_M around T_A");
    add_common(rect, o.common);
    rect->add_option("--delta-t", o.delta_T, "Temperature bias (default rectify.delta_T)");
    rect->add_flag("--two-terminal", o.two_terminal, "Detach bath L (gamma_L = 0)");
    rect->add_option("--range", o.range, "Scan delta_T as start:stop:count instead of a single bias");

    auto* stab = app.add_subcommand("stabilizer", "Flatness of the currents while one bath temperature varies");
    add_common(stab, o.common);
    add_range(stab, o, "temperature scan (fallback 0:0.8:201)");
    stab->add_option("--terminal", o.terminal, "Scanned bath L, M or R (default stabilizer.terminal or L)")
        ->check(CLI::IsMember({"L", "M", "R"}));

    auto* sw = app.add_subcommand("switch", "Largest T_M below which |Q_L| and |Q_R| stay under epsilon");
    add_common(sw, o.common);
    add_range(sw, o, "T_M scan (fallback 0:0.6:601)");
    sw->add_option("--epsilon", o.epsilon, "Current threshold in omega_R^2 (default switch.epsilon or 1e-9)");

    auto* val = app.add_subcommand("validate", "Oracle and invariant checks; exit 0 iff all pass");
    add_common(val, o.common);
    val->add_option("--seed", o.seed, "Seed for the random-device checks")->capture_default_str();
    val->add_option("--draws", o.draws, "Number of random devices")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*steady) return cmd_steady(o, out, err);
        if (*sweep) return cmd_sweep(o, out, err);
        if (*amp) return cmd_amplifier(o, out, err);
        if (*valve) return cmd_valve(o, out, err);
        if (*rect) return cmd_rectify(o, out, err);
        if (*stab) return cmd_stabilizer(o, out, err);
        if (*sw) return cmd_switch(o, out, err);
        if (*val) return cmd_validate(o, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.is_validation() ? kExitUsage : kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}

}  // namespace tritherm::cli
