#include "tritherm/functions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tritherm/parallel.hpp"

namespace tritherm {

namespace {

void require_range(double lo, double hi, std::size_t n, const char* what) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || lo < 0.0 || !(hi > lo) || n < 2)
        throw Error(ErrorCode::InvalidArgument, std::string(what) + ": need 0 <= lo < hi and at least 2 points");
}

struct Stencil {
    HeatCurrents lo, hi;
};

Stencil central_pair(const Configuration& config, double T, double h) {
    const double a = std::max(T - h, 0.0);
    return {steady_currents(with_temperature(config, Terminal::M, a)),
            steady_currents(with_temperature(config, Terminal::M, T + h))};
}

}  // namespace

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "a grid needs at least 2 points");
    std::vector<double> out(n);
    const double span = hi - lo;
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + span * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = hi;
    return out;
}

Configuration with_temperature(const Configuration& config, Terminal terminal, double T) {
    if (!(T >= 0.0) || !std::isfinite(T))
        throw Error(ErrorCode::InvalidBath, std::string("temperature of bath ") + to_char(terminal) + " must be >= 0");
    Configuration out = config;
    out.bath(terminal).temperature = T;
    return out;
}

std::vector<ScanPoint> scan_temperature(const Configuration& config, Terminal terminal,
                                        const std::vector<double>& grid, unsigned threads) {
    std::vector<ScanPoint> out(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        ScanPoint& pt = out[i];
        pt.x = grid[i];
        try {
            pt.currents = steady_currents(with_temperature(config, terminal, grid[i]));
        } catch (const Error& e) {
            pt.error = e.code();
            pt.message = e.what();
        }
    });
    return out;
}

AmplificationResult amplification(const Configuration& config, double step) {
    if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "amplifier step must be positive");
    const double T = config.bath(Terminal::M).temperature;

    auto alphas = [&](double h, double& dQM, double& width) {
        const Stencil s = central_pair(config, T, h);
        dQM = s.hi.Q_M - s.lo.Q_M;
        width = T + h - std::max(T - h, 0.0);
        if (!(std::abs(dQM) > kDenominatorFloor))
            throw Error(ErrorCode::DegenerateDenominator,
                        "change of Q_M across T_M=" + std::to_string(T) + " is below the floor");
        return std::array<double, 2>{(s.hi.Q_L - s.lo.Q_L) / dQM, (s.hi.Q_R - s.lo.Q_R) / dQM};
    };

    AmplificationResult out;
    out.step = step;
    double dQM = 0.0, width = 0.0;
    const auto coarse = alphas(step, dQM, width);
    out.alpha_L = coarse[0];
    out.alpha_R = coarse[1];
    out.dQ_M_dT = dQM / width;

    double dQM_fine = 0.0, width_fine = 0.0;
    const auto fine = alphas(0.5 * step, dQM_fine, width_fine);
    const double scale = std::max(std::abs(fine[0]), std::abs(fine[1]));
    out.richardson = std::max(std::abs(fine[0] - coarse[0]), std::abs(fine[1] - coarse[1])) / scale;
    out.flagged = !(out.richardson <= 0.01);
    return out;
}

ValveReport valve_crossings(const Configuration& config, double lo, double hi, std::size_t n, double tol,
                            unsigned threads) {
    require_range(lo, hi, n, "valve scan");
    ValveReport report;
    report.grid = scan_temperature(config, Terminal::M, linspace(lo, hi, n), threads);

    struct Bracket {
        Terminal terminal;
        double a, b, Qa, Qb;
    };
    std::vector<Bracket> brackets;
    for (std::size_t i = 0; i + 1 < report.grid.size(); ++i) {
        const ScanPoint& p = report.grid[i];
        const ScanPoint& q = report.grid[i + 1];
        if (!p.currents || !q.currents) continue;
        for (Terminal t : kTerminals) {
            const double a = (*p.currents)[t];
            const double b = (*q.currents)[t];
            if (a == 0.0) {
                report.crossings.push_back({t, p.x, 0.0, a, a, a});
            } else if ((a < 0.0) != (b < 0.0) && b != 0.0) {
                brackets.push_back({t, p.x, q.x, a, b});
            }
        }
    }
    // An exact zero on the last grid point has no right neighbour to pair with.
    if (const ScanPoint& last = report.grid.back(); last.currents)
        for (Terminal t : kTerminals)
            if ((*last.currents)[t] == 0.0) report.crossings.push_back({t, last.x, 0.0, 0.0, 0.0, 0.0});

    std::vector<ValveCrossing> refined(brackets.size());
    parallel_for(brackets.size(), threads, [&](std::size_t k) {
        Bracket br = brackets[k];
        double Qmid = 0.0;
        while (br.b - br.a > tol) {
            const double mid = 0.5 * (br.a + br.b);
            Qmid = steady_currents(with_temperature(config, Terminal::M, mid))[br.terminal];
            if (Qmid == 0.0) {
                br.a = br.b = mid;
                br.Qa = br.Qb = 0.0;
                break;
            }
            if ((Qmid < 0.0) == (br.Qa < 0.0)) {
                br.a = mid;
                br.Qa = Qmid;
            } else {
                br.b = mid;
                br.Qb = Qmid;
            }
        }
        // Linear interpolation inside the final bracket.
        const double x = br.Qa == br.Qb ? br.a : br.a - br.Qa * (br.b - br.a) / (br.Qb - br.Qa);
        const double Qx = steady_currents(with_temperature(config, Terminal::M, x))[br.terminal];
        refined[k] = {br.terminal, x, br.b - br.a, br.Qa, br.Qb, Qx};
    });
    report.crossings.insert(report.crossings.end(), refined.begin(), refined.end());
    std::stable_sort(report.crossings.begin(), report.crossings.end(),
                     [](const ValveCrossing& a, const ValveCrossing& b) { return a.T_M < b.T_M; });
    return report;
}

HeatCurrents biased_currents(const Configuration& config, double delta_T, double T_A) {
    const double T_R = T_A + 0.5 * delta_T;
    const double T_M = T_A - 0.5 * delta_T;
    if (T_R < 0.0 || T_M < 0.0)
        throw Error(ErrorCode::InvalidArgument, "T_A - |delta_T|/2 must be >= 0");
    return steady_currents(with_temperature(with_temperature(config, Terminal::R, T_R), Terminal::M, T_M));
}

RectificationResult rectification(const Configuration& config, double delta_T, double T_A, RectifierMode mode) {
    Configuration c = config;
    if (mode == RectifierMode::TwoTerminal) c.bath(Terminal::L).gamma = 0.0;
    const double bias = std::abs(delta_T);

    RectificationResult out;
    out.delta_T = delta_T;
    out.T_A = T_A;
    out.Q_fore = biased_currents(c, bias, T_A).Q_R;
    out.Q_back = -biased_currents(c, -bias, T_A).Q_R;
    const double sum = std::abs(out.Q_fore + out.Q_back);
    if (std::abs(out.Q_fore) <= kDenominatorFloor && std::abs(out.Q_back) <= kDenominatorFloor)
        throw Error(ErrorCode::BothCurrentsZero, "forward and backward currents both vanish; R is undefined");
    // Only possible with a third bath: both configurations push Q_R the same way by the same amount.
    if (!(sum > 0.0))
        throw Error(ErrorCode::DegenerateDenominator, "Q_fore + Q_back vanishes; R is undefined");
    out.R = std::abs(out.Q_fore - out.Q_back) / sum;
    return out;
}

StabilizerReport stabilizer_sensitivity(const Configuration& config, Terminal terminal, double lo, double hi,
                                        std::size_t n, unsigned threads) {
    require_range(lo, hi, n, "stabilizer scan");
    StabilizerReport report;
    report.scanned = terminal;
    report.lo = lo;
    report.hi = hi;
    report.grid = scan_temperature(config, terminal, linspace(lo, hi, n), threads);
    for (const ScanPoint& p : report.grid)
        if (!p.currents) throw Error(ErrorCode::PointFailure, "stabilizer scan failed: " + p.message);

    for (Terminal t : kTerminals) {
        Flatness& f = report.currents[index(t)];
        f.min = f.max = (*report.grid.front().currents)[t];
        double peak = 0.0;
        for (std::size_t i = 0; i < report.grid.size(); ++i) {
            const double q = (*report.grid[i].currents)[t];
            f.min = std::min(f.min, q);
            f.max = std::max(f.max, q);
            if (i > 0) {
                const double dq = q - (*report.grid[i - 1].currents)[t];
                peak = std::max(peak, std::abs(dq / (report.grid[i].x - report.grid[i - 1].x)));
            }
        }
        const double scale = std::max(std::abs(f.min), std::abs(f.max));
        f.ratio = scale > 0.0 ? (f.max - f.min) / scale : 0.0;
        f.peak_slope = peak;
    }
    return report;
}

SwitchResult switch_threshold(const Configuration& config, double epsilon, double lo, double hi, std::size_t n,
                              unsigned threads) {
    require_range(lo, hi, n, "switch scan");
    if (!(epsilon >= 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be >= 0");
    SwitchResult out;
    out.epsilon = epsilon;
    out.threshold = lo;
    out.grid = scan_temperature(config, Terminal::M, linspace(lo, hi, n), threads);
    for (const ScanPoint& p : out.grid) {
        if (!p.currents) break;
        if (std::abs(p.currents->Q_L) > epsilon || std::abs(p.currents->Q_R) > epsilon) break;
        out.threshold = p.x;
        out.found = true;
    }
    return out;
}

}  // namespace tritherm
