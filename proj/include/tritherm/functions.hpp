// functions.hpp — the six device functions built on top of steady-state evaluations
//
// Every analysis is a scan over one bath temperature. Grid points are evaluated
// independently (optionally on several threads) and reduced in grid order.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tritherm/steady.hpp"

namespace tritherm {

/// n evenly spaced points from lo to hi inclusive (n >= 2).
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Copy of config with one bath temperature replaced.
Configuration with_temperature(const Configuration& config, Terminal terminal, double T);

struct ScanPoint {
    double x{0.0};
    std::optional<HeatCurrents> currents;  // empty when the evaluation failed
    std::optional<ErrorCode> error;
    std::string message;
};

/// Steady currents with the temperature of `terminal` set to each grid value.
std::vector<ScanPoint> scan_temperature(const Configuration& config, Terminal terminal,
                                        const std::vector<double>& grid, unsigned threads = 1);

// ---- amplifier / modulator -------------------------------------------------

struct AmplificationResult {
    double alpha_L{0.0};
    double alpha_R{0.0};
    double dQ_M_dT{0.0};      // central-difference slope of Q_M in T_M
    double step{0.0};         // requested step; the stencil is clipped at T_M = 0
    double richardson{0.0};   // max relative change of alpha between h and h/2
    bool flagged{false};      // richardson > 1%
};

inline constexpr double kDefaultAmplifierStep = 1e-4;
inline constexpr double kDenominatorFloor = 1e-18;

/// alpha_{L,R} = dQ_{L,R}/dQ_M along T_M. Throws DegenerateDenominator when the
/// change of Q_M over the stencil is below kDenominatorFloor.
AmplificationResult amplification(const Configuration& config, double step = kDefaultAmplifierStep);

// ---- valve -----------------------------------------------------------------

struct ValveCrossing {
    Terminal terminal{Terminal::L};
    double T_M{0.0};
    double bracket{0.0};   // width of the final bisection bracket
    double Q_below{0.0};   // current at the lower end of the bracket
    double Q_above{0.0};
    double Q_at{0.0};      // current at T_M
};

struct ValveReport {
    std::vector<ValveCrossing> crossings;  // sorted by T_M
    std::vector<ScanPoint> grid;
};

inline constexpr std::size_t kDefaultValveGrid = 400;

/// Scans T_M over [lo, hi], then bisects every sign change of every current.
ValveReport valve_crossings(const Configuration& config, double lo, double hi,
                            std::size_t n = kDefaultValveGrid, double tol = 1e-6, unsigned threads = 1);

// ---- rectifier -------------------------------------------------------------

enum class RectifierMode { TwoTerminal, ThreeTerminal };

struct RectificationResult {
    double R{0.0};
    double Q_fore{0.0};
    double Q_back{0.0};
    double delta_T{0.0};
    double T_A{0.0};
};

/// Currents with T_R = T_A + delta_T/2 and T_M = T_A - delta_T/2 (delta_T signed).
HeatCurrents biased_currents(const Configuration& config, double delta_T, double T_A);

/// R = |Q_fore - Q_back| / |Q_fore + Q_back| with Q_fore = Q_R at T_R > T_M and
/// Q_back = -Q_R with the two temperatures swapped. Two-terminal mode detaches L.
/// Throws BothCurrentsZero when both directed currents vanish and DegenerateDenominator
/// when only their sum does (three-terminal mode).
RectificationResult rectification(const Configuration& config, double delta_T, double T_A, RectifierMode mode);

// ---- stabilizer ------------------------------------------------------------

struct Flatness {
    double ratio{0.0};       // (max - min) / max|Q| over the scan
    double peak_slope{0.0};  // max |dQ/dT| between neighbouring grid points
    double min{0.0};
    double max{0.0};
};

struct StabilizerReport {
    Terminal scanned{Terminal::L};
    double lo{0.0};
    double hi{0.0};
    std::array<Flatness, 3> currents{};  // indexed by Terminal
    std::vector<ScanPoint> grid;
};

inline constexpr std::size_t kDefaultStabilizerGrid = 201;

/// Flatness of every current while the temperature of `terminal` runs over [lo, hi].
/// Throws PointFailure if any grid point fails.
StabilizerReport stabilizer_sensitivity(const Configuration& config, Terminal terminal, double lo, double hi,
                                        std::size_t n = kDefaultStabilizerGrid, unsigned threads = 1);

// ---- switch ----------------------------------------------------------------

struct SwitchResult {
    double threshold{0.0};
    bool found{false};   // false when already the first grid point exceeds epsilon
    double epsilon{0.0};
    std::vector<ScanPoint> grid;
};

inline constexpr double kDefaultSwitchEpsilon = 1e-9;

/// Largest grid T_M such that |Q_L| and |Q_R| stay <= epsilon for every grid T <= T_M.
SwitchResult switch_threshold(const Configuration& config, double epsilon, double lo, double hi, std::size_t n,
                              unsigned threads = 1);

}  // namespace tritherm
