#include "tritherm/model.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace tritherm {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ResonanceViolation: return "ResonanceViolation";
        case ErrorCode::OrderingViolation: return "OrderingViolation";
        case ErrorCode::DegenerateQubits: return "DegenerateQubits";
        case ErrorCode::NonPositiveFrequency: return "NonPositiveFrequency";
        case ErrorCode::InvalidBath: return "InvalidBath";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ChannelInconsistency: return "ChannelInconsistency";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::SingularSteadyState: return "SingularSteadyState";
        case ErrorCode::NumericalInstability: return "NumericalInstability";
        case ErrorCode::FirstLawViolation: return "FirstLawViolation";
        case ErrorCode::SecondLawViolation: return "SecondLawViolation";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
        case ErrorCode::BothCurrentsZero: return "BothCurrentsZero";
        case ErrorCode::PointFailure: return "PointFailure";
    }
    return "UnknownError";
}

bool is_validation_error(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ResonanceViolation:
        case ErrorCode::OrderingViolation:
        case ErrorCode::DegenerateQubits:
        case ErrorCode::NonPositiveFrequency:
        case ErrorCode::InvalidBath:
        case ErrorCode::InvalidArgument:
        case ErrorCode::ParseError:
        case ErrorCode::InvalidSpec:
        case ErrorCode::IoError:
            return true;
        default:
            return false;
    }
}

char to_char(Terminal t) noexcept {
    switch (t) {
        case Terminal::L: return 'L';
        case Terminal::M: return 'M';
        case Terminal::R: return 'R';
    }
    return '?';
}

Terminal parse_terminal(std::string_view s) {
    if (s == "L" || s == "l") return Terminal::L;
    if (s == "M" || s == "m") return Terminal::M;
    if (s == "R" || s == "r") return Terminal::R;
    throw Error(ErrorCode::InvalidArgument, "unknown terminal '" + std::string(s) + "' (expected L, M or R)");
}

std::string_view to_string(Spectrum s) noexcept {
    return s == Spectrum::Flat ? "flat" : "ohmic";
}

Spectrum parse_spectrum(std::string_view s) {
    if (s == "flat" || s == "Flat") return Spectrum::Flat;
    if (s == "ohmic" || s == "Ohmic") return Spectrum::Ohmic;
    throw Error(ErrorCode::InvalidArgument, "unknown spectrum '" + std::string(s) + "' (expected flat or ohmic)");
}

Baths make_baths(double T_L, double T_M, double T_R, double gamma, Spectrum spectrum) {
    return {BathSpec{Terminal::L, T_L, gamma, spectrum},
            BathSpec{Terminal::M, T_M, gamma, spectrum},
            BathSpec{Terminal::R, T_R, gamma, spectrum}};
}

DeviceParams resonant_device(double omega_L, double g, double omega_R) {
    return DeviceParams{omega_L, omega_R - omega_L, omega_R, g};
}

namespace {

std::string describe(const DeviceParams& p) {
    std::ostringstream os;
    os.precision(17);
    os << "(omega_L=" << p.omega_L << ", omega_M=" << p.omega_M << ", omega_R=" << p.omega_R
       << ", g=" << p.g << ")";
    return os.str();
}

}  // namespace

Configuration validate_params(const DeviceParams& p, const Baths& baths) {
    for (double v : {p.omega_L, p.omega_M, p.omega_R, p.g}) {
        if (!std::isfinite(v))
            throw Error(ErrorCode::NonPositiveFrequency, "non-finite device parameter " + describe(p));
    }
    if (p.omega_R <= 0.0 || p.omega_L <= 0.0 || p.omega_M <= 0.0)
        throw Error(ErrorCode::OrderingViolation, "qubit frequencies must be positive " + describe(p));
    if (p.g <= 0.0)
        throw Error(ErrorCode::OrderingViolation, "coupling g must be positive " + describe(p));

    const double degenerate = kDegeneracyTolerance * p.omega_R;
    if (std::abs(p.omega_L - p.omega_M) <= degenerate || std::abs(p.omega_R - p.omega_L) <= degenerate ||
        std::abs(p.omega_R - p.omega_M) <= degenerate)
        throw Error(ErrorCode::DegenerateQubits, "two qubit frequencies coincide " + describe(p));

    if (std::abs(p.omega_L + p.omega_M - p.omega_R) > kResonanceTolerance * p.omega_R)
        throw Error(ErrorCode::ResonanceViolation, "omega_L + omega_M != omega_R " + describe(p));

    if (!(p.omega_R > p.omega_L && p.omega_L > p.omega_M))
        throw Error(ErrorCode::OrderingViolation, "require omega_R > omega_L > omega_M " + describe(p));

    for (Terminal t : kTerminals) {
        const BathSpec& b = baths[index(t)];
        const std::string name(1, to_char(t));
        if (b.label != t)
            throw Error(ErrorCode::InvalidBath, "bath in slot " + name + " is labelled " + to_char(b.label));
        if (!std::isfinite(b.temperature) || b.temperature < 0.0)
            throw Error(ErrorCode::InvalidBath, "bath " + name + " temperature must be finite and >= 0");
        if (!std::isfinite(b.gamma) || b.gamma < 0.0)
            throw Error(ErrorCode::InvalidBath, "bath " + name + " gamma must be finite and >= 0");
    }
    return Configuration{p, baths};
}

double thermal_occupation(double omega, double T) {
    if (!(omega > 0.0))
        throw Error(ErrorCode::NonPositiveFrequency, "thermal_occupation needs omega > 0");
    if (T < 0.0 || std::isnan(T))
        throw Error(ErrorCode::InvalidBath, "thermal_occupation needs T >= 0");
    if (T == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / T);
}

double damping_rate(const BathSpec& bath, double omega) {
    if (!(omega > 0.0))
        throw Error(ErrorCode::NonPositiveFrequency, "damping_rate needs omega > 0");
    return bath.spectrum == Spectrum::Flat ? bath.gamma : bath.gamma * omega;
}

double spectral_density(const BathSpec& bath, double omega_signed) {
    if (omega_signed == 0.0 || std::isnan(omega_signed))
        throw Error(ErrorCode::NonPositiveFrequency, "spectral_density needs |omega| > 0");
    const double w = std::abs(omega_signed);
    const double rate = damping_rate(bath, w);
    const double n = thermal_occupation(w, bath.temperature);
    return omega_signed > 0.0 ? rate * n : rate * (n + 1.0);
}

}  // namespace tritherm
