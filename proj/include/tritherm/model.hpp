// model.hpp — device parameters, bath definitions and thermal functions
//
// Units: hbar = k_B = 1 and omega_R is the energy scale (defaults to 1).
// Currents therefore come out in units of omega_R^2.

#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "tritherm/errors.hpp"

namespace tritherm {

enum class Terminal : std::size_t { L = 0, M = 1, R = 2 };

inline constexpr std::array<Terminal, 3> kTerminals{Terminal::L, Terminal::M, Terminal::R};

constexpr std::size_t index(Terminal t) noexcept { return static_cast<std::size_t>(t); }
char to_char(Terminal t) noexcept;
Terminal parse_terminal(std::string_view s);

enum class Spectrum { Flat, Ohmic };

std::string_view to_string(Spectrum s) noexcept;
Spectrum parse_spectrum(std::string_view s);

struct DeviceParams {
    double omega_L{0.9};
    double omega_M{0.1};
    double omega_R{1.0};
    double g{0.01};  // trilinear coupling
};

struct BathSpec {
    Terminal label{Terminal::L};
    double temperature{0.0};
    double gamma{1e-4};  // 0 detaches the bath
    Spectrum spectrum{Spectrum::Flat};

    bool attached() const noexcept { return gamma > 0.0; }
};

/// Baths indexed by Terminal (L, M, R).
using Baths = std::array<BathSpec, 3>;

Baths make_baths(double T_L, double T_M, double T_R, double gamma = 1e-4,
                 Spectrum spectrum = Spectrum::Flat);

/// A device plus its three baths that has passed validate_params.
struct Configuration {
    DeviceParams device;
    Baths baths;

    const BathSpec& bath(Terminal t) const { return baths[index(t)]; }
    BathSpec& bath(Terminal t) { return baths[index(t)]; }
};

inline constexpr double kResonanceTolerance = 1e-12;
inline constexpr double kDegeneracyTolerance = 1e-9;
inline constexpr double kSecularThreshold = 0.1;

/// Builds device parameters from (omega_L, g), deriving omega_M = omega_R - omega_L
/// so the resonance condition holds exactly.
DeviceParams resonant_device(double omega_L, double g, double omega_R = 1.0);

/// Checks every device and bath invariant. Throws Error with DegenerateQubits,
/// ResonanceViolation, OrderingViolation, NonPositiveFrequency or InvalidBath.
Configuration validate_params(const DeviceParams& params, const Baths& baths);

/// Bose-Einstein occupation 1/(exp(omega/T) - 1); exactly 0 at T = 0.
double thermal_occupation(double omega, double T);

/// gamma_mu(omega): gamma for Flat, gamma*omega for Ohmic.
double damping_rate(const BathSpec& bath, double omega);

/// J(+w) = gamma(w) n(w) for absorption, J(-w) = gamma(w) (n(w) + 1) for emission.
double spectral_density(const BathSpec& bath, double omega_signed);

struct SecularReport {
    double min_gap{0.0};    // smallest gap between Bohr frequencies of one bath
    double max_gamma{0.0};  // largest gamma_mu(omega_mul) over attached baths
    double ratio{0.0};      // max_gamma / min_gap
    bool valid{true};       // ratio < kSecularThreshold
};

}  // namespace tritherm
