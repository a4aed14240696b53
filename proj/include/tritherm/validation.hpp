// validation.hpp — self-checks behind `tritherm validate`
//
// Compares the analytic eigensystem with a dense eigensolver, the rate-matrix
// steady state with both master-equation oracles, and checks the two laws, for
// the given configuration and for a seeded batch of random devices.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tritherm/oracles.hpp"

namespace tritherm {

struct EigenAgreement {
    double values{0.0};         // max |lambda_analytic - lambda_numeric|
    double vectors{0.0};        // max entry difference, up to column sign
    double orthogonality{0.0};  // ||U^T U - I||_max
    double diagonal{0.0};       // ||U^T H U - diag(lambda)||_max
};

EigenAgreement compare_eigensystems(const DeviceParams& params);

/// max over the twelve channels of ||[H, V] + w V||_max, V taken to the product basis.
double commutator_residual(const DeviceParams& params);

/// max over baths of ||U^T sigma_x U - sum_l (V_l + V_l^T)||_max.
double completeness_residual(const DeviceParams& params);

struct OracleAgreement {
    double populations{0.0};  // max |p_rate - p_oracle|
    double currents{0.0};     // max |dQ| / max|Q|
    double coherence{0.0};    // oracle's largest steady coherence
};

OracleAgreement compare_with_liouvillian(const Configuration& config);

struct LawCheck {
    double first{0.0};   // |sum Q| / max|Q| (0 when every current is 0)
    double entropy{0.0}; // -sum Q/T over attached baths with T > 0
};

LawCheck check_laws(const Configuration& config);

/// Random resonant device with random baths, redrawn until the secular ratio is below 0.1.
/// omega_L in [0.55, 0.95], g in [0.05, 1] omega_M, T in [0.05, 1], gamma in [1e-5, 1e-3] (log-uniform).
Configuration random_configuration(std::mt19937_64& rng);

struct CheckResult {
    std::string name;
    bool passed{true};
    double value{0.0};
    double tolerance{0.0};
    std::string detail;
    bool advisory{false};  // reported but never fails the run
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

ValidationReport run_validation(const Configuration& config, std::uint64_t seed, std::size_t draws);

}  // namespace tritherm
