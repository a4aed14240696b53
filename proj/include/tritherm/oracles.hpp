// oracles.hpp — independent reference solutions of the full master equation
//
// Both oracles work with the complete 8x8 density matrix, vectorised over the
// 64-element orthonormal basis of Hermitian matrices, so the generator is a real
// 64x64 matrix. Eigenoperators are rebuilt from a numeric diagonalisation and the
// sigma_x coupling operators; nothing from the analytic channel table is reused.

#pragma once

#include <array>
#include <complex>
#include <optional>

#include "tritherm/steady.hpp"

namespace tritherm {

inline constexpr int kSuperDim = kLevels * kLevels;

using SuperMatrix = Eigen::Matrix<double, kSuperDim, kSuperDim>;
using SuperVector = Eigen::Matrix<double, kSuperDim, 1>;
using SuperRow = Eigen::Matrix<double, 1, kSuperDim>;
using ComplexMatrix8 = Eigen::Matrix<std::complex<double>, kLevels, kLevels>;

struct MasterEquation {
    Matrix8 H;                           // product basis
    NumericEigen eigen;                  // numeric eigenbasis of H
    SuperMatrix unitary;                 // -i[H, .]
    std::array<SuperMatrix, 3> dissipators;
    SuperRow energy;                     // energy * x = Tr(H rho)
    SuperRow trace;                      // trace * x = Tr(rho)
    double min_damping{0.0};             // smallest attached gamma_mu(omega) over all transitions

    SuperMatrix generator() const { return unitary + dissipators[0] + dissipators[1] + dissipators[2]; }
};

/// Builds the secular master equation with dissipators
/// J(-w)(V rho V^+ - {V^+ V, rho}/2) + J(+w)(V^+ rho V - {V V^+, rho}/2).
MasterEquation build_master_equation(const Configuration& config);

SuperVector vectorize(const ComplexMatrix8& rho);
ComplexMatrix8 devectorize(const SuperVector& x);

struct OracleResult {
    std::array<double, 8> populations{};  // numeric eigenbasis, ascending energies
    HeatCurrents currents;
    double max_coherence{0.0};            // largest |rho_ij|, i != j, in the eigenbasis
    double residual{0.0};                 // ||L rho||_2
};

/// Null vector of the 64x64 generator, trace-normalised.
OracleResult liouvillian_oracle(const Configuration& config);

struct RelaxationResult {
    std::array<double, 8> populations{};
    double max_coherence{0.0};
    double final_time{0.0};
    double residual{0.0};      // ||L rho||_F at the end
    double max_trace_drift{0.0};
    std::size_t steps{0};
};

/// Time-integrates the master equation from `initial` until ||L rho|| < tolerance.
/// The horizon t_max is extended automatically up to 1e3 / (smallest damping rate).
/// Throws NoConvergence when the cap is reached first.
RelaxationResult relaxation_oracle(const Configuration& config, double t_max, const ComplexMatrix8& initial,
                                   double tolerance = 1e-12);

/// exp(-H/T)/Z in the product basis.
ComplexMatrix8 gibbs_state(const Matrix8& H, double T);

}  // namespace tritherm
