// eigensystem.hpp — closed-form spectrum and eigenoperators of the three-qubit Hamiltonian
//
// Product basis ordering: |111>, |110>, |101>, |100>, |011>, |010>, |001>, |000>
// (binary descending, qubit order L, M, R; |1> = excited = [1,0]^T).
// Energy levels are stored 0-based: level k here is lambda_{k+1} in the usual 1..8 labelling.

#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "tritherm/model.hpp"

namespace tritherm {

inline constexpr int kLevels = 8;
inline constexpr int kChannelsPerBath = 4;

using Matrix8 = Eigen::Matrix<double, kLevels, kLevels>;
using Vector8 = Eigen::Matrix<double, kLevels, 1>;

/// Per-bath, per-channel table: [terminal][l-1].
using ChannelTable = std::array<std::array<double, kChannelsPerBath>, 3>;

struct EigenSystem {
    std::array<double, 4> Lambda{};   // [omega_R, omega_L, omega_M, 0]
    std::array<double, 8> lambda{};   // ascending eigenvalues
    std::array<double, 4> theta{};    // mixing angles of the four 2x2 blocks
    Matrix8 U = Matrix8::Zero();      // column k is |lambda_k> in the product basis
};

struct LevelPair {
    int upper{0};  // 0-based level index
    int lower{0};
    int sign{1};
};

/// One dissipation channel V_{mu l} = amplitude * sum(sign |lower><upper|).
struct TransitionChannel {
    Terminal bath{Terminal::L};
    int l{1};               // 1..4
    double amplitude{0.0};  // sin(alpha_{mu l})
    double frequency{0.0};  // Bohr frequency omega_{mu l} > 0
    std::array<LevelPair, 2> pairs{};
};

/// H_S = sum_mu (omega_mu / 2) sigma_z^mu + g sigma_x^L sigma_x^M sigma_x^R.
Matrix8 build_hamiltonian(const DeviceParams& params);

/// sigma_x acting on one qubit, in the product basis.
Matrix8 pauli_x(Terminal qubit);

EigenSystem analytic_eigensystem(const DeviceParams& params);

/// Twelve dissipation angles alpha_{mu k} from the four mixing angles.
ChannelTable alpha_angles(const std::array<double, 4>& theta);

/// Twelve Bohr frequencies omega_{mu l} from the closed forms.
ChannelTable bohr_frequencies(const DeviceParams& params);

/// All twelve channels, ordered L1..L4, M1..M4, R1..R4. Throws ChannelInconsistency
/// if a level spacing disagrees with its channel frequency.
std::vector<TransitionChannel> build_channels(const DeviceParams& params);
std::vector<TransitionChannel> build_channels(const DeviceParams& params, const EigenSystem& eig);

/// Matrix of V_{mu l} in the energy eigenbasis.
Matrix8 channel_operator(const TransitionChannel& channel);

struct NumericEigen {
    Vector8 values;   // ascending
    Matrix8 vectors;  // orthonormal columns
};

/// Dense symmetric eigensolver used to cross-check the closed forms.
NumericEigen numeric_diagonalization(const Matrix8& H);

SecularReport assess_secular(const std::vector<TransitionChannel>& channels, const Baths& baths);

}  // namespace tritherm
