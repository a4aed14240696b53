// steady.hpp — population rate matrices, steady state and heat currents
//
// In the secular regime the steady state is diagonal in the energy eigenbasis, so
// the problem reduces to a classical 8-state Markov generator K = M_L + M_M + M_R.
// The solve and the current sums run in long double; results are rounded to double.

#pragma once

#include <array>
#include <vector>

#include "tritherm/eigensystem.hpp"

namespace tritherm {

using Real = long double;
using MatrixR8 = Eigen::Matrix<Real, kLevels, kLevels>;
using VectorR8 = Eigen::Matrix<Real, kLevels, 1>;

struct ChannelRates {
    Terminal bath{Terminal::L};
    int l{1};
    double frequency{0.0};
    Real up{0};    // B: absorption rate, lower -> upper
    Real down{0};  // A: emission rate, upper -> lower
    std::array<LevelPair, 2> pairs{};
};

struct RateMatrices {
    std::array<MatrixR8, 3> M{MatrixR8::Zero(), MatrixR8::Zero(), MatrixR8::Zero()};
    std::vector<ChannelRates> channels;
    std::array<Real, 8> lambda{};  // energies used for the current sums

    const MatrixR8& of(Terminal t) const { return M[index(t)]; }
    MatrixR8 total() const { return M[0] + M[1] + M[2]; }
    Real max_rate() const;
};

struct SteadyState {
    std::array<double, 8> populations{};
    VectorR8 precise = VectorR8::Zero();  // unrounded populations
    double residual{0.0};                  // ||K p||_max
    double condition{0.0};                 // reciprocal condition estimate of the solve
    bool clipped{false};                   // small negative populations were zeroed
};

struct HeatCurrents {
    double Q_L{0.0};
    double Q_M{0.0};
    double Q_R{0.0};

    double operator[](Terminal t) const { return t == Terminal::L ? Q_L : t == Terminal::M ? Q_M : Q_R; }
    double& operator[](Terminal t) { return t == Terminal::L ? Q_L : t == Terminal::M ? Q_M : Q_R; }
    double sum() const { return Q_L + Q_M + Q_R; }
    double max_abs() const;
    /// -sum Q_mu / T_mu over attached baths with T_mu > 0.
    double entropy_production(const Baths& baths) const;
};

RateMatrices build_rate_matrices(const std::vector<TransitionChannel>& channels, const EigenSystem& eig,
                                 const Baths& baths);

/// Throws SingularSteadyState when the generator has more than one closed class,
/// NumericalInstability when the solve cannot be trusted to six digits.
SteadyState solve_steady(const RateMatrices& rates);

/// Q_mu = <lambda| M_mu |p>; checks the first and second laws.
HeatCurrents heat_currents(const RateMatrices& rates, const SteadyState& state, const Baths& baths);

/// Everything computed for a single operating point.
struct OperatingPoint {
    EigenSystem eig;
    std::vector<TransitionChannel> channels;
    RateMatrices rates;
    SteadyState state;
    HeatCurrents currents;
    SecularReport secular;
};

OperatingPoint evaluate(const Configuration& config);

/// Shortcut for evaluate(config).currents.
HeatCurrents steady_currents(const Configuration& config);

/// Thermal populations exp(-lambda_k / T) / Z (T = 0 puts all weight on the ground level).
std::array<double, 8> gibbs_populations(const std::array<double, 8>& lambda, double T);

}  // namespace tritherm
