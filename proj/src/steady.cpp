#include "tritherm/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tritherm {

namespace {

constexpr double kNegativeTolerance = 1e-10;
constexpr Real kMinReciprocalCondition = 1e-13L;  // ~6 digits left in long double
constexpr int kRefinementSweeps = 2;

Real occupation(Real omega, Real T) {
    if (T == 0) return 0;
    return 1 / std::expm1(omega / T);
}

// Number of closed communicating classes of the Markov generator: the dimension
// of its null space. Edge j -> i whenever K(i, j) > 0.
int closed_classes(const MatrixR8& K) {
    std::array<std::array<bool, 8>, 8> reach{};
    for (int i = 0; i < kLevels; ++i)
        for (int j = 0; j < kLevels; ++j) reach[i][j] = (i == j) || K(j, i) > 0;
    for (int k = 0; k < kLevels; ++k)
        for (int i = 0; i < kLevels; ++i)
            if (reach[i][k])
                for (int j = 0; j < kLevels; ++j) reach[i][j] = reach[i][j] || reach[k][j];

    int count = 0;
    std::array<bool, 8> seen{};
    for (int i = 0; i < kLevels; ++i) {
        if (seen[i]) continue;
        bool closed = true;
        for (int j = 0; j < kLevels; ++j) {
            const bool same_class = reach[i][j] && reach[j][i];
            if (same_class) seen[j] = true;
            if (reach[i][j] && !reach[j][i]) closed = false;
        }
        if (closed) ++count;
    }
    return count;
}

}  // namespace

Real RateMatrices::max_rate() const {
    Real m = 0;
    for (const auto& ch : channels) m = std::max({m, ch.up, ch.down});
    return m;
}

double HeatCurrents::max_abs() const { return std::max({std::abs(Q_L), std::abs(Q_M), std::abs(Q_R)}); }

double HeatCurrents::entropy_production(const Baths& baths) const {
    double sigma = 0.0;
    for (Terminal t : kTerminals) {
        const BathSpec& b = baths[index(t)];
        if (b.attached() && b.temperature > 0.0) sigma -= (*this)[t] / b.temperature;
    }
    return sigma;
}

RateMatrices build_rate_matrices(const std::vector<TransitionChannel>& channels, const EigenSystem& eig,
                                 const Baths& baths) {
    RateMatrices rates;
    for (int k = 0; k < kLevels; ++k) rates.lambda[k] = eig.lambda[k];
    rates.channels.reserve(channels.size());

    for (const TransitionChannel& ch : channels) {
        const BathSpec& bath = baths[index(ch.bath)];
        ChannelRates cr;
        cr.bath = ch.bath;
        cr.l = ch.l;
        cr.frequency = ch.frequency;
        cr.pairs = ch.pairs;
        if (bath.attached()) {
            const Real weight = static_cast<Real>(damping_rate(bath, ch.frequency)) *
                                static_cast<Real>(ch.amplitude) * static_cast<Real>(ch.amplitude);
            const Real n = occupation(ch.frequency, bath.temperature);
            cr.up = weight * n;
            // Emission form (n + 1) rather than exp(w/T) * B, which is 0 * inf at T = 0.
            cr.down = weight * (n + 1);
        }
        MatrixR8& M = rates.M[index(ch.bath)];
        for (const LevelPair& pr : ch.pairs) {
            const int u = pr.upper;
            const int d = pr.lower;
            M(d, d) -= cr.up;
            M(u, d) += cr.up;
            M(u, u) -= cr.down;
            M(d, u) += cr.down;
        }
        rates.channels.push_back(cr);
    }
    return rates;
}

SteadyState solve_steady(const RateMatrices& rates) {
    const MatrixR8 K = rates.total();
    const Real scale = K.cwiseAbs().maxCoeff();
    if (scale == 0)
        throw Error(ErrorCode::SingularSteadyState, "all baths are detached; every state is stationary");
    const int classes = closed_classes(K);
    if (classes != 1)
        throw Error(ErrorCode::SingularSteadyState,
                    "steady state is not unique (" + std::to_string(classes) + " closed classes)");

    // Equilibrate rows, then trade the first balance equation for sum(p) = 1.
    MatrixR8 A = K;
    for (int i = 0; i < kLevels; ++i) {
        const Real row = A.row(i).cwiseAbs().maxCoeff();
        if (row > 0) A.row(i) /= row;
    }
    A.row(0).setOnes();
    VectorR8 b = VectorR8::Zero();
    b(0) = 1;

    Eigen::FullPivLU<MatrixR8> lu(A);
    SteadyState state;
    state.condition = static_cast<double>(lu.rcond());
    if (!lu.isInvertible() || lu.rcond() < kMinReciprocalCondition)
        throw Error(ErrorCode::NumericalInstability,
                    "steady-state system is ill-conditioned (rcond=" + std::to_string(state.condition) + ")");

    VectorR8 p = lu.solve(b);
    for (int sweep = 0; sweep < kRefinementSweeps; ++sweep) p += lu.solve(b - A * p);

    for (int i = 0; i < kLevels; ++i) {
        if (p(i) < -kNegativeTolerance)
            throw Error(ErrorCode::NumericalInstability,
                        "negative population " + std::to_string(static_cast<double>(p(i))));
        if (p(i) < 0) {
            p(i) = 0;
            state.clipped = true;
        }
    }
    p /= p.sum();

    state.precise = p;
    for (int i = 0; i < kLevels; ++i) state.populations[i] = static_cast<double>(p(i));
    state.residual = static_cast<double>((K * p).cwiseAbs().maxCoeff());
    if (state.residual > 1e-10 * static_cast<double>(scale))
        throw Error(ErrorCode::NumericalInstability,
                    "steady-state residual " + std::to_string(state.residual) + " too large");
    return state;
}

HeatCurrents heat_currents(const RateMatrices& rates, const SteadyState& state, const Baths& baths) {
    // <lambda| M_mu |p> regrouped per level pair: each pair contributes its
    // energy gap times the net upward flux, which avoids cancelling O(1) energies.
    std::array<Real, 3> Q{};
    const VectorR8& p = state.precise;
    for (const ChannelRates& ch : rates.channels) {
        for (const LevelPair& pr : ch.pairs) {
            const Real gap = rates.lambda[pr.upper] - rates.lambda[pr.lower];
            Q[index(ch.bath)] += gap * (ch.up * p(pr.lower) - ch.down * p(pr.upper));
        }
    }
    HeatCurrents out{static_cast<double>(Q[0]), static_cast<double>(Q[1]), static_cast<double>(Q[2])};

    Real max_energy = 0;
    for (Real l : rates.lambda) max_energy = std::max(max_energy, std::abs(l));
    const double noise = static_cast<double>(16 * std::numeric_limits<Real>::epsilon() * rates.max_rate() * max_energy);
    if (std::abs(out.sum()) > 1e-12 * out.max_abs() + noise)
        throw Error(ErrorCode::FirstLawViolation, "sum of heat currents " + std::to_string(out.sum()) + " is not zero");
    // A zero-temperature attached bath makes the entropy production unbounded.
    const bool finite_sigma = std::none_of(baths.begin(), baths.end(), [](const BathSpec& b) {
        return b.attached() && b.temperature == 0.0;
    });
    const double sigma = out.entropy_production(baths);
    if (finite_sigma && sigma < -1e-12)
        throw Error(ErrorCode::SecondLawViolation, "negative entropy production " + std::to_string(sigma));
    return out;
}

OperatingPoint evaluate(const Configuration& config) {
    OperatingPoint op;
    op.eig = analytic_eigensystem(config.device);
    op.channels = build_channels(config.device, op.eig);
    op.rates = build_rate_matrices(op.channels, op.eig, config.baths);
    op.state = solve_steady(op.rates);
    op.currents = heat_currents(op.rates, op.state, config.baths);
    op.secular = assess_secular(op.channels, config.baths);
    return op;
}

HeatCurrents steady_currents(const Configuration& config) { return evaluate(config).currents; }

std::array<double, 8> gibbs_populations(const std::array<double, 8>& lambda, double T) {
    std::array<double, 8> p{};
    const double ground = *std::min_element(lambda.begin(), lambda.end());
    if (T == 0.0) {
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = lambda[k] == ground ? 1.0 : 0.0;
    } else {
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::exp(-(lambda[k] - ground) / T);
    }
    double z = 0.0;
    for (double v : p) z += v;
    for (double& v : p) v /= z;
    return p;
}

}  // namespace tritherm
