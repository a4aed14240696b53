#include "tritherm/eigensystem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace tritherm {

namespace {

using Matrix2 = Eigen::Matrix2d;

Matrix2 sigma_x2() { return (Matrix2() << 0, 1, 1, 0).finished(); }
Matrix2 sigma_z2() { return (Matrix2() << 1, 0, 0, -1).finished(); }

Matrix8 kron3(const Matrix2& a, const Matrix2& b, const Matrix2& c) {
    Matrix8 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int p = 0; p < 2; ++p)
                    for (int q = 0; q < 2; ++q)
                        for (int r = 0; r < 2; ++r)
                            out(4 * i + 2 * j + k, 4 * p + 2 * q + r) = a(i, p) * b(j, q) * c(k, r);
    return out;
}

Matrix8 on_qubit(Terminal t, const Matrix2& op) {
    const Matrix2 id = Matrix2::Identity();
    switch (t) {
        case Terminal::L: return kron3(op, id, id);
        case Terminal::M: return kron3(id, op, id);
        case Terminal::R: return kron3(id, id, op);
    }
    return Matrix8::Zero();
}

// Product-basis row of a computational state given as bits (L, M, R).
constexpr int basis_index(int bL, int bM, int bR) { return 7 - (4 * bL + 2 * bM + bR); }

// Lowering pairs (upper -> lower, relative sign) for every channel, 1-based levels.
// The L2 and L4 rows carry an extra global sign so that sum_l (V + V^T) reproduces
// sigma_x^L in the eigenbasis with the amplitudes sin(alpha) as defined below.
struct PairRow {
    int u1, d1, s1, u2, d2, s2;
};

constexpr std::array<std::array<PairRow, 4>, 3> kPairTable{{
    {{{3, 1, -1, 8, 6, +1}, {6, 1, -1, 8, 3, -1}, {4, 2, -1, 7, 5, +1}, {5, 2, -1, 7, 4, -1}}},
    {{{2, 1, +1, 8, 7, +1}, {8, 2, +1, 7, 1, -1}, {4, 3, +1, 6, 5, +1}, {5, 3, +1, 6, 4, -1}}},
    {{{8, 5, +1, 4, 1, +1}, {5, 1, +1, 8, 4, -1}, {7, 6, +1, 3, 2, +1}, {6, 2, +1, 7, 3, -1}}},
}};

}  // namespace

Matrix8 build_hamiltonian(const DeviceParams& p) {
    const Matrix2 sz = sigma_z2();
    const Matrix2 sx = sigma_x2();
    Matrix8 H = 0.5 * (p.omega_L * on_qubit(Terminal::L, sz) + p.omega_M * on_qubit(Terminal::M, sz) +
                       p.omega_R * on_qubit(Terminal::R, sz));
    H += p.g * kron3(sx, sx, sx);
    return H;
}

Matrix8 pauli_x(Terminal qubit) { return on_qubit(qubit, sigma_x2()); }

EigenSystem analytic_eigensystem(const DeviceParams& p) {
    EigenSystem eig;
    eig.Lambda = {p.omega_R, p.omega_L, p.omega_M, 0.0};

    std::array<double, 4> E{};
    std::array<double, 4> s{};
    std::array<double, 4> c{};
    for (int i = 0; i < 4; ++i) {
        const double Lam = eig.Lambda[i];
        E[i] = std::hypot(Lam, p.g);
        // sin(theta) = g / sqrt((E + Lambda)^2 + g^2), cos(theta) = (E + Lambda) / (same)
        eig.theta[i] = std::atan2(p.g, E[i] + Lam);
        s[i] = std::sin(eig.theta[i]);
        c[i] = std::cos(eig.theta[i]);
    }
    for (int j = 0; j < 4; ++j) {
        eig.lambda[j] = -E[j];
        eig.lambda[7 - j] = E[j];
    }

    // Each 2x2 block pairs a state with its all-flipped partner.
    const int s111 = basis_index(1, 1, 1), s000 = basis_index(0, 0, 0);
    const int s101 = basis_index(1, 0, 1), s010 = basis_index(0, 1, 0);
    const int s100 = basis_index(1, 0, 0), s011 = basis_index(0, 1, 1);
    const int s110 = basis_index(1, 1, 0), s001 = basis_index(0, 0, 1);

    Matrix8& U = eig.U;
    U(s111, 0) = -s[0]; U(s000, 0) = c[0];
    U(s101, 1) = -s[1]; U(s010, 1) = c[1];
    U(s100, 2) = -c[2]; U(s011, 2) = s[2];
    U(s110, 3) = -c[3]; U(s001, 3) = s[3];
    U(s110, 4) = s[3];  U(s001, 4) = c[3];
    U(s100, 5) = s[2];  U(s011, 5) = c[2];
    U(s101, 6) = c[1];  U(s010, 6) = s[1];
    U(s111, 7) = c[0];  U(s000, 7) = s[0];
    return eig;
}

ChannelTable alpha_angles(const std::array<double, 4>& theta) {
    constexpr double quarter = std::numbers::pi / 4.0;
    // 1-based access to match the closed forms.
    auto th = [&](int i) { return theta[static_cast<std::size_t>(i - 1)]; };
    ChannelTable alpha{};
    for (int k = 1; k <= 4; ++k) {
        const int b = (k + 1) / 2;  // ceil(k/2)
        const double parity = (k % 2 == 0) ? 1.0 : -1.0;
        const auto slot = static_cast<std::size_t>(k - 1);
        alpha[index(Terminal::L)][slot] = quarter - parity * (quarter - (th(b) - th(b + 2)));
        // sigma_x^M links blocks (1,2) and (3,4); the second pair is theta_3 - theta_4.
        alpha[index(Terminal::M)][slot] = quarter - parity * (quarter - (th(2 * b - 1) - th(2 * b)));
        alpha[index(Terminal::R)][slot] = quarter + parity * (quarter - (th(b) + th(5 - b)));
    }
    return alpha;
}

ChannelTable bohr_frequencies(const DeviceParams& p) {
    const std::array<double, 4> E{std::hypot(p.omega_R, p.g), std::hypot(p.omega_L, p.g),
                                  std::hypot(p.omega_M, p.g), p.g};
    auto pair = [](double a, double b) { return std::array<double, 4>{a - b, a + b, 0.0, 0.0}; };
    ChannelTable w{};
    auto fill = [&](Terminal t, int i, int j, int m, int n) {
        const auto lo = pair(E[i], E[j]);
        const auto hi = pair(E[m], E[n]);
        w[index(t)] = {lo[0], lo[1], hi[0], hi[1]};
    };
    fill(Terminal::L, 0, 2, 1, 3);
    fill(Terminal::M, 0, 1, 2, 3);
    fill(Terminal::R, 0, 3, 1, 2);
    return w;
}

std::vector<TransitionChannel> build_channels(const DeviceParams& params) {
    return build_channels(params, analytic_eigensystem(params));
}

std::vector<TransitionChannel> build_channels(const DeviceParams& params, const EigenSystem& eig) {
    const ChannelTable alpha = alpha_angles(eig.theta);
    const ChannelTable freq = bohr_frequencies(params);
    const double tol = 1e-12 * params.omega_R;

    std::vector<TransitionChannel> channels;
    channels.reserve(12);
    for (Terminal t : kTerminals) {
        for (int l = 1; l <= kChannelsPerBath; ++l) {
            const auto slot = static_cast<std::size_t>(l - 1);
            const PairRow& row = kPairTable[index(t)][slot];
            TransitionChannel ch;
            ch.bath = t;
            ch.l = l;
            ch.amplitude = std::sin(alpha[index(t)][slot]);
            ch.frequency = freq[index(t)][slot];
            ch.pairs = {LevelPair{row.u1 - 1, row.d1 - 1, row.s1}, LevelPair{row.u2 - 1, row.d2 - 1, row.s2}};
            for (const LevelPair& pr : ch.pairs) {
                const double gap = eig.lambda[static_cast<std::size_t>(pr.upper)] -
                                   eig.lambda[static_cast<std::size_t>(pr.lower)];
                if (std::abs(gap - ch.frequency) > tol)
                    throw Error(ErrorCode::ChannelInconsistency,
                                std::string("channel ") + to_char(t) + std::to_string(l) +
                                    " frequency does not match its level spacing");
            }
            channels.push_back(ch);
        }
    }
    return channels;
}

Matrix8 channel_operator(const TransitionChannel& ch) {
    Matrix8 V = Matrix8::Zero();
    for (const LevelPair& pr : ch.pairs) V(pr.lower, pr.upper) += ch.amplitude * pr.sign;
    return V;
}

NumericEigen numeric_diagonalization(const Matrix8& H) {
    Eigen::SelfAdjointEigenSolver<Matrix8> solver(H);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::ConvergenceFailure, "symmetric eigensolver did not converge");
    return NumericEigen{solver.eigenvalues(), solver.eigenvectors()};
}

SecularReport assess_secular(const std::vector<TransitionChannel>& channels, const Baths& baths) {
    SecularReport report;
    double min_gap = std::numeric_limits<double>::infinity();
    bool any = false;
    for (Terminal t : kTerminals) {
        const BathSpec& bath = baths[index(t)];
        if (!bath.attached()) continue;
        std::vector<double> freqs;
        for (const auto& ch : channels) {
            if (ch.bath != t) continue;
            freqs.push_back(ch.frequency);
            report.max_gamma = std::max(report.max_gamma, damping_rate(bath, ch.frequency));
        }
        std::sort(freqs.begin(), freqs.end());
        for (std::size_t i = 1; i < freqs.size(); ++i) min_gap = std::min(min_gap, freqs[i] - freqs[i - 1]);
        any = true;
    }
    if (!any) return report;
    report.min_gap = min_gap;
    report.ratio = min_gap > 0.0 ? report.max_gamma / min_gap : std::numeric_limits<double>::infinity();
    report.valid = report.ratio < kSecularThreshold;
    return report;
}

}  // namespace tritherm
