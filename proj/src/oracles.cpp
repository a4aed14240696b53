#include "tritherm/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

namespace tritherm {

namespace {

using Complex = std::complex<double>;
using SuperMatrixR = Eigen::Matrix<Real, kSuperDim, kSuperDim>;
using SuperVectorR = Eigen::Matrix<Real, kSuperDim, 1>;

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Basis layout: 8 diagonal projectors, then 28 symmetric and 28 antisymmetric pairs (i < j).
struct OffDiagonal {
    int i, j;
};

const std::array<OffDiagonal, 28>& off_diagonal_pairs() {
    static const std::array<OffDiagonal, 28> pairs = [] {
        std::array<OffDiagonal, 28> out{};
        std::size_t n = 0;
        for (int i = 0; i < kLevels; ++i)
            for (int j = i + 1; j < kLevels; ++j) out[n++] = {i, j};
        return out;
    }();
    return pairs;
}

ComplexMatrix8 basis_element(int k) {
    ComplexMatrix8 B = ComplexMatrix8::Zero();
    if (k < kLevels) {
        B(k, k) = 1.0;
        return B;
    }
    const bool antisymmetric = k >= kLevels + 28;
    const OffDiagonal& od = off_diagonal_pairs()[static_cast<std::size_t>(k - kLevels - (antisymmetric ? 28 : 0))];
    if (antisymmetric) {
        B(od.i, od.j) = Complex(0.0, kInvSqrt2);
        B(od.j, od.i) = Complex(0.0, -kInvSqrt2);
    } else {
        B(od.i, od.j) = kInvSqrt2;
        B(od.j, od.i) = kInvSqrt2;
    }
    return B;
}

template <class Map>
SuperMatrix superoperator(Map&& apply) {
    SuperMatrix S;
    for (int k = 0; k < kSuperDim; ++k) S.col(k) = vectorize(apply(basis_element(k)));
    return S;
}

struct Eigenoperator {
    double frequency;
    Matrix8 V;  // lab basis, lowers energy by `frequency`
};

// Groups the matrix elements of sigma_x^mu between numeric eigenvectors by Bohr frequency.
std::vector<Eigenoperator> eigenoperators(const Matrix8& coupling, const NumericEigen& eigen) {
    const Matrix8 X = eigen.vectors.transpose() * coupling * eigen.vectors;
    const double scale = std::max(1.0, eigen.values.cwiseAbs().maxCoeff());
    std::vector<Eigenoperator> ops;
    for (int i = 0; i < kLevels; ++i) {
        for (int j = 0; j < kLevels; ++j) {
            const double w = eigen.values(j) - eigen.values(i);
            if (w <= 1e-9 * scale || std::abs(X(i, j)) < 1e-13) continue;
            auto it = std::find_if(ops.begin(), ops.end(),
                                   [&](const Eigenoperator& op) { return std::abs(op.frequency - w) <= 1e-9 * scale; });
            if (it == ops.end()) {
                ops.push_back({w, Matrix8::Zero()});
                it = ops.end() - 1;
            }
            it->V += X(i, j) * eigen.vectors.col(i) * eigen.vectors.col(j).transpose();
        }
    }
    return ops;
}

double min_attached_damping(const std::vector<std::vector<Eigenoperator>>& ops, const Baths& baths) {
    double m = std::numeric_limits<double>::infinity();
    for (Terminal t : kTerminals) {
        const BathSpec& bath = baths[index(t)];
        if (!bath.attached()) continue;
        for (const auto& op : ops[index(t)]) m = std::min(m, damping_rate(bath, op.frequency));
    }
    return m;
}

std::array<double, 8> eigenbasis_populations(const ComplexMatrix8& rho, const NumericEigen& eigen, double* coherence) {
    const ComplexMatrix8 U = eigen.vectors.cast<Complex>();
    const ComplexMatrix8 r = U.adjoint() * rho * U;
    std::array<double, 8> p{};
    double c = 0.0;
    for (int i = 0; i < kLevels; ++i) {
        p[static_cast<std::size_t>(i)] = r(i, i).real();
        for (int j = 0; j < kLevels; ++j)
            if (i != j) c = std::max(c, std::abs(r(i, j)));
    }
    if (coherence) *coherence = c;
    return p;
}

}  // namespace

SuperVector vectorize(const ComplexMatrix8& rho) {
    SuperVector x;
    for (int k = 0; k < kLevels; ++k) x(k) = rho(k, k).real();
    const auto& pairs = off_diagonal_pairs();
    for (std::size_t n = 0; n < pairs.size(); ++n) {
        const Complex z = 0.5 * (rho(pairs[n].i, pairs[n].j) + std::conj(rho(pairs[n].j, pairs[n].i)));
        x(kLevels + static_cast<int>(n)) = std::numbers::sqrt2 * z.real();
        x(kLevels + 28 + static_cast<int>(n)) = std::numbers::sqrt2 * z.imag();
    }
    return x;
}

ComplexMatrix8 devectorize(const SuperVector& x) {
    ComplexMatrix8 rho = ComplexMatrix8::Zero();
    for (int k = 0; k < kLevels; ++k) rho(k, k) = x(k);
    const auto& pairs = off_diagonal_pairs();
    for (std::size_t n = 0; n < pairs.size(); ++n) {
        const Complex z(x(kLevels + static_cast<int>(n)) * kInvSqrt2, x(kLevels + 28 + static_cast<int>(n)) * kInvSqrt2);
        rho(pairs[n].i, pairs[n].j) = z;
        rho(pairs[n].j, pairs[n].i) = std::conj(z);
    }
    return rho;
}

MasterEquation build_master_equation(const Configuration& config) {
    MasterEquation me;
    me.H = build_hamiltonian(config.device);
    me.eigen = numeric_diagonalization(me.H);
    const ComplexMatrix8 Hc = me.H.cast<Complex>();
    const Complex minus_i(0.0, -1.0);

    me.unitary = superoperator([&](const ComplexMatrix8& B) -> ComplexMatrix8 { return minus_i * (Hc * B - B * Hc); });

    std::vector<std::vector<Eigenoperator>> ops;
    for (Terminal t : kTerminals) ops.push_back(eigenoperators(pauli_x(t), me.eigen));

    for (Terminal t : kTerminals) {
        const BathSpec& bath = config.baths[index(t)];
        SuperMatrix& D = me.dissipators[index(t)];
        D.setZero();
        if (!bath.attached()) continue;
        for (const Eigenoperator& op : ops[index(t)]) {
            const double emit = spectral_density(bath, -op.frequency);
            const double absorb = spectral_density(bath, op.frequency);
            const ComplexMatrix8 V = op.V.cast<Complex>();
            const ComplexMatrix8 Vd = V.adjoint();
            const ComplexMatrix8 VdV = Vd * V;
            const ComplexMatrix8 VVd = V * Vd;
            D += superoperator([&](const ComplexMatrix8& B) -> ComplexMatrix8 {
                return emit * (V * B * Vd - 0.5 * (VdV * B + B * VdV)) +
                       absorb * (Vd * B * V - 0.5 * (VVd * B + B * VVd));
            });
        }
    }

    for (int k = 0; k < kSuperDim; ++k) {
        const ComplexMatrix8 B = basis_element(k);
        me.energy(k) = (Hc * B).trace().real();
        me.trace(k) = B.trace().real();
    }
    me.min_damping = min_attached_damping(ops, config.baths);
    return me;
}

OracleResult liouvillian_oracle(const Configuration& config) {
    const MasterEquation me = build_master_equation(config);
    const SuperMatrix L = me.generator();

    // Trace preservation makes the diagonal rows dependent; swap one for Tr(rho) = 1.
    SuperMatrixR A = L.cast<Real>();
    A.row(0) = me.trace.cast<Real>();
    SuperVectorR b = SuperVectorR::Zero();
    b(0) = 1;

    Eigen::FullPivLU<SuperMatrixR> lu(A);
    if (!lu.isInvertible() || lu.rcond() < 1e-15L)
        throw Error(ErrorCode::SingularSteadyState, "master-equation generator has a degenerate null space");
    SuperVectorR x = lu.solve(b);
    x += lu.solve(b - A * x);

    OracleResult result;
    const SuperVector xd = x.cast<double>();
    result.populations = eigenbasis_populations(devectorize(xd), me.eigen, &result.max_coherence);
    result.residual = (L * xd).norm();

    const Eigen::Matrix<Real, 1, kSuperDim> energy = me.energy.cast<Real>();
    for (Terminal t : kTerminals) {
        const Real q = energy * (me.dissipators[index(t)].cast<Real>() * x);
        result.currents[t] = static_cast<double>(q);
    }
    return result;
}

ComplexMatrix8 gibbs_state(const Matrix8& H, double T) {
    const NumericEigen e = numeric_diagonalization(H);
    std::array<double, 8> lambda{};
    for (int k = 0; k < kLevels; ++k) lambda[static_cast<std::size_t>(k)] = e.values(k);
    const std::array<double, 8> p = gibbs_populations(lambda, T);
    Matrix8 rho = Matrix8::Zero();
    for (int k = 0; k < kLevels; ++k) rho += p[static_cast<std::size_t>(k)] * e.vectors.col(k) * e.vectors.col(k).transpose();
    return rho.cast<Complex>();
}

RelaxationResult relaxation_oracle(const Configuration& config, double t_max, const ComplexMatrix8& initial,
                                   double tolerance) {
    const MasterEquation me = build_master_equation(config);
    if (!std::isfinite(me.min_damping) || me.min_damping <= 0.0)
        throw Error(ErrorCode::SingularSteadyState, "relaxation needs at least one attached bath");
    const SuperMatrix L = me.generator();
    SuperMatrix D = me.dissipators[0] + me.dissipators[1] + me.dissipators[2];
    const double horizon = std::max(t_max, 1e3 / me.min_damping);

    // Interaction picture: the secular dissipator commutes with -i[H, .], so the
    // rotated state obeys x' = D x and every quantity we report is frame invariant.
    SuperVector x = vectorize(initial);
    RelaxationResult out;
    auto trace_drift = [&](const SuperVector& v) { return std::abs(me.trace.dot(v) - 1.0); };
    out.max_trace_drift = trace_drift(x);
    out.residual = (L * x).norm();

    // Dormand-Prince 5(4)
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    (void)c2; (void)c3; (void)c4; (void)c5;  // autonomous system

    constexpr double rtol = 1e-10;
    constexpr double atol = 1e-14;
    const double max_rate = std::max(D.cwiseAbs().maxCoeff(), 1e-300);
    double dt = 0.1 / max_rate;
    double t = 0.0;
    SuperVector k1 = D * x;

    while (out.residual >= tolerance) {
        if (t >= horizon)
            throw Error(ErrorCode::NoConvergence, "relaxation did not converge by t=" + std::to_string(t) +
                                                      " (residual " + std::to_string(out.residual) + ")");
        dt = std::min(dt, horizon - t);
        const SuperVector k2 = D * (x + dt * a21 * k1);
        const SuperVector k3 = D * (x + dt * (a31 * k1 + a32 * k2));
        const SuperVector k4 = D * (x + dt * (a41 * k1 + a42 * k2 + a43 * k3));
        const SuperVector k5 = D * (x + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const SuperVector k6 = D * (x + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const SuperVector next = x + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const SuperVector k7 = D * next;
        const SuperVector err = dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err_norm = 0.0;
        for (int i = 0; i < kSuperDim; ++i)
            err_norm = std::max(err_norm, std::abs(err(i)) / (atol + rtol * std::max(std::abs(x(i)), std::abs(next(i)))));

        if (err_norm <= 1.0) {
            t += dt;
            x = next;
            k1 = k7;
            ++out.steps;
            out.max_trace_drift = std::max(out.max_trace_drift, trace_drift(x));
            out.residual = (L * x).norm();
        }
        const double factor = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
        dt *= std::clamp(factor, 0.2, 5.0);
    }

    out.final_time = t;
    out.populations = eigenbasis_populations(devectorize(x), me.eigen, &out.max_coherence);
    return out;
}

}  // namespace tritherm
