#include "tritherm/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tritherm {

namespace {

constexpr double kCurrentFloor = 1e-15;

double max_abs_diff(const std::array<double, 8>& a, const std::array<double, 8>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

CheckResult bound(std::string name, double value, double tolerance, std::string detail = {}) {
    return {std::move(name), value <= tolerance, value, tolerance, std::move(detail), false};
}

}  // namespace

EigenAgreement compare_eigensystems(const DeviceParams& params) {
    const EigenSystem eig = analytic_eigensystem(params);
    const Matrix8 H = build_hamiltonian(params);
    const NumericEigen num = numeric_diagonalization(H);
    EigenAgreement out;
    for (int k = 0; k < kLevels; ++k) {
        out.values = std::max(out.values, std::abs(eig.lambda[static_cast<std::size_t>(k)] - num.values(k)));
        const double plus = (eig.U.col(k) - num.vectors.col(k)).cwiseAbs().maxCoeff();
        const double minus = (eig.U.col(k) + num.vectors.col(k)).cwiseAbs().maxCoeff();
        out.vectors = std::max(out.vectors, std::min(plus, minus));
    }
    out.orthogonality = (eig.U.transpose() * eig.U - Matrix8::Identity()).cwiseAbs().maxCoeff();
    Matrix8 D = Matrix8::Zero();
    for (int k = 0; k < kLevels; ++k) D(k, k) = eig.lambda[static_cast<std::size_t>(k)];
    out.diagonal = (eig.U.transpose() * H * eig.U - D).cwiseAbs().maxCoeff();
    return out;
}

double commutator_residual(const DeviceParams& params) {
    const EigenSystem eig = analytic_eigensystem(params);
    const Matrix8 H = build_hamiltonian(params);
    double worst = 0.0;
    for (const TransitionChannel& ch : build_channels(params, eig)) {
        const Matrix8 V = eig.U * channel_operator(ch) * eig.U.transpose();
        worst = std::max(worst, (H * V - V * H + ch.frequency * V).cwiseAbs().maxCoeff());
    }
    return worst;
}

double completeness_residual(const DeviceParams& params) {
    const EigenSystem eig = analytic_eigensystem(params);
    const auto channels = build_channels(params, eig);
    double worst = 0.0;
    for (Terminal t : kTerminals) {
        Matrix8 sum = Matrix8::Zero();
        for (const auto& ch : channels)
            if (ch.bath == t) {
                const Matrix8 V = channel_operator(ch);
                sum += V + V.transpose();
            }
        const Matrix8 target = eig.U.transpose() * pauli_x(t) * eig.U;
        worst = std::max(worst, (target - sum).cwiseAbs().maxCoeff());
    }
    return worst;
}

OracleAgreement compare_with_liouvillian(const Configuration& config) {
    const OperatingPoint op = evaluate(config);
    const OracleResult oracle = liouvillian_oracle(config);
    OracleAgreement out;
    out.populations = max_abs_diff(op.state.populations, oracle.populations);
    double dq = 0.0;
    for (Terminal t : kTerminals) dq = std::max(dq, std::abs(op.currents[t] - oracle.currents[t]));
    out.currents = dq / std::max(op.currents.max_abs(), kCurrentFloor);
    out.coherence = oracle.max_coherence;
    return out;
}

LawCheck check_laws(const Configuration& config) {
    const HeatCurrents q = steady_currents(config);
    LawCheck out;
    const double scale = q.max_abs();
    out.first = scale > 0.0 ? std::abs(q.sum()) / scale : 0.0;
    out.entropy = q.entropy_production(config.baths);
    return out;
}

Configuration random_configuration(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto uniform = [&](double a, double b) { return a + (b - a) * u01(rng); };
    while (true) {
        const double omega_L = uniform(0.55, 0.95);
        const double g = uniform(0.05, 1.0) * (1.0 - omega_L);
        Baths baths{};
        for (Terminal t : kTerminals) {
            BathSpec& b = baths[index(t)];
            b.label = t;
            b.temperature = uniform(0.05, 1.0);
            b.gamma = std::pow(10.0, uniform(-5.0, -3.0));
            b.spectrum = u01(rng) < 0.5 ? Spectrum::Flat : Spectrum::Ohmic;
        }
        const Configuration c = validate_params(resonant_device(omega_L, g), baths);
        if (assess_secular(build_channels(c.device), c.baths).valid) return c;
    }
}

bool ValidationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed || c.advisory; });
}

ValidationReport run_validation(const Configuration& config, std::uint64_t seed, std::size_t draws) {
    ValidationReport report;
    auto& checks = report.checks;
    const double wR = config.device.omega_R;

    const EigenAgreement eig = compare_eigensystems(config.device);
    checks.push_back(bound("eigen.values", eig.values, 1e-10 * wR));
    checks.push_back(bound("eigen.vectors", eig.vectors, 1e-8));
    checks.push_back(bound("eigen.orthogonality", eig.orthogonality, 1e-12));
    checks.push_back(bound("eigen.diagonal", eig.diagonal, 1e-10 * wR));
    checks.push_back(bound("channels.commutator", commutator_residual(config.device), 1e-12 * wR));
    checks.push_back(bound("channels.completeness", completeness_residual(config.device), 1e-10));

    try {
        const OracleAgreement o = compare_with_liouvillian(config);
        checks.push_back(bound("oracle.populations", o.populations, 1e-8));
        checks.push_back(bound("oracle.currents", o.currents, 1e-8, "relative to max|Q|"));
        checks.push_back(bound("oracle.coherence", o.coherence, 1e-10));
    } catch (const Error& e) {
        checks.push_back({"oracle", false, 0.0, 0.0, e.what(), false});
    }

    try {
        const OperatingPoint op = evaluate(config);
        double T0 = 0.0;
        for (const BathSpec& b : config.baths) T0 = std::max(T0, b.temperature);
        const RelaxationResult r = relaxation_oracle(config, 1e5, gibbs_state(build_hamiltonian(config.device), T0));
        checks.push_back(bound("relaxation.populations", max_abs_diff(op.state.populations, r.populations), 1e-6,
                               "t=" + sci(r.final_time) + ", " + std::to_string(r.steps) + " steps"));
        checks.push_back(bound("relaxation.trace", r.max_trace_drift, 1e-10));
    } catch (const Error& e) {
        checks.push_back({"relaxation", false, 0.0, 0.0, e.what(), false});
    }

    try {
        const LawCheck laws = check_laws(config);
        checks.push_back(bound("laws.first", laws.first, 1e-12, "|sum Q| / max|Q|"));
        checks.push_back({"laws.second", laws.entropy >= -1e-12, laws.entropy, -1e-12, "entropy production", false});
    } catch (const Error& e) {
        checks.push_back({"laws", false, 0.0, 0.0, e.what(), false});
    }

    const SecularReport sec = assess_secular(build_channels(config.device), config.baths);
    checks.push_back({"secular", sec.valid, sec.ratio, kSecularThreshold,
                      sec.valid ? "" : "gamma is not small against the Bohr-frequency gaps", true});

    if (draws > 0) {
        std::mt19937_64 rng(seed);
        const std::string what = std::to_string(draws) + " draws, seed " + std::to_string(seed);
        std::vector<CheckResult> batch{
            bound("random.eigen.values", 0.0, 1e-10, what),      bound("random.eigen.vectors", 0.0, 1e-8, what),
            bound("random.commutator", 0.0, 1e-12, what),        bound("random.completeness", 0.0, 1e-10, what),
            bound("random.oracle.populations", 0.0, 1e-8, what), bound("random.oracle.currents", 0.0, 1e-8, what),
            bound("random.oracle.coherence", 0.0, 1e-10, what),  bound("random.laws.first", 0.0, 1e-12, what),
        };
        bool failed = false;
        double min_entropy = 0.0;
        std::string failure;
        for (std::size_t i = 0; i < draws; ++i) {
            const Configuration c = random_configuration(rng);
            try {
                const EigenAgreement e = compare_eigensystems(c.device);
                const OracleAgreement o = compare_with_liouvillian(c);
                const LawCheck l = check_laws(c);
                const double values[] = {e.values,      e.vectors,  commutator_residual(c.device),
                                         completeness_residual(c.device), o.populations, o.currents,
                                         o.coherence,   l.first};
                for (std::size_t k = 0; k < batch.size(); ++k) batch[k].value = std::max(batch[k].value, values[k]);
                min_entropy = std::min(min_entropy, l.entropy);
            } catch (const Error& err) {
                failed = true;
                failure = "draw " + std::to_string(i) + ": " + err.what();
            }
        }
        for (CheckResult& c : batch) {
            c.passed = !failed && c.value <= c.tolerance;
            if (failed) c.detail = failure;
            checks.push_back(c);
        }
        checks.push_back({"random.laws.second", !failed && min_entropy >= -1e-12, min_entropy, -1e-12,
                          failed ? failure : what, false});
    }
    return report;
}

}  // namespace tritherm
