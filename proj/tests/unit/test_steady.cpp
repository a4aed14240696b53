#include <cmath>
#include <random>

#include "doctest.h"
#include "reference.hpp"
#include "tritherm/oracles.hpp"
#include "tritherm/validation.hpp"

using namespace tritherm;

namespace {

RateMatrices rates_of(const Configuration& c) {
    const EigenSystem e = analytic_eigensystem(c.device);
    return build_rate_matrices(build_channels(c.device, e), e, c.baths);
}

double rel_current_error(const HeatCurrents& q, const std::array<double, 3>& r) {
    const double scale = std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
    return std::max({std::abs(q.Q_L - r[0]), std::abs(q.Q_M - r[1]), std::abs(q.Q_R - r[2])}) / scale;
}

ErrorCode failure(const Configuration& c) {
    try {
        steady_currents(c);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("steady") {

TEST_CASE("detached baths give zero generators and a singular steady state") {
    const Configuration c = validate_params(resonant_device(0.9, 0.01), make_baths(0.2, 0.1, 0.02, 0.0));
    const RateMatrices r = rates_of(c);
    for (Terminal t : kTerminals) CHECK(r.of(t).cwiseAbs().maxCoeff() == 0.0L);
    CHECK(failure(c) == ErrorCode::SingularSteadyState);
}

TEST_CASE("a single attached bath cannot connect the level graph") {
    Configuration c = fixture::fig2();
    c.bath(Terminal::L).gamma = 0.0;
    c.bath(Terminal::R).gamma = 0.0;
    CHECK(failure(c) == ErrorCode::SingularSteadyState);
}

TEST_CASE("rate matrix structure") {
    const RateMatrices r = rates_of(fixture::fig2());
    for (Terminal t : kTerminals) {
        const MatrixR8& M = r.of(t);
        for (int j = 0; j < 8; ++j) {
            CHECK(std::abs(static_cast<double>(M.col(j).sum())) <= 1e-18);
            for (int i = 0; i < 8; ++i) {
                if (i == j) CHECK(M(i, j) <= 0.0L);
                else CHECK(M(i, j) >= 0.0L);
            }
        }
    }
    CHECK(r.channels.size() == 12);
}

TEST_CASE("rates at very high and zero temperature") {
    const DeviceParams p = resonant_device(0.9, 0.01);
    const EigenSystem e = analytic_eigensystem(p);
    const auto channels = build_channels(p, e);
    const RateMatrices hot = build_rate_matrices(channels, e, make_baths(1e8, 1e8, 1e8));
    for (const ChannelRates& c : hot.channels)
        if (c.up > 0) CHECK(static_cast<double>(c.down / c.up) == doctest::Approx(1.0).epsilon(1e-7));
    const RateMatrices cold = build_rate_matrices(channels, e, make_baths(0.0, 0.0, 0.0));
    for (std::size_t k = 0; k < cold.channels.size(); ++k) {
        CHECK(cold.channels[k].up == 0.0L);
        const double s = channels[k].amplitude;
        CHECK(static_cast<double>(cold.channels[k].down) == doctest::Approx(1e-4 * s * s).epsilon(1e-14));
    }
}

TEST_CASE("equal temperatures give the Gibbs state and no currents") {
    for (double T : {0.05, 0.2, 1.0, 3.0}) {
        const Configuration c = validate_params(resonant_device(0.9, 0.01), make_baths(T, T, T));
        const OperatingPoint op = evaluate(c);
        const auto gibbs = ref::gibbs(c.device, T);
        for (int k = 0; k < 8; ++k) CHECK(std::abs(op.state.populations[k] - gibbs[k]) < 1e-12);
        CHECK(op.currents.max_abs() <= 1e-14);
        const auto lib = gibbs_populations(op.eig.lambda, T);
        for (int k = 0; k < 8; ++k) CHECK(std::abs(lib[k] - gibbs[k]) < 1e-13);
    }
    const auto ground = gibbs_populations(analytic_eigensystem(resonant_device(0.9, 0.01)).lambda, 0.0);
    CHECK(ground[0] == 1.0);
}

TEST_CASE("steady state agrees with an independent Pauli rate equation") {
    std::mt19937_64 rng(3);
    for (int draw = 0; draw < 60; ++draw) {
        const Configuration c = draw == 0 ? fixture::fig2() : draw == 1 ? fixture::fig4b() : random_configuration(rng);
        const OperatingPoint op = evaluate(c);
        const ref::Pauli r = ref::pauli_master(c);
        for (int k = 0; k < 8; ++k) CHECK(std::abs(op.state.populations[k] - r.p[k]) < 1e-8);
        CHECK(rel_current_error(op.currents, r.Q) < 1e-8);
    }
}

TEST_CASE("steady state invariants") {
    std::mt19937_64 rng(4);
    for (int draw = 0; draw < 100; ++draw) {
        const Configuration c = random_configuration(rng);
        const OperatingPoint op = evaluate(c);
        double sum = 0.0;
        for (double p : op.state.populations) {
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
        CHECK(op.state.residual <= 1e-10 * static_cast<double>(op.rates.max_rate()));
        CHECK(std::abs(op.currents.sum()) <= 1e-12 * op.currents.max_abs());
        CHECK(op.currents.entropy_production(c.baths) >= -1e-12);
    }
}

TEST_CASE("detached bath L") {
    Configuration c = fixture::fig5();
    c.bath(Terminal::L).gamma = 0.0;
    c.bath(Terminal::R).temperature = 0.4;
    const HeatCurrents q = steady_currents(c);
    CHECK(q.Q_L == 0.0);
    CHECK(q.Q_M == doctest::Approx(-q.Q_R).epsilon(1e-12));
    CHECK(q.Q_R > 0.0);  // the hotter bath feeds the system
}

TEST_CASE("Fig. 2 point agrees with the master-equation oracles") {
    const Configuration c = fixture::fig2(0.1);
    const OperatingPoint op = evaluate(c);
    CHECK(std::abs(op.currents.sum()) <= 1e-12 * op.currents.max_abs());
    const OracleResult o = liouvillian_oracle(c);
    for (int k = 0; k < 8; ++k) CHECK(std::abs(op.state.populations[k] - o.populations[k]) < 1e-8);
    CHECK(rel_current_error(op.currents, {o.currents.Q_L, o.currents.Q_M, o.currents.Q_R}) < 1e-8);
}

TEST_CASE("global scaling rescales currents by s^2") {
    const Configuration base = fixture::fig4a(0.3);
    const HeatCurrents q0 = steady_currents(base);
    for (double s : {0.25, 2.0, 7.0}) {
        DeviceParams p = base.device;
        p.omega_L *= s;
        p.omega_M *= s;
        p.omega_R *= s;
        p.g *= s;
        Baths b = base.baths;
        for (BathSpec& bath : b) {
            bath.temperature *= s;
            bath.gamma *= s;
        }
        const HeatCurrents q = steady_currents(validate_params(p, b));
        for (Terminal t : kTerminals) CHECK(q[t] == doctest::Approx(s * s * q0[t]).epsilon(1e-10));
    }
}

TEST_CASE("entropy production skips baths at zero temperature") {
    const Configuration c = validate_params(resonant_device(0.9, 0.01), make_baths(0.2, 0.0, 0.02));
    const HeatCurrents q = steady_currents(c);
    CHECK(std::isfinite(q.entropy_production(c.baths)));
    CHECK(std::abs(q.sum()) <= 1e-12 * q.max_abs());
}

}  // TEST_SUITE
