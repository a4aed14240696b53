#include <cmath>
#include <random>

#include "doctest.h"
#include "reference.hpp"
#include "tritherm/oracles.hpp"

using namespace tritherm;

TEST_SUITE("oracles") {

TEST_CASE("vectorize and devectorize are inverse") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z;
    ComplexMatrix8 A;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) A(i, j) = {z(rng), z(rng)};
    const ComplexMatrix8 rho = A + A.adjoint();
    const SuperVector x = vectorize(rho);
    CHECK((devectorize(x) - rho).cwiseAbs().maxCoeff() < 1e-14);
    // The basis is orthonormal, so the Frobenius norm carries over.
    CHECK(x.norm() == doctest::Approx(rho.norm()).epsilon(1e-14));
}

TEST_CASE("generator preserves trace and the energy row reads Tr(H rho)") {
    const Configuration c = fixture::fig2();
    const MasterEquation me = build_master_equation(c);
    CHECK((me.trace * me.generator()).cwiseAbs().maxCoeff() < 1e-15);
    const ComplexMatrix8 rho = gibbs_state(me.H, 0.3);
    const double energy = (me.H.cast<std::complex<double>>() * rho).trace().real();
    CHECK(me.energy.dot(vectorize(rho)) == doctest::Approx(energy).epsilon(1e-13));
    CHECK(me.trace.dot(vectorize(rho)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(me.min_damping == doctest::Approx(1e-4));
}

TEST_CASE("gibbs_state") {
    const DeviceParams p = resonant_device(0.9, 0.01);
    const ComplexMatrix8 rho = gibbs_state(ref::hamiltonian(p), 0.2);
    CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    const auto d = ref::diagonalize(ref::hamiltonian(p));
    const auto expected = ref::gibbs(p, 0.2);
    for (int k = 0; k < 8; ++k) {
        const double pk = (d.vectors.col(k).transpose().cast<std::complex<double>>() * rho *
                           d.vectors.col(k).cast<std::complex<double>>())(0, 0).real();
        CHECK(pk == doctest::Approx(expected[k]).epsilon(1e-12));
    }
}

TEST_CASE("Liouvillian oracle at equal temperatures") {
    const Configuration c = validate_params(resonant_device(0.9, 0.01), make_baths(0.3, 0.3, 0.3));
    const OracleResult o = liouvillian_oracle(c);
    const auto gibbs = ref::gibbs(c.device, 0.3);
    for (int k = 0; k < 8; ++k) CHECK(std::abs(o.populations[k] - gibbs[k]) < 1e-12);
    CHECK(o.currents.max_abs() < 1e-14);
    CHECK(o.max_coherence < 1e-10);
}

TEST_CASE("Liouvillian oracle matches the rate path on Fig. 4(a) at T_M = 0.3") {
    const Configuration c = fixture::fig4a(0.3);
    const OracleResult o = liouvillian_oracle(c);
    const OperatingPoint op = evaluate(c);
    for (int k = 0; k < 8; ++k) CHECK(std::abs(o.populations[k] - op.state.populations[k]) < 1e-8);
    for (Terminal t : kTerminals)
        CHECK(std::abs(o.currents[t] - op.currents[t]) <= 1e-8 * op.currents.max_abs());
    CHECK(o.max_coherence < 1e-10);
    // Currents from Tr(H L_mu rho) against the golden-rule reference.
    const ref::Pauli r = ref::pauli_master(c);
    for (Terminal t : kTerminals)
        CHECK(std::abs(o.currents[t] - r.Q[index(t)]) <= 1e-8 * op.currents.max_abs());
}

TEST_CASE("Liouvillian oracle reports a disconnected generator") {
    const Configuration c = validate_params(resonant_device(0.9, 0.01), make_baths(0.2, 0.1, 0.02, 0.0));
    CHECK_THROWS_AS(liouvillian_oracle(c), Error);
}

TEST_CASE("relaxation from the steady state converges at once") {
    const Configuration c = fixture::fig2();
    const MasterEquation me = build_master_equation(c);
    const OracleResult o = liouvillian_oracle(c);
    ComplexMatrix8 rho = ComplexMatrix8::Zero();
    for (int k = 0; k < 8; ++k)
        rho += o.populations[k] * (me.eigen.vectors.col(k) * me.eigen.vectors.col(k).transpose()).cast<std::complex<double>>();
    const RelaxationResult r = relaxation_oracle(c, 10.0, rho, 1e-12);
    CHECK(r.steps == 0);
    CHECK(r.final_time == 0.0);
    for (int k = 0; k < 8; ++k) CHECK(std::abs(r.populations[k] - o.populations[k]) < 1e-12);
}

TEST_CASE("relaxation from a Gibbs state reaches the rate-path steady state") {
    const Configuration c = fixture::fig2(0.1);
    const ComplexMatrix8 start = gibbs_state(ref::hamiltonian(c.device), 0.2);
    const RelaxationResult r = relaxation_oracle(c, 1e4, start, 1e-12);
    const OperatingPoint op = evaluate(c);
    for (int k = 0; k < 8; ++k) CHECK(std::abs(r.populations[k] - op.state.populations[k]) < 1e-6);
    CHECK(r.max_trace_drift < 1e-10);
    CHECK(r.residual < 1e-12);
    CHECK(r.max_coherence < 1e-10);
}

TEST_CASE("relaxation gives up at the horizon") {
    Configuration c = fixture::fig4a();
    for (BathSpec& b : c.baths) b.gamma = 1e-2;
    const ComplexMatrix8 start = gibbs_state(ref::hamiltonian(c.device), 1.0);
    CHECK_THROWS_AS(relaxation_oracle(c, 1.0, start, 0.0), Error);
}

}  // TEST_SUITE
