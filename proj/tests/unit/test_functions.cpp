#include <cmath>
#include <random>

#include "doctest.h"
#include "reference.hpp"
#include "tritherm/functions.hpp"
#include "tritherm/oracles.hpp"

using namespace tritherm;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;
}

const ValveCrossing* find(const ValveReport& r, Terminal t) {
    const ValveCrossing* hit = nullptr;
    for (const ValveCrossing& c : r.crossings)
        if (c.terminal == t) {
            if (hit) return nullptr;  // more than one
            hit = &c;
        }
    return hit;
}

}  // namespace

TEST_SUITE("functions") {

TEST_CASE("linspace and with_temperature") {
    const auto g = linspace(0.0, 1.0, 11);
    CHECK(g.size() == 11);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK(g[3] == doctest::Approx(0.3));
    CHECK_THROWS_AS(linspace(0.0, 1.0, 1), Error);
    CHECK(with_temperature(fixture::fig2(), Terminal::R, 0.5).bath(Terminal::R).temperature == 0.5);
    CHECK(code_of([] { with_temperature(fixture::fig2(), Terminal::R, -0.1); }) == ErrorCode::InvalidBath);
}

TEST_CASE("scan results do not depend on the thread count") {
    const auto grid = linspace(0.0, 0.6, 37);
    const auto one = scan_temperature(fixture::fig2(), Terminal::M, grid, 1);
    const auto four = scan_temperature(fixture::fig2(), Terminal::M, grid, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        REQUIRE(one[i].currents);
        REQUIRE(four[i].currents);
        for (Terminal t : kTerminals) CHECK((*one[i].currents)[t] == (*four[i].currents)[t]);
    }
}

TEST_CASE("amplification satisfies alpha_L + alpha_R = -1") {
    for (double T : {0.05, 0.1, 0.2, 0.3, 0.5}) {
        const AmplificationResult a = amplification(fixture::fig2(T));
        CHECK(a.alpha_L + a.alpha_R == doctest::Approx(-1.0).epsilon(1e-6));
        CHECK(a.step == kDefaultAmplifierStep);
        CHECK_FALSE(a.flagged);
    }
}

TEST_CASE("Fig. 2 amplification reaches about 10") {
    double peak_L = 0.0, peak_R = 0.0;
    for (double T : linspace(0.05, 0.5, 46)) {
        const AmplificationResult a = amplification(fixture::fig2(T));
        peak_L = std::max(peak_L, std::abs(a.alpha_L));
        peak_R = std::max(peak_R, std::abs(a.alpha_R));
    }
    CHECK(peak_L >= 5.0);
    CHECK(peak_L <= 20.0);
    CHECK(peak_R >= 5.0);
    CHECK(peak_R <= 20.0);
}

TEST_CASE("amplification at equal temperatures is well defined") {
    const Configuration c = validate_params(resonant_device(0.9, 0.01), make_baths(0.2, 0.2, 0.2));
    const AmplificationResult a = amplification(c);
    CHECK(std::isfinite(a.alpha_L));
    CHECK(a.alpha_L + a.alpha_R == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("amplification without a control current") {
    Configuration c = fixture::fig2(0.2);
    c.bath(Terminal::M).gamma = 0.0;
    // The remaining two baths still connect the graph through the g-mixing.
    CHECK(code_of([&] { amplification(c); }) == ErrorCode::DegenerateDenominator);
    CHECK(code_of([&] { amplification(fixture::fig2(), 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("amplification is invariant under global scaling") {
    const Configuration base = fixture::fig2(0.15);
    const AmplificationResult a0 = amplification(base);
    const double s = 3.0;
    DeviceParams p = base.device;
    p.omega_L *= s, p.omega_M *= s, p.omega_R *= s, p.g *= s;
    Baths b = base.baths;
    for (BathSpec& bath : b) bath.temperature *= s, bath.gamma *= s;
    const AmplificationResult a = amplification(validate_params(p, b), s * kDefaultAmplifierStep);
    CHECK(a.alpha_L == doctest::Approx(a0.alpha_L).epsilon(1e-6));
    CHECK(a.alpha_R == doctest::Approx(a0.alpha_R).epsilon(1e-6));
}

TEST_CASE("valve crossings of Fig. 4(a)") {
    const ValveReport r = valve_crossings(fixture::fig4a(), 0.01, 1.0);
    REQUIRE(r.crossings.size() == 3);
    const ValveCrossing* R = find(r, Terminal::R);
    const ValveCrossing* M = find(r, Terminal::M);
    const ValveCrossing* L = find(r, Terminal::L);
    REQUIRE(R);
    REQUIRE(M);
    REQUIRE(L);
    CHECK(R->T_M == doctest::Approx(0.09).epsilon(0.02 / 0.09));
    CHECK(M->T_M == doctest::Approx(0.24).epsilon(0.03 / 0.24));
    CHECK(L->T_M == doctest::Approx(0.53).epsilon(0.05 / 0.53));
    CHECK(R->T_M < M->T_M);
    CHECK(M->T_M < L->T_M);
    for (const ValveCrossing& c : r.crossings) {
        CHECK(c.bracket <= 1e-6);
        CHECK(std::abs(c.Q_at) <= 1e-10);
        CHECK((c.Q_below < 0.0) != (c.Q_above < 0.0));
    }
    CHECK(r.grid.size() == kDefaultValveGrid);
}

TEST_CASE("valve crossings of the Ohmic Fig. 4(b)") {
    const ValveReport r = valve_crossings(fixture::fig4b(), 0.01, 1.0);
    REQUIRE(r.crossings.size() == 3);
    CHECK(find(r, Terminal::L));
    CHECK(find(r, Terminal::M));
    CHECK(find(r, Terminal::R));
    CHECK(r.crossings[0].T_M < r.crossings[1].T_M);
    CHECK(r.crossings[1].T_M < r.crossings[2].T_M);
}

TEST_CASE("valve at equal outer temperatures crosses everywhere at equilibrium") {
    const Configuration c = validate_params(resonant_device(0.9, 0.08), make_baths(0.2, 0.1, 0.2));
    const ValveReport r = valve_crossings(c, 0.05, 0.5, 50);
    int at_equilibrium = 0;
    for (const ValveCrossing& x : r.crossings)
        if (std::abs(x.T_M - 0.2) < 1e-5) ++at_equilibrium;
    CHECK(at_equilibrium == 3);
}

TEST_CASE("valve accepts an empty result") {
    const Configuration c = validate_params(resonant_device(0.9, 0.01), make_baths(0.5, 0.1, 0.4));
    const ValveReport r = valve_crossings(c, 0.6, 0.9, 20);
    CHECK(r.crossings.empty());
    CHECK(code_of([&] { valve_crossings(c, 0.5, 0.4); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("rectification without bias") {
    const Configuration c = fixture::fig5();
    CHECK(code_of([&] { rectification(c, 0.0, 0.25, RectifierMode::TwoTerminal); }) == ErrorCode::BothCurrentsZero);
    CHECK(code_of([&] { rectification(c, 0.0, 0.25, RectifierMode::ThreeTerminal); }) ==
          ErrorCode::DegenerateDenominator);
    CHECK(code_of([&] { rectification(c, 0.6, 0.25, RectifierMode::TwoTerminal); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("two-terminal rectification approaches 1 at large bias") {
    const Configuration c = fixture::fig5();
    const RectificationResult r = rectification(c, 0.45, 0.25, RectifierMode::TwoTerminal);
    CHECK(r.R >= 0.99);
    CHECK(r.R <= 1.0);
    CHECK(r.Q_fore > 0.0);
    CHECK(r.Q_back > 0.0);
    CHECK(rectification(c, -0.45, 0.25, RectifierMode::TwoTerminal).R == r.R);
    double prev = 0.0;
    for (double d : {0.05, 0.15, 0.25, 0.35, 0.45}) {
        const double R = rectification(c, d, 0.25, RectifierMode::TwoTerminal).R;
        CHECK(R > prev);
        prev = R;
    }
}

TEST_CASE("two-terminal energy balance and R range") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> bias(-0.48, 0.48), g(0.01, 0.1);
    for (int i = 0; i < 30; ++i) {
        const double d = bias(rng);
        const Configuration c = validate_params(resonant_device(0.9, g(rng)), make_baths(0.18, 0.25, 0.25));
        Configuration two = c;
        two.bath(Terminal::L).gamma = 0.0;
        const HeatCurrents q = biased_currents(two, d, 0.25);
        CHECK(q.Q_L == 0.0);
        CHECK(q.Q_M == doctest::Approx(-q.Q_R).epsilon(1e-12));
        const RectificationResult r = rectification(c, d, 0.25, RectifierMode::TwoTerminal);
        CHECK(r.R >= 0.0);
        CHECK(r.R <= 1.0);
    }
}

TEST_CASE("R is invariant under a common rescaling of the currents") {
    const Configuration base = fixture::fig5();
    const double R0 = rectification(base, 0.3, 0.25, RectifierMode::TwoTerminal).R;
    Configuration c = base;
    for (BathSpec& b : c.baths) b.gamma *= 4.0;
    CHECK(rectification(c, 0.3, 0.25, RectifierMode::TwoTerminal).R == doctest::Approx(R0).epsilon(1e-9));
}

TEST_CASE("three-terminal Q_R flips direction near delta_T = -0.1") {
    const Configuration c = fixture::fig5(0.18);
    const auto grid = linspace(-0.4, 0.4, 81);
    int flips = 0;
    double where = 0.0;
    double prev = biased_currents(c, grid[0], 0.25).Q_R;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double q = biased_currents(c, grid[i], 0.25).Q_R;
        if ((q < 0.0) != (prev < 0.0)) {
            ++flips;
            where = grid[i - 1] - prev * (grid[i] - grid[i - 1]) / (q - prev);
        }
        prev = q;
    }
    CHECK(flips == 1);
    CHECK(where == doctest::Approx(-0.1).epsilon(0.3));
}

TEST_CASE("stabilizer: detached scanned bath is exactly flat") {
    Configuration c = fixture::fig3a();
    c.bath(Terminal::L).gamma = 0.0;
    const StabilizerReport r = stabilizer_sensitivity(c, Terminal::L, 0.0, 0.8, 21);
    for (const Flatness& f : r.currents) {
        CHECK(f.ratio == 0.0);
        CHECK(f.peak_slope == 0.0);
    }
}

TEST_CASE("stabilizer: the control knob is not flat") {
    const StabilizerReport r = stabilizer_sensitivity(fixture::fig2(), Terminal::M, 0.0, 0.6, 61);
    for (const Flatness& f : r.currents) CHECK(f.ratio > 0.5);
    CHECK(r.scanned == Terminal::M);
}

TEST_CASE("stabilizer metrics on Fig. 3(a)") {
    const StabilizerReport r = stabilizer_sensitivity(fixture::fig3a(), Terminal::L, 0.0, 0.8, 81, 2);
    for (const Flatness& f : r.currents) {
        CHECK(f.ratio >= 0.0);
        CHECK(f.ratio <= 2.0);
        CHECK(f.max >= f.min);
        CHECK(f.peak_slope > 0.0);
    }
    Configuration dead = fixture::fig3a();
    for (BathSpec& b : dead.baths) b.gamma = 0.0;
    CHECK(code_of([&] { stabilizer_sensitivity(dead, Terminal::L, 0.0, 0.8, 5); }) == ErrorCode::PointFailure);
}

TEST_CASE("switch threshold") {
    const Configuration c = fixture::fig2();
    const SwitchResult huge = switch_threshold(c, 1.0, 0.0, 0.6, 61);
    CHECK(huge.found);
    CHECK(huge.threshold == 0.6);
    const SwitchResult zero = switch_threshold(c, 0.0, 0.0, 0.6, 61);
    CHECK_FALSE(zero.found);
    CHECK(zero.threshold == 0.0);
    // |Q_L| is about 3.7e-9 already at T_M = 0 for these settings.
    CHECK_FALSE(switch_threshold(c, 1e-9, 0.0, 0.6, 61).found);
    const SwitchResult loose = switch_threshold(c, 5e-9, 0.0, 0.6, 61);
    CHECK(loose.found);
    CHECK(loose.threshold > 0.0);
    CHECK(loose.threshold < 0.1);
    CHECK(code_of([&] { switch_threshold(c, -1.0, 0.0, 0.6, 61); }) == ErrorCode::InvalidArgument);
}

}  // TEST_SUITE
