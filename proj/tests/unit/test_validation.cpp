#include <random>

#include "doctest.h"
#include "reference.hpp"
#include "tritherm/validation.hpp"

using namespace tritherm;

namespace {

const CheckResult* check_named(const ValidationReport& r, const std::string& name) {
    for (const CheckResult& c : r.checks)
        if (c.name == name) return &c;
    return nullptr;
}

}  // namespace

TEST_SUITE("validation") {

TEST_CASE("every check passes on Fig. 2") {
    const ValidationReport r = run_validation(fixture::fig2(), 0, 10);
    for (const CheckResult& c : r.checks) {
        INFO(c.name << " = " << c.value << " (limit " << c.tolerance << ") " << c.detail);
        CHECK(c.passed);
    }
    CHECK(r.all_passed());
    CHECK(check_named(r, "secular"));
    CHECK(r.checks.size() > 10);
}

TEST_CASE("the seed fixes the random checks") {
    const ValidationReport a = run_validation(fixture::fig4a(), 7, 5);
    const ValidationReport b = run_validation(fixture::fig4a(), 7, 5);
    const ValidationReport c = run_validation(fixture::fig4a(), 8, 5);
    REQUIRE(a.checks.size() == b.checks.size());
    bool differs = false;
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].name == b.checks[i].name);
        CHECK(a.checks[i].value == b.checks[i].value);
        if (a.checks[i].name.rfind("random.", 0) == 0 && a.checks[i].value != c.checks[i].value) differs = true;
    }
    CHECK(differs);
}

TEST_CASE("strong damping raises a secular warning but nothing else") {
    Configuration c = fixture::fig2();
    for (BathSpec& b : c.baths) b.gamma = 0.1;
    const ValidationReport r = run_validation(c, 0, 3);
    const CheckResult* s = check_named(r, "secular");
    REQUIRE(s);
    CHECK_FALSE(s->passed);
    CHECK(s->advisory);
    CHECK(s->value >= kSecularThreshold);
    CHECK(r.all_passed());
}

TEST_CASE("random configurations are valid and secular") {
    std::mt19937_64 rng(0);
    for (int i = 0; i < 200; ++i) {
        const Configuration c = random_configuration(rng);
        CHECK_NOTHROW(validate_params(c.device, c.baths));
        CHECK(assess_secular(build_channels(c.device), c.baths).valid);
        CHECK(c.device.omega_L >= 0.55);
        CHECK(c.device.omega_L <= 0.95);
        for (const BathSpec& b : c.baths) {
            CHECK(b.temperature >= 0.05);
            CHECK(b.temperature <= 1.0);
            CHECK(b.gamma >= 1e-5);
            CHECK(b.gamma <= 1e-3);
        }
    }
}

TEST_CASE("metric helpers") {
    CHECK(commutator_residual(resonant_device(0.9, 0.01)) <= 1e-12);
    const OracleAgreement o = compare_with_liouvillian(fixture::fig4b());
    CHECK(o.populations < 1e-8);
    CHECK(o.currents < 1e-8);
    CHECK(o.coherence < 1e-10);
    const LawCheck l = check_laws(fixture::fig4a());
    CHECK(l.first <= 1e-12);
    CHECK(l.entropy >= -1e-12);
}

}  // TEST_SUITE
