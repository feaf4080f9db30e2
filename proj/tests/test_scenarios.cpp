#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wpme/scenarios.hpp"

using namespace wpme;

TEST_CASE("scenario constant formula") {
    // shrinkage exponent m*(beta + 2(m-1)) of the steep branch
    ScenarioResult r = nonuniform_convergence(2.0, 2.0, 0.1, 400);
    CHECK(r.details.at("C_m_beta").get<double>() == doctest::Approx(8.0));
    CHECK(r.pass);
    CHECK(r.details.at("mean").get<double>() > 0.0);
    CHECK(r.details.at("zero_region_leak").get<double>() < 5e-3);
}

TEST_CASE("shallow-branch supersolution uses the linear ramp") {
    ScenarioResult r = nonuniform_convergence(1.5, 2.0, 0.1, 400);
    // C = m*(beta + m - 1) for m in (1,2)
    CHECK(r.details.at("C_m_beta").get<double>() == doctest::Approx(1.5 * (2.0 + 0.5)));
    CHECK(r.pass);
}

TEST_CASE("dirichlet unboundedness counterexample") {
    ScenarioResult r = dirichlet_unbounded(2.0, 20.0, 300);
    CHECK(r.pass);
    CHECK(r.details.at("B_hat").get<double>() > 0.0);
    CHECK(r.details.at("growth").get<double>() > 1.0);
}

TEST_CASE("neumann unboundedness counterexample") {
    ScenarioResult r = neumann_unbounded(2.0, 20.0, 300);
    CHECK(r.pass);
    CHECK(r.details.at("symmetry_defect").get<double>() < 1e-7);
    CHECK(r.details.at("bc_agreement_rel").get<double>() < 0.05);
}

TEST_CASE("sharp decay exponent for the unweighted Neumann problem") {
    ScenarioResult r = ar81_sharp_rate(2.0, 150);
    CHECK(r.pass);
    const double e2 =
        r.details.at("fits").at("1").at("norm2").at("exponent").get<double>();
    CHECK(e2 == doctest::Approx(-1.0).epsilon(0.1));
}

TEST_CASE("exponential convergence rates increase with the mean") {
    ScenarioResult r = neumann_mean_convergence(2.0, 150);
    CHECK(r.pass);
    const auto& sweeps = r.details.at("sweeps");
    REQUIRE(sweeps.size() == 3);
    double prev = 0.0;
    for (const auto& entry : sweeps) {
        const double rate = entry.at("fit_l2").at("rate").get<double>();
        CHECK(rate > prev * 0.98);
        prev = rate;
    }
}

TEST_CASE("scenario dispatch with overrides") {
    nlohmann::json ov;
    ov["m"] = 2.0;
    ov["cells"] = 150;
    ScenarioResult r = run_scenario("ar81", ov);
    CHECK(r.name == "ar81_sharp_rate");
    CHECK_THROWS_AS(run_scenario("nope", ov), ConfigError);
}
