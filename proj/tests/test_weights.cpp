#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wpme/poincare.hpp"
#include "wpme/weights.hpp"

using namespace wpme;

TEST_CASE("closed-form evaluations") {
    const Domain1D half(0.0, kInf), line(-kInf, kInf);
    CHECK(WeightSpec::power(3.0, half)(2.0) == doctest::Approx(8.0));
    CHECK(WeightSpec::exponential(-1.0, line)(0.0) == doctest::Approx(1.0));
    CHECK(WeightSpec::gaussian(0.5, line)(2.0) == doctest::Approx(std::exp(-2.0)));
    CHECK(WeightSpec::distpower(2.0, Domain1D(0.0, 1.0))(0.25) == doctest::Approx(0.0625));
    CHECK(WeightSpec::radialpower(-4.0, 3, Domain1D(1.0, kInf))(2.0) ==
          doctest::Approx(4.0 / 16.0));
}

TEST_CASE("evaluation outside the open domain fails") {
    WeightSpec w = WeightSpec::power(1.0, Domain1D(0.0, 1.0));
    CHECK_THROWS_AS(w(0.0), DomainError);
    CHECK_THROWS_AS(w(1.5), DomainError);
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(WeightSpec::gaussian(-1.0, Domain1D(0.0, 1.0)), DomainError);
    CHECK_THROWS_AS(WeightSpec::distpower(1.0, Domain1D(0.0, kInf)), DomainError);
}

TEST_CASE("nu measures") {
    const Domain1D line(-kInf, kInf), unit(0.0, 1.0), half(0.0, kInf);
    ExtReal two_sided = measure_nu(WeightSpec::exponential(-1.0, line, true));
    CHECK(two_sided.is_finite());
    CHECK(two_sided.value == doctest::Approx(2.0).epsilon(1e-7));

    ExtReal linear = measure_nu(WeightSpec::power(1.0, unit));
    CHECK(linear.value == doctest::Approx(0.5).epsilon(1e-9));

    CHECK(measure_nu(WeightSpec::power(0.0, half)).is_infinite());
}

TEST_CASE("measure is monotone under domain inclusion") {
    const Domain1D unit(0.0, 1.0);
    for (const WeightSpec& w : {WeightSpec::power(2.0, unit), WeightSpec::distpower(0.5, unit),
                                WeightSpec::logpower(1.0, -1.0, unit)}) {
        const double inner = measure_nu(w, Domain1D(0.2, 0.8)).value;
        const double outer = measure_nu(w, Domain1D(0.05, 0.95)).value;
        CHECK(inner <= outer * (1.0 + 1e-9));
    }
}

TEST_CASE("B^p membership") {
    const Domain1D unit(0.0, 1.0);
    std::vector<Domain1D> probe = {Domain1D(0.1, 0.9)};
    CHECK(check_Bp(WeightSpec::power(3.0, unit), 2.0, probe));
    CHECK(check_Bp(WeightSpec::power(0.0, unit), 2.0, probe));

    // sampled weight vanishing on a subinterval: 1/rho not locally integrable
    std::vector<double> r = {0.0, 0.2, 0.4, 0.52, 0.58, 0.62, 0.8, 1.0};
    std::vector<double> psi = {1.0, 1.0, 1e-3, 0.0, 0.0, 1e-3, 1.0, 1.0};
    WeightSpec w = WeightSpec::profile(r, psi, 2, unit);
    CHECK_FALSE(check_Bp(w, 2.0, probe));
}

TEST_CASE("positivity across the whole catalog") {
    for (const CatalogEntry& e : weight_catalog()) {
        const Domain1D d = e.nu.domain();
        const double a = d.left_finite() ? d.left : -5.0;
        const double b = d.right_finite() ? d.right : (d.left_finite() ? d.left + 10.0 : 5.0);
        for (int k = 1; k < 40; ++k) {
            const double x = a + (b - a) * k / 40.0;
            if (!d.contains(x)) continue;
            CHECK(e.nu(x) > 0.0);
            CHECK(e.mu(x) > 0.0);
        }
    }
}

TEST_CASE("dominates: reflexive, scaled, and power pairs") {
    const Domain1D unit(0.0, 1.0);
    std::vector<double> grid;
    for (int i = 1; i <= 999; ++i) grid.push_back(i / 1000.0);

    auto p1 = std::make_pair(WeightSpec::power(1.0, unit), WeightSpec::power(3.0, unit));
    auto same = dominates(p1, p1, grid);
    REQUIRE(same.has_value());
    CHECK(same->first == doctest::Approx(1.0));
    CHECK(same->second == doctest::Approx(1.0));

    // nu2 = x^2 <= 1 * x = nu1 on (0,1); mu equal
    auto p2 = std::make_pair(WeightSpec::power(2.0, unit), WeightSpec::power(3.0, unit));
    auto dom = dominates(p1, p2, grid);
    REQUIRE(dom.has_value());
    CHECK(dom->first == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(dom->second == doctest::Approx(1.0));

    // sup of the ratio diverges the other way around
    auto bad = dominates(p2, p1, grid, 1e2);
    CHECK_FALSE(bad.has_value());
}

TEST_CASE("transitivity of domination constants") {
    const Domain1D unit(0.0, 1.0);
    std::vector<double> grid;
    for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
    auto p1 = std::make_pair(WeightSpec::power(1.0, unit), WeightSpec::power(2.0, unit));
    auto p2 = std::make_pair(WeightSpec::power(2.0, unit), WeightSpec::power(2.0, unit));
    auto p3 = std::make_pair(WeightSpec::power(3.0, unit), WeightSpec::power(2.0, unit));
    auto d12 = dominates(p1, p2, grid), d23 = dominates(p2, p3, grid), d13 = dominates(p1, p3, grid);
    REQUIRE(d12.has_value());
    REQUIRE(d23.has_value());
    REQUIRE(d13.has_value());
    CHECK(d13->first <= d12->first * d23->first * (1.0 + 1e-12));
    CHECK(d13->second <= d12->second * d23->second * (1.0 + 1e-12));
}

TEST_CASE("JSON round trip preserves evaluation") {
    for (const CatalogEntry& e : weight_catalog()) {
        WeightSpec back = WeightSpec::from_json(e.nu.to_json());
        const Domain1D d = e.nu.domain();
        const double a = d.left_finite() ? d.left : -3.0;
        const double b = d.right_finite() ? d.right : (d.left_finite() ? d.left + 7.0 : 3.0);
        for (int k = 1; k < 10; ++k) {
            const double x = a + (b - a) * k / 10.0;
            if (!d.contains(x)) continue;
            CHECK(back(x) == doctest::Approx(e.nu(x)).epsilon(1e-12));
        }
    }
}
