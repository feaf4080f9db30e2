#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wpme/poincare.hpp"

using namespace wpme;

namespace {
const Domain1D kHalf(0.0, kInf);
const Domain1D kUnit(0.0, 1.0);
const Domain1D kLine(-kInf, kInf);
} // namespace

TEST_CASE("Hardy product is constant for power weights") {
    // (x^(b-2), x^b): both antiderivatives are powers and the product of the
    // two factors is 1/(b-1)^2 independently of x
    for (double beta : {2.0, 3.0, 5.0}) {
        WeightSpec nu = WeightSpec::power(beta - 2.0, kHalf);
        WeightSpec mu = WeightSpec::power(beta, kHalf);
        HardyResult h = hardy_BR(nu, mu, 0.0, kInf);
        const double expect = 1.0 / ((beta - 1.0) * (beta - 1.0));
        REQUIRE(h.value.is_finite());
        CHECK(h.value.value == doctest::Approx(expect).epsilon(5e-3));
        for (double p : h.products) CHECK(p == doctest::Approx(expect).epsilon(5e-3));
    }
}

TEST_CASE("Hardy mirror functional diverges for the same pair") {
    WeightSpec nu = WeightSpec::power(1.0, kHalf);
    WeightSpec mu = WeightSpec::power(3.0, kHalf);
    CHECK(hardy_BL(nu, mu, 0.0, kInf).value.is_infinite());
}

TEST_CASE("Lebesgue pair on the half line diverges") {
    WeightSpec one = WeightSpec::power(0.0, kHalf);
    CHECK(hardy_BL(one, one, 0.0, kInf).value.is_infinite());
    CHECK(hardy_BR(one, one, 0.0, kInf).value.is_infinite());
}

TEST_CASE("two-sided exponential pair has unit Hardy constant") {
    WeightSpec e = WeightSpec::exponential(1.0, kLine);
    HardyResult h = hardy_BR(e, e, -kInf, kInf);
    REQUIRE(h.value.is_finite());
    CHECK(h.value.value == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("classical Hardy constant on the unit interval") {
    WeightSpec one = WeightSpec::power(0.0, kUnit);
    HardyResult h = hardy_BR(one, one, 0.0, 1.0);
    REQUIRE(h.value.is_finite());
    CHECK(h.value.value == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("bounded exponential piece stays finite") {
    WeightSpec e = WeightSpec::exponential(-1.0, kHalf);
    HardyResult h = hardy_BL(e, e, 0.0, 5.0);
    CHECK(h.value.is_finite());
}

TEST_CASE("split-point verdicts") {
    {
        WeightSpec nu = WeightSpec::power(1.0, kHalf), mu = WeightSpec::power(3.0, kHalf);
        SplitVerdict v = dirichlet_poincare_verdict(nu, mu, kHalf);
        CHECK(v.verdict == Verdict::holds);
        CHECK(v.c == doctest::Approx(0.0)); // left endpoint works
    }
    {
        WeightSpec e = WeightSpec::exponential(1.0, kLine);
        SplitVerdict v = dirichlet_poincare_verdict(e, e, kLine);
        CHECK(v.verdict == Verdict::holds);
    }
    {
        WeightSpec one = WeightSpec::power(0.0, kHalf);
        SplitVerdict v = dirichlet_poincare_verdict(one, one, kHalf);
        CHECK(v.verdict == Verdict::fails);
    }
}

TEST_CASE("zero-mean functional: unweighted oracle value") {
    // sup_x (1-x) * x^3/3 = 27/768 at x = 3/4 by calculus
    WeightSpec one = WeightSpec::power(0.0, kUnit);
    HardyResult k = zero_mean_KL(one, one, 0.0, 1.0);
    REQUIRE(k.value.is_finite());
    CHECK(k.value.value == doctest::Approx(27.0 / 768.0).epsilon(1e-4));
    CHECK(k.argmax == doctest::Approx(0.75).epsilon(1e-3));
}

TEST_CASE("zero-mean functionals finite for the beta=3 power pair on (0,1)") {
    WeightSpec nu = WeightSpec::power(1.0, kUnit), mu = WeightSpec::power(3.0, kUnit);
    CHECK(zero_mean_KL(nu, mu, 0.0, 1.0).value.is_finite());
    CHECK(zero_mean_KR(nu, mu, 0.0, 1.0).value.is_finite());
}

TEST_CASE("zero-mean functional needs a finite measure") {
    WeightSpec one = WeightSpec::power(0.0, kHalf);
    CHECK_THROWS_AS(zero_mean_KL(one, one, 0.0, kInf), DomainError);
}

TEST_CASE("discrete constants: unweighted eigenvalue oracles") {
    WeightSpec one = WeightSpec::power(0.0, kUnit);
    // oracle: lowest Dirichlet mode sin(pi x), lowest nonzero Neumann mode
    // cos(pi x), both with eigenvalue pi^2
    DiscreteConstant cd = discrete_constant(SpectralKind::dirichlet, one, one, kUnit,
                                            {250, 500, 1000, 2000});
    const double target = 1.0 / std::numbers::pi;
    CHECK_FALSE(cd.divergent);
    CHECK(cd.trace.back().estimate == doctest::Approx(target).epsilon(1e-3));

    // second-order trend: error shrinks ~4x per grid doubling
    const double e0 = std::fabs(cd.trace[0].estimate - target);
    const double e3 = std::fabs(cd.trace[3].estimate - target);
    CHECK(e3 < e0 / 16.0);

    DiscreteConstant cm = discrete_constant(SpectralKind::zero_mean, one, one, kUnit,
                                            {250, 500, 1000, 2000});
    CHECK(cm.trace.back().estimate == doctest::Approx(target).epsilon(1e-3));
}

TEST_CASE("discrete constant for the exponential half line") {
    WeightSpec e = WeightSpec::exponential(-1.0, kHalf);
    DiscreteConstant c = discrete_constant(SpectralKind::dirichlet, e, e, kHalf, {500, 1000},
                                           {40.0});
    CHECK_FALSE(c.divergent);
    CHECK(c.trace.back().estimate == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("Gaussian spectral gap") {
    WeightSpec gsn = WeightSpec::gaussian(0.5, kLine);
    DiscreteConstant c = discrete_constant(SpectralKind::zero_mean, gsn, gsn, kLine, {500, 1000},
                                           {10.0});
    CHECK_FALSE(c.divergent);
    CHECK(c.trace.back().estimate == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("boundary-degenerate pair decouples and diverges") {
    WeightSpec nu = WeightSpec::distpower(-0.5, kUnit), mu = WeightSpec::distpower(1.5, kUnit);
    DiscreteConstant c = discrete_constant(SpectralKind::dirichlet, nu, mu, kUnit, {128, 256});
    CHECK(c.divergent);
    CHECK(c.trace.front().decoupled);
}

TEST_CASE("verdict transfer along dominated pairs") {
    // scaled weights keep the verdict (finite domination constants both ways)
    WeightSpec nu1 = WeightSpec::power(1.0, kHalf), mu1 = WeightSpec::power(3.0, kHalf);
    std::vector<double> grid;
    for (int i = 1; i <= 200; ++i) grid.push_back(0.05 * i);
    WeightSpec nu2 = WeightSpec::power(1.0, kHalf), mu2 = WeightSpec::power(3.0, kHalf);
    auto dconst = dominates({nu1, mu1}, {nu2, mu2}, grid);
    REQUIRE(dconst.has_value());
    SplitVerdict v1 = dirichlet_poincare_verdict(nu1, mu1, kHalf);
    SplitVerdict v2 = dirichlet_poincare_verdict(nu2, mu2, kHalf);
    CHECK(v1.verdict == Verdict::holds);
    CHECK(v2.verdict == Verdict::holds);
}

TEST_CASE("weak inequality estimate and trial bound") {
    WeightSpec one = WeightSpec::power(0.0, kUnit);
    const double M_P = 1.0 / std::numbers::pi;
    WeakPoincare w = weak_poincare_check(one, one, kUnit, M_P);
    CHECK(w.verdict == Verdict::holds);
    REQUIRE(w.bound.has_value());
    CHECK(*w.bound == doctest::Approx(2.0)); // 2 * max(1/pi, 1)
    CHECK(w.trial_max >= 1.0 - 1e-9);        // the constant trial alone gives 1
    CHECK(w.trial_max <= *w.bound + 1e-9);

    // q0 = m variant: the constant trial still realizes ratio 1
    WeakPoincare w2 = weak_poincare_check(one, one, kUnit, M_P, 1.0);
    CHECK(w2.trial_max >= 1.0 - 1e-9);
}

TEST_CASE("model-profile gap characterization") {
    // psi = e^r, N = 2: product (e^xi - 1)(e^-xi - e^-r) < 1, saturating
    std::vector<double> r, p;
    for (double x = 0.0; x <= 60.0; x += 0.25) {
        r.push_back(x);
        p.push_back(std::exp(x));
    }
    GapResult g = riemannian_gap(Pchip(r, p), 2, 50.0);
    CHECK(g.bounded);
    CHECK(g.Q == doctest::Approx(1.0).epsilon(0.02));

    // psi = r, N = 3: product grows like r^2, no gap
    std::vector<double> r2, p2;
    for (double x = 1e-9; x <= 120.0; x += 0.5) {
        r2.push_back(x);
        p2.push_back(x);
    }
    GapResult g2 = riemannian_gap(Pchip(r2, p2), 3, 100.0);
    CHECK_FALSE(g2.bounded);

    // the bridged r -> e^(ar) profile keeps the gap
    GapResult g3 = riemannian_gap(bridged_profile(1.0, 60.0), 2, 50.0);
    CHECK(g3.bounded);
}

TEST_CASE("closed-form constants") {
    CHECK(M_Pa_constant(1.0, 0.7, 3.0) == doctest::Approx(std::sqrt(2.0) * 0.7));
    CHECK(M_Pa_constant(0.5, 1.0, 1.0) == doctest::Approx(std::pow(2.0, 0.75)));
    CHECK_THROWS_AS(M_Pa_constant(1.0, 0.0, 1.0), DomainError);

    CHECK(c_alpha_beta(0.5, 0.25) == doctest::Approx(1.5)); // 1 + (1/2)^(1/2)*(1/2)^(1/2)
    CHECK(c_alpha_beta(0.9, 0.9 - 1e-12) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK_THROWS_AS(c_alpha_beta(0.25, 0.5), DomainError);
}

TEST_CASE("three-term inequality dominated by the two-term bound") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ab(0.05, 0.95), lg(-6.0, 6.0);
    for (int pair = 0; pair < 5; ++pair) {
        double alpha = ab(rng), beta = ab(rng);
        if (beta >= alpha) std::swap(alpha, beta);
        if (beta == alpha) continue;
        const double c = c_alpha_beta(alpha, beta);
        for (int k = 0; k < 2000; ++k) {
            const double x = std::pow(10.0, lg(rng)), y = std::pow(10.0, lg(rng));
            const double lhs = std::pow(x, -alpha) * std::pow(y, 1.0 - alpha) +
                               std::pow(x, -beta) * std::pow(y, 1.0 - beta) + y;
            const double rhs = c * (std::pow(x, -alpha) * std::pow(y, 1.0 - alpha) + y);
            CHECK(lhs <= rhs * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("catalog verdicts match the listed inequality kinds") {
    // quick subset here; the full sweep with discrete traces runs in the
    // acceptance suite
    for (const CatalogEntry& e : weight_catalog()) {
        if (e.name != "power-b3-unit-neu" && e.name != "distpower-b0.5-unit-dir") continue;
        if (e.kind == SpectralKind::dirichlet) {
            SplitVerdict v = dirichlet_poincare_verdict(e.nu, e.mu, e.nu.domain());
            CHECK(v.verdict == (e.expected_holds ? Verdict::holds : Verdict::fails));
        } else {
            auto kl = zero_mean_KL(e.nu, e.mu, e.nu.domain().left, e.nu.domain().right);
            auto kr = zero_mean_KR(e.nu, e.mu, e.nu.domain().left, e.nu.domain().right);
            CHECK(kl.value.is_finite());
            CHECK(kr.value.is_finite());
        }
    }
}

TEST_CASE("audit report serializes with trace") {
    WeightSpec one = WeightSpec::power(0.0, kUnit);
    AuditRequest req{one, one, kUnit};
    req.grids = {64, 128};
    PoincareReport rep = audit(req);
    CHECK(rep.dirichlet == Verdict::holds);
    CHECK(rep.zero_mean == Verdict::holds);
    auto j = rep.to_json();
    CHECK(j.contains("verdicts"));
    CHECK(j["trace"].size() == 2);
}
