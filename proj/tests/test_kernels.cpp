#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "wpme/kernels.hpp"

using namespace wpme;

namespace {
std::vector<double> random_vec(std::size_t n, std::mt19937& rng, double lo = -1.0,
                               double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}
} // namespace

TEST_CASE("parallel kernels match the serial reference") {
    std::mt19937 rng(42);
    for (std::size_t n : {1000ul, 100000ul}) { // below and above the dispatch threshold
        auto w = random_vec(n, rng, 0.1, 2.0);
        auto u = random_vec(n, rng);
        auto v = random_vec(n, rng);

        CHECK(kern::weighted_pow_sum(w, u, 2.5) ==
              doctest::Approx(kern::weighted_pow_sum_serial(w, u, 2.5)).epsilon(1e-12));
        CHECK(kern::weighted_sum(w, u) ==
              doctest::Approx(kern::weighted_sum_serial(w, u)).epsilon(1e-12));
        CHECK(kern::weighted_l1_diff(w, u, v) ==
              doctest::Approx(kern::weighted_l1_diff_serial(w, u, v)).epsilon(1e-12));
        CHECK(kern::max_abs(u) == doctest::Approx(kern::max_abs_serial(u)));

        std::vector<double> p1(n), p2(n);
        kern::signed_pow(u, 1.5, p1);
        kern::signed_pow_serial(u, 1.5, p2);
        for (std::size_t i = 0; i < n; i += n / 17)
            CHECK(p1[i] == doctest::Approx(p2[i]));

        std::vector<double> g = random_vec(n - 1, rng, 0.5, 2.0);
        CHECK(kern::face_energy(g, u) ==
              doctest::Approx(kern::face_energy_serial(g, u)).epsilon(1e-12));

        std::vector<double> r1(n), r2(n);
        kern::be_residual(w, g, 0.3, 0.7, v, u, p1, 0.01, r1);
        kern::be_residual_serial(w, g, 0.3, 0.7, v, u, p1, 0.01, r2);
        for (std::size_t i = 0; i < n; i += n / 13)
            CHECK(r1[i] == doctest::Approx(r2[i]));

        std::vector<double> lo1(n), d1(n), up1(n), lo2(n), d2(n), up2(n);
        kern::be_jacobian(w, g, 0.3, 0.7, p1, 0.01, lo1, d1, up1);
        kern::be_jacobian_serial(w, g, 0.3, 0.7, p1, 0.01, lo2, d2, up2);
        for (std::size_t i = 0; i < n; i += n / 11) {
            CHECK(lo1[i] == doctest::Approx(lo2[i]));
            CHECK(d1[i] == doctest::Approx(d2[i]));
            CHECK(up1[i] == doctest::Approx(up2[i]));
        }
    }
}

namespace {
// dense partial-pivot reference for the tridiagonal solver
std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
    const int n = int(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(A[i][k]) > std::fabs(A[piv][k])) piv = i;
        std::swap(A[k], A[piv]);
        std::swap(b[k], b[piv]);
        for (int i = k + 1; i < n; ++i) {
            const double f = A[i][k] / A[k][k];
            for (int j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
        x[i] = s / A[i][i];
    }
    return x;
}
} // namespace

TEST_CASE("tridiagonal solve with pivoting matches a dense reference") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 40;
        auto lower = random_vec(n, rng), diag = random_vec(n, rng), upper = random_vec(n, rng);
        lower[0] = upper[n - 1] = 0.0;
        // occasionally make the diagonal weak to exercise the pivoting path
        for (int i = 0; i < n; i += 5) diag[i] *= 1e-6;
        auto rhs = random_vec(n, rng);

        std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i) {
            A[i][i] = diag[i];
            if (i > 0) A[i][i - 1] = lower[i];
            if (i + 1 < n) A[i][i + 1] = upper[i];
        }
        auto xref = dense_solve(A, rhs);

        std::vector<double> lo = lower, dg = diag, up = upper, x = rhs;
        kern::solve_tridiag(lo, dg, up, x);
        for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(xref[i]).epsilon(1e-8));
    }
}

TEST_CASE("jacobian is the derivative of the residual") {
    std::mt19937 rng(3);
    const std::size_t n = 24;
    auto mass = random_vec(n, rng, 0.5, 1.5);
    auto g = random_vec(n - 1, rng, 0.2, 2.0);
    auto uprev = random_vec(n, rng, 0.5, 1.5);
    auto u = random_vec(n, rng, 0.5, 1.5);
    const double dt = 0.05, gl = 0.4, gr = 1.1, m = 2.0;

    auto phi = [&](const std::vector<double>& v) {
        std::vector<double> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = v[i] * std::fabs(v[i]); // m = 2 signed square
        return p;
    };
    auto residual = [&](const std::vector<double>& v) {
        std::vector<double> r(n);
        auto p = phi(v);
        kern::be_residual(mass, g, gl, gr, uprev, v, p, dt, r);
        return r;
    };

    std::vector<double> phip(n), lo(n), dg(n), up(n);
    for (std::size_t i = 0; i < n; ++i) phip[i] = m * std::fabs(u[i]);
    kern::be_jacobian(mass, g, gl, gr, phip, dt, lo, dg, up);

    const double h = 1e-7;
    auto r0 = residual(u);
    for (std::size_t j = 0; j < n; ++j) {
        auto up_u = u;
        up_u[j] += h;
        auto r1 = residual(up_u);
        for (std::size_t i = 0; i < n; ++i) {
            const double fd = (r1[i] - r0[i]) / h;
            double jac = 0.0;
            if (i == j) jac = dg[i];
            else if (j + 1 == i) jac = lo[i];
            else if (j == i + 1) jac = up[i];
            CHECK(fd == doctest::Approx(jac).epsilon(1e-4).scale(1.0));
        }
    }
}
