#include "wpme/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "wpme/errors.hpp"

namespace wpme::kern {

namespace {
inline double spow(double u, double p) {
    return u >= 0.0 ? std::pow(u, p) : -std::pow(-u, p);
}
} // namespace

double weighted_pow_sum_serial(std::span<const double> w, std::span<const double> u, double q) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * std::pow(std::fabs(u[i]), q);
    return s;
}

double weighted_pow_sum(std::span<const double> w, std::span<const double> u, double q) {
    const std::ptrdiff_t n = std::ptrdiff_t(u.size());
    if (std::size_t(n) < kParallelThreshold) return weighted_pow_sum_serial(w, u, q);
    double s = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : s)
    for (std::ptrdiff_t i = 0; i < n; ++i) s += w[i] * std::pow(std::fabs(u[i]), q);
    return s;
}

double weighted_sum_serial(std::span<const double> w, std::span<const double> u) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * u[i];
    return s;
}

double weighted_sum(std::span<const double> w, std::span<const double> u) {
    const std::ptrdiff_t n = std::ptrdiff_t(u.size());
    if (std::size_t(n) < kParallelThreshold) return weighted_sum_serial(w, u);
    double s = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : s)
    for (std::ptrdiff_t i = 0; i < n; ++i) s += w[i] * u[i];
    return s;
}

double weighted_l1_diff_serial(std::span<const double> w, std::span<const double> u,
                               std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * std::fabs(u[i] - v[i]);
    return s;
}

double weighted_l1_diff(std::span<const double> w, std::span<const double> u,
                        std::span<const double> v) {
    const std::ptrdiff_t n = std::ptrdiff_t(u.size());
    if (std::size_t(n) < kParallelThreshold) return weighted_l1_diff_serial(w, u, v);
    double s = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : s)
    for (std::ptrdiff_t i = 0; i < n; ++i) s += w[i] * std::fabs(u[i] - v[i]);
    return s;
}

double max_abs_serial(std::span<const double> u) {
    double s = 0.0;
    for (double x : u) s = std::max(s, std::fabs(x));
    return s;
}

double max_abs(std::span<const double> u) {
    const std::ptrdiff_t n = std::ptrdiff_t(u.size());
    if (std::size_t(n) < kParallelThreshold) return max_abs_serial(u);
    double s = 0.0;
#pragma omp parallel for schedule(static) reduction(max : s)
    for (std::ptrdiff_t i = 0; i < n; ++i) s = std::max(s, std::fabs(u[i]));
    return s;
}

void signed_pow_serial(std::span<const double> u, double p, std::span<double> out) {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = spow(u[i], p);
}

void signed_pow(std::span<const double> u, double p, std::span<double> out) {
    const std::ptrdiff_t n = std::ptrdiff_t(u.size());
    if (std::size_t(n) < kParallelThreshold) return signed_pow_serial(u, p, out);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = spow(u[i], p);
}

double face_energy_serial(std::span<const double> g, std::span<const double> p) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const double d = p[i + 1] - p[i];
        s += g[i] * d * d;
    }
    return s;
}

double face_energy(std::span<const double> g, std::span<const double> p) {
    const std::ptrdiff_t n = std::ptrdiff_t(p.size()) - 1;
    if (n < std::ptrdiff_t(kParallelThreshold)) return face_energy_serial(g, p);
    double s = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : s)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double d = p[i + 1] - p[i];
        s += g[i] * d * d;
    }
    return s;
}

void be_residual_serial(std::span<const double> mass, std::span<const double> g,
                        double gl, double gr, std::span<const double> uprev,
                        std::span<const double> u, std::span<const double> phi, double dt,
                        std::span<double> r) {
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double fr = (i + 1 < n) ? g[i] * (phi[i + 1] - phi[i]) : gr * (0.0 - phi[i]);
        const double fl = (i > 0) ? g[i - 1] * (phi[i] - phi[i - 1]) : gl * (phi[i] - 0.0);
        r[i] = mass[i] * (u[i] - uprev[i]) - dt * (fr - fl);
    }
}

void be_residual(std::span<const double> mass, std::span<const double> g,
                 double gl, double gr, std::span<const double> uprev,
                 std::span<const double> u, std::span<const double> phi, double dt,
                 std::span<double> r) {
    const std::ptrdiff_t n = std::ptrdiff_t(u.size());
    if (std::size_t(n) < kParallelThreshold)
        return be_residual_serial(mass, g, gl, gr, uprev, u, phi, dt, r);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double fr = (i + 1 < n) ? g[i] * (phi[i + 1] - phi[i]) : gr * (0.0 - phi[i]);
        const double fl = (i > 0) ? g[i - 1] * (phi[i] - phi[i - 1]) : gl * (phi[i] - 0.0);
        r[i] = mass[i] * (u[i] - uprev[i]) - dt * (fr - fl);
    }
}

void be_jacobian_serial(std::span<const double> mass, std::span<const double> g,
                        double gl, double gr, std::span<const double> phip, double dt,
                        std::span<double> lower, std::span<double> diag, std::span<double> upper) {
    const std::size_t n = mass.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double gL = (i > 0) ? g[i - 1] : gl;
        const double gR = (i + 1 < n) ? g[i] : gr;
        diag[i] = mass[i] + dt * (gL + gR) * phip[i];
        lower[i] = (i > 0) ? -dt * g[i - 1] * phip[i - 1] : 0.0;
        upper[i] = (i + 1 < n) ? -dt * g[i] * phip[i + 1] : 0.0;
    }
}

void be_jacobian(std::span<const double> mass, std::span<const double> g,
                 double gl, double gr, std::span<const double> phip, double dt,
                 std::span<double> lower, std::span<double> diag, std::span<double> upper) {
    const std::ptrdiff_t n = std::ptrdiff_t(mass.size());
    if (std::size_t(n) < kParallelThreshold)
        return be_jacobian_serial(mass, g, gl, gr, phip, dt, lower, diag, upper);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double gL = (i > 0) ? g[i - 1] : gl;
        const double gR = (i + 1 < n) ? g[i] : gr;
        diag[i] = mass[i] + dt * (gL + gR) * phip[i];
        lower[i] = (i > 0) ? -dt * g[i - 1] * phip[i - 1] : 0.0;
        upper[i] = (i + 1 < n) ? -dt * g[i] * phip[i + 1] : 0.0;
    }
}

void solve_tridiag(std::span<double> lower, std::span<double> diag, std::span<double> upper,
                   std::span<double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0) return;
    // LU with row interchanges (dgtsv-style); needs one extra superdiagonal
    std::vector<double> u2(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (std::fabs(diag[k]) >= std::fabs(lower[k + 1])) {
            if (diag[k] == 0.0) throw NumericError("tridiagonal solve: zero pivot");
            const double m = lower[k + 1] / diag[k];
            diag[k + 1] -= m * upper[k];
            if (k + 2 < n) u2[k] = 0.0;
            rhs[k + 1] -= m * rhs[k];
            lower[k + 1] = 0.0;
        } else {
            const double m = diag[k] / lower[k + 1];
            std::swap(diag[k], lower[k + 1]);
            double tmp = upper[k];
            upper[k] = diag[k + 1];
            diag[k + 1] = tmp - m * diag[k + 1];
            if (k + 2 < n) {
                u2[k] = upper[k + 1];
                upper[k + 1] = -m * upper[k + 1];
            }
            std::swap(rhs[k], rhs[k + 1]);
            rhs[k + 1] -= m * rhs[k];
        }
    }
    if (diag[n - 1] == 0.0) throw NumericError("tridiagonal solve: zero pivot");
    rhs[n - 1] /= diag[n - 1];
    if (n >= 2) rhs[n - 2] = (rhs[n - 2] - upper[n - 2] * rhs[n - 1]) / diag[n - 2];
    for (std::ptrdiff_t k = std::ptrdiff_t(n) - 3; k >= 0; --k)
        rhs[k] = (rhs[k] - upper[k] * rhs[k + 1] - u2[k] * rhs[k + 2]) / diag[k];
}

} // namespace wpme::kern
