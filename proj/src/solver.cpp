#include "wpme/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wpme/kernels.hpp"

namespace wpme {

namespace {

// 32-point Gauss-Legendre nodes/weights on [-1,1], generated once by Newton
// iteration on P_32.
struct Gauss32 {
    double x[32], w[32];
    Gauss32() {
        const int n = 32;
        for (int i = 0; i < n / 2; ++i) {
            double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double p0, p1, dp;
            for (int it = 0; it < 100; ++it) {
                p0 = 1.0;
                p1 = t;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (t * p1 - p0) / (t * t - 1.0);
                const double dt = p1 / dp;
                t -= dt;
                if (std::fabs(dt) < 1e-15) break;
            }
            x[i] = -t;
            x[n - 1 - i] = t;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};
const Gauss32& gauss32() {
    static const Gauss32 g;
    return g;
}

} // namespace

PhiEps::PhiEps(double m, double eps) : m_(m), eps_(eps) {
    if (!(m > 1.0)) throw DomainError("PhiEps: m must be > 1");
    if (eps < 0.0) throw DomainError("PhiEps: eps must be >= 0");
    if (eps_ == 0.0) return;

    i2eps_ = near_integral(2.0 * eps_);

    // integrand on (2eps, r): m * y^(m-1) * (1 + (eps/y)^2)^p, p = (m-1)/2,
    // expanded binomially; z = (eps/y)^2 <= 1/4 so 30 terms reach roundoff.
    // Terms are evaluated as coef * z^j * y^m, which keeps every factor
    // bounded where the split form eps^(2j) * y^(m-2j) would over/underflow.
    const double p = 0.5 * (m_ - 1.0);
    double binom = 1.0;
    for (int j = 0; j <= 30; ++j) {
        Term t;
        const double expo = m_ - 2.0 * j;
        t.log_branch = std::fabs(expo) < 1e-12;
        t.expo = expo;
        const double cj = m_ * binom;
        t.coef = t.log_branch ? cj * std::pow(eps_, m_) : cj / expo;
        tail_.push_back(t);
        binom *= (p - j) / (j + 1.0);
    }
}

double PhiEps::near_integral(double r) const {
    // GL32 on [0, r]; integrand analytic with scale eps, r <= 2eps
    const auto& g = gauss32();
    const double p = 0.5 * (m_ - 1.0);
    double s = 0.0;
    for (int i = 0; i < 32; ++i) {
        const double y = 0.5 * r * (g.x[i] + 1.0);
        s += g.w[i] * std::pow(y * y + eps_ * eps_, p);
    }
    return m_ * 0.5 * r * s;
}

double PhiEps::tail_primitive(double r) const {
    // sum of antiderivative terms evaluated at r minus at 2eps
    const double lo = 2.0 * eps_;
    const double rm = std::pow(r, m_), lm = std::pow(lo, m_);
    const double zr = (eps_ / r) * (eps_ / r); // <= 1/4
    const double zl = 0.25;
    double zrp = 1.0, zlp = 1.0; // z^j
    double s = 0.0;
    for (const Term& t : tail_) {
        if (t.log_branch)
            s += t.coef * std::log(r / lo);
        else
            s += t.coef * (zrp * rm - zlp * lm);
        zrp *= zr;
        zlp *= zl;
    }
    return s;
}

double PhiEps::phi(double u) const {
    const double r = std::fabs(u);
    double v;
    if (eps_ == 0.0) {
        v = std::pow(r, m_);
    } else if (r <= 2.0 * eps_) {
        v = near_integral(r);
    } else {
        v = i2eps_ + tail_primitive(r);
    }
    return u >= 0.0 ? v : -v;
}

double PhiEps::dphi(double u) const {
    if (eps_ == 0.0) return m_ * std::pow(std::fabs(u), m_ - 1.0);
    return m_ * std::pow(u * u + eps_ * eps_, 0.5 * (m_ - 1.0));
}

void PhiEps::phi_vec(std::span<const double> u, std::span<double> out) const {
    const std::ptrdiff_t n = std::ptrdiff_t(u.size());
    if (std::size_t(n) < kern::kParallelThreshold) {
        for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = phi(u[i]);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = phi(u[i]);
}

void PhiEps::dphi_vec(std::span<const double> u, std::span<double> out) const {
    const std::ptrdiff_t n = std::ptrdiff_t(u.size());
    if (std::size_t(n) < kern::kParallelThreshold) {
        for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = dphi(u[i]);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = dphi(u[i]);
}

const State& Trajectory::at_time(double t, double rel_tol) const {
    for (const State& s : states)
        if (std::fabs(s.t - t) <= rel_tol * (1.0 + std::fabs(t))) return s;
    throw DomainError("no trajectory state at t = " + std::to_string(t));
}

namespace {

struct BCCond {
    double gl, gr;
};

// Effective wall conductances: the physical boundary follows the problem BC;
// a truncated-at-infinity wall follows the far policy.
BCCond effective_conductances(const Grid& g, const PMEProblem& pb) {
    auto wall = [&](bool is_far, double cond) {
        if (is_far)
            return (pb.truncation && pb.truncation->far == FarPolicy::dirichlet_zero) ? cond : 0.0;
        return pb.bc == BC::dirichlet ? cond : 0.0;
    };
    return {wall(!pb.domain.left_finite(), g.cond_left),
            wall(!pb.domain.right_finite(), g.cond_right)};
}

struct NewtonResult {
    bool ok = false;
    int iters = 0;
    double residual = 0.0;
    std::vector<double> history;
};

NewtonResult newton_solve(const Grid& g, const BCCond& bc, const PhiEps& phi,
                          const std::vector<double>& uprev, std::vector<double>& u, double dt,
                          double tol, double uscale) {
    const std::size_t n = u.size();
    std::vector<double> phiv(n), phip(n), r(n), lower(n), diag(n), upper(n), utry(n), rtry(n);

    auto scaled_norm = [&](const std::vector<double>& res, const std::vector<double>& dg) {
        double nr = 0.0;
        for (std::size_t i = 0; i < n; ++i) nr = std::max(nr, std::fabs(res[i]) / dg[i]);
        return nr / uscale;
    };

    auto eval_residual = [&](const std::vector<double>& v, std::vector<double>& out) {
        phi.phi_vec(v, phiv);
        kern::be_residual(g.mass, g.cond, bc.gl, bc.gr, uprev, v, phiv, dt, out);
    };

    NewtonResult nr;
    eval_residual(u, r);
    phi.dphi_vec(u, phip);
    kern::be_jacobian(g.mass, g.cond, bc.gl, bc.gr, phip, dt, lower, diag, upper);
    double rn = scaled_norm(r, diag);
    nr.history.push_back(rn);

    bool converged = false;
    const int max_iter = 40;
    for (int it = 0; it < max_iter; ++it) {
        if (rn <= tol && converged) break; // already polished
        if (rn <= tol) converged = true;   // take one more sweep

        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = -r[i];
        std::vector<double> lo = lower, dg = diag, up = upper;
        try {
            kern::solve_tridiag(lo, dg, up, rhs);
        } catch (const NumericError&) {
            break;
        }

        double alpha = 1.0;
        bool accepted = false;
        for (int half = 0; half < 16; ++half) {
            for (std::size_t i = 0; i < n; ++i) utry[i] = u[i] + alpha * rhs[i];
            eval_residual(utry, rtry);
            phi.dphi_vec(utry, phip);
            kern::be_jacobian(g.mass, g.cond, bc.gl, bc.gr, phip, dt, lower, diag, upper);
            const double rt = scaled_norm(rtry, diag);
            if (rt < rn || rt <= tol) {
                u = utry;
                r = rtry;
                rn = rt;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        ++nr.iters;
        nr.history.push_back(rn);
        if (!accepted) break;
        if (converged && rn <= tol) break;
    }
    nr.ok = rn <= tol;
    nr.residual = rn;
    return nr;
}

} // namespace

State step(const Grid& g, const PMEProblem& pb, const PhiEps& phi, const State& s, double dt) {
    if (!(dt > 0.0)) throw DomainError("step: dt must be positive");
    const BCCond bc = effective_conductances(g, pb);
    const double uscale = std::max(1.0, kern::max_abs(s.u));

    std::vector<double> history;
    double dt_try = dt;
    for (int attempt = 0; attempt <= 20; ++attempt) {
        State out;
        out.u = s.u;
        NewtonResult nr = newton_solve(g, bc, phi, s.u, out.u, dt_try, pb.time.newton_tol, uscale);
        history.insert(history.end(), nr.history.begin(), nr.history.end());
        if (nr.ok) {
            out.t = s.t + dt_try;
            out.newton_iters = nr.iters;
            out.residual = nr.residual;
            out.dt_used = dt_try;
            return out;
        }
        dt_try *= 0.5;
    }
    throw StepError("Newton failed after 20 dt halvings at t = " + std::to_string(s.t),
                    std::move(history));
}

Trajectory solve_on_grid(const PMEProblem& pb, const Grid& grid, std::vector<double> u0,
                         const std::vector<double>& output_times) {
    for (std::size_t i = 1; i < output_times.size(); ++i)
        if (!(output_times[i] > output_times[i - 1]))
            throw DomainError("output times must be strictly increasing");
    if (!output_times.empty() && !(output_times.front() >= 0.0))
        throw DomainError("output times must be nonnegative");

    const double u0max = kern::max_abs(u0);
    double eps = pb.reg.eps;
    if (eps < 0.0) eps = 1e-6 * std::max(1.0, u0max);

    auto run_with_eps = [&](double e) {
        PhiEps phi(pb.m, e);
        Trajectory traj;
        traj.grid = grid;
        State cur;
        cur.t = 0.0;
        cur.u = u0;
        traj.states.push_back(cur);

        double t_first = output_times.empty() ? pb.time.t_end : output_times.front();
        if (t_first <= 0.0 && output_times.size() > 1) t_first = output_times[1];
        double dt = pb.time.dt_init > 0.0 ? pb.time.dt_init
                                          : std::max(t_first, 1e-30) / 64.0;
        if (pb.time.dt_max > 0.0) dt = std::min(dt, pb.time.dt_max);

        for (double T : output_times) {
            if (T <= 0.0) continue; // t = 0 state already recorded
            while (cur.t < T * (1.0 - 1e-14)) {
                const double dt_try = std::min(dt, T - cur.t);
                State next = step(grid, pb, phi, cur, dt_try);
                if (next.dt_used < dt_try * (1.0 - 1e-14)) {
                    ++traj.dt_halvings;
                    dt = next.dt_used;
                }
                ++traj.total_steps;
                traj.total_newton += next.newton_iters;
                cur = next;
                if (next.newton_iters <= 3)
                    dt *= 1.3;
                else if (next.newton_iters > 6)
                    dt *= 0.7;
                if (pb.time.dt_max > 0.0) dt = std::min(dt, pb.time.dt_max);
            }
            traj.states.push_back(cur);
        }
        return traj;
    };

    if (!pb.reg.continuation) return run_with_eps(eps);

    Trajectory prev = run_with_eps(eps);
    Trajectory fin = prev;
    for (double e : {eps / 4.0, eps / 16.0}) {
        Trajectory runf = run_with_eps(e);
        ContinuationDiag d{};
        d.eps_from = e * 4.0;
        d.eps_to = e;
        for (std::size_t k = 0; k < runf.states.size(); ++k) {
            d.max_abs_diff = std::max(d.max_abs_diff, [&] {
                double mx = 0.0;
                for (std::size_t i = 0; i < runf.states[k].u.size(); ++i)
                    mx = std::max(mx, std::fabs(runf.states[k].u[i] - prev.states[k].u[i]));
                return mx;
            }());
            d.max_l1nu_diff = std::max(
                d.max_l1nu_diff,
                kern::weighted_l1_diff(grid.mass, runf.states[k].u, prev.states[k].u));
        }
        fin = runf;
        fin.continuation = prev.continuation;
        fin.continuation.push_back(d);
        prev = fin;
    }
    return fin;
}

Trajectory solve(const PMEProblem& pb, int M, const std::vector<double>& output_times) {
    const Domain1D box = pb.box();
    Grid grid = build_grid(pb.nu, pb.mu, box, M, pb.grading, pb.grade_side);
    std::vector<double> u0(grid.size());
    for (int i = 0; i < grid.size(); ++i) u0[i] = pb.datum.eval(grid.centers[i], box, pb.m);
    return solve_on_grid(pb, grid, std::move(u0), output_times);
}

Trajectory scale_solution(const Trajectory& traj, double V, int N, double m) {
    if (!(V > 0.0)) throw DomainError("scale_solution: V must be positive");
    if (N < 1) throw DomainError("scale_solution: N must be >= 1");
    Trajectory out = traj;
    const double xs = std::pow(V, -1.0 / N);
    const double us = std::pow(V, -2.0 / (N * (m - 1.0)));
    const double gs = std::pow(V, 2.0 / N - 1.0);
    for (double& x : out.grid.centers) x *= xs;
    for (double& x : out.grid.faces) x *= xs;
    for (double& w : out.grid.mass) w /= V;
    for (double& c : out.grid.cond) c *= gs;
    out.grid.cond_left *= gs;
    out.grid.cond_right *= gs;
    for (State& s : out.states)
        for (double& u : s.u) u *= us;
    return out;
}

} // namespace wpme
