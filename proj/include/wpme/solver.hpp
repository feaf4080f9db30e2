#pragma once

#include <span>
#include <string>
#include <vector>

#include "wpme/grid.hpp"
#include "wpme/problem.hpp"

namespace wpme {

// Regularized nonlinearity: phi'(u) = m*(u^2 + eps^2)^((m-1)/2), smooth, even,
// strictly positive for eps > 0 and exactly m*|u|^(m-1) at eps = 0. phi is the
// odd primitive with phi(0) = 0; for eps > 0 it is evaluated by a fixed-order
// Gauss panel near zero stitched to a binomial tail series (coefficients
// precomputed per (m, eps)).
class PhiEps {
public:
    PhiEps(double m, double eps);

    double phi(double u) const;
    double dphi(double u) const;
    void phi_vec(std::span<const double> u, std::span<double> out) const;
    void dphi_vec(std::span<const double> u, std::span<double> out) const;

    double m() const { return m_; }
    double eps() const { return eps_; }

private:
    double tail_primitive(double r) const; // integral over (2eps, r], r > 2eps
    double near_integral(double r) const;  // integral over [0, r], r <= 2eps

    double m_, eps_;
    double i2eps_ = 0.0; // integral over [0, 2eps]
    struct Term {
        double coef;
        double expo; // antiderivative exponent m - 2j, or 0 -> log branch
        bool log_branch;
    };
    std::vector<Term> tail_;
};

inline double phi_eps(double u, double m, double eps) { return PhiEps(m, eps).phi(u); }
inline double phi_eps_prime(double u, double m, double eps) { return PhiEps(m, eps).dphi(u); }

struct State {
    double t = 0.0;
    std::vector<double> u;
    int newton_iters = 0;
    double residual = 0.0;
    double dt_used = 0.0;
};

struct ContinuationDiag {
    double eps_from, eps_to;
    double max_abs_diff;  // sup over outputs of max |u_a - u_b|
    double max_l1nu_diff; // sup over outputs of nu-weighted L1 distance
};

struct Trajectory {
    Grid grid;
    std::vector<State> states; // states[0] holds the datum at t = 0
    long total_steps = 0;
    long total_newton = 0;
    int dt_halvings = 0;
    std::vector<ContinuationDiag> continuation;

    const State& at_time(double t, double rel_tol = 1e-9) const;
};

// One backward-Euler step of the flux form; damped Newton on the tridiagonal
// Jacobian, halving dt on Newton failure (up to 20 times). The returned state
// reports the dt actually taken.
State step(const Grid& grid, const PMEProblem& pb, const PhiEps& phi, const State& s, double dt);

// March to each requested output time (dt clipped to land on outputs
// exactly), target Newton-iteration band 3..6 for the adaptive dt. With a
// continuation schedule the run is repeated for eps/4 and eps/16 and the
// trajectory drift recorded.
Trajectory solve(const PMEProblem& pb, int M, const std::vector<double>& output_times);

// Same but on a caller-supplied grid and datum vector.
Trajectory solve_on_grid(const PMEProblem& pb, const Grid& grid, std::vector<double> u0,
                         const std::vector<double>& output_times);

// Spatial scaling: x -> x / V^(1/N), u -> V^(-2/(N(m-1))) u, masses /V,
// conductances * V^(2/N - 1). The rescaled trajectory satisfies the same
// discrete scheme; q-norms transform by V^(-2/(N(m-1)) - 1/q) exactly.
Trajectory scale_solution(const Trajectory& traj, double V, int N, double m);

} // namespace wpme
