#pragma once

#include <functional>

#include "wpme/domain.hpp"
#include "wpme/ext_real.hpp"

namespace wpme {

struct QuadResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

struct QuadOptions {
    double rel_tol = 1e-8;
    int max_panels = 10000;
    // convergence test: error <= rel_tol * (abs_floor + |value|); set the
    // floor to 0 for pure relative accuracy on very small positive integrals
    double abs_floor = 1.0;
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod (7,15) over an interval that may have infinite
// endpoints (mapped by x = c + s/(1-s)) or integrable endpoint singularities
// (initial panels graded geometrically toward each finite endpoint). Throws
// EvalError on NaN at an interior node; +/-inf integrand values mark the
// panel as divergent and the result comes back non-converged with value inf.
QuadResult integrate(const Integrand& f, const Domain1D& interval, const QuadOptions& opt = {});

inline QuadResult integrate(const Integrand& f, double a, double b, double rel_tol = 1e-8) {
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    return integrate(f, Domain1D(a, b), opt);
}

// Single non-adaptive Gauss-Kronrod panel on finite (a,b); cheap path for
// per-cell masses where the integrand is smooth.
QuadResult integrate_panel(const Integrand& f, double a, double b);

// Finite/infinite classification of integral(f) over the interval. Uses the
// adaptive rule first; on non-convergence runs a growth certificate: the
// integral over an expanding box exceeding 1e12 x the unit-box integral
// declares divergence. "unknown" carries the best estimate.
ExtReal classify_integral(const Integrand& f, const Domain1D& interval,
                          const QuadOptions& opt = {});

struct SupResult {
    double sup = 0.0;
    double argmax = 0.0;
    bool bounded = true; // false: still growing at the scan frontier
};

// Scan on an endpoint-clustered grid, refine around the best point by
// golden-section. Unbounded verdict: monotone growth by a factor >= 10 over
// the outermost decade of scan points toward an endpoint.
SupResult sup_search(const std::function<double(double)>& g, const Domain1D& interval,
                     int budget = 256);

} // namespace wpme
