#include "wpme/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wpme/grid.hpp"
#include "wpme/kernels.hpp"
#include "wpme/quad.hpp"

namespace wpme {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

// Scan abscissae on (a,b): clustered toward finite endpoints, log-spaced
// toward infinite ones.
std::vector<double> scan_points(double a, double b, int n) {
    std::vector<double> pts;
    const bool fa = std::isfinite(a), fb = std::isfinite(b);
    auto push = [&](double x) {
        if (x > a && x < b && std::isfinite(x)) pts.push_back(x);
    };
    if (fa && fb) {
        const double len = b - a;
        for (int k = 0; k < n / 3; ++k) {
            const double f = 0.5 * std::pow(10.0, -10.0 * k / std::max(1, n / 3 - 1));
            push(a + len * f);
            push(b - len * f);
        }
        for (int k = 1; k < n / 3; ++k) push(a + len * k / (n / 3));
    } else {
        auto half = [&](double c, double sgn) {
            for (int k = 0; k < n; ++k) {
                const double e = -8.0 + 17.0 * k / (n - 1.0);
                push(c + sgn * std::pow(10.0, e));
            }
        };
        if (fa) half(a, +1.0);
        else if (fb) half(b, -1.0);
        else {
            half(0.0, +1.0);
            half(0.0, -1.0);
            push(0.0);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Adaptive integral between scan neighbours with a cheap single-panel fast
// path (the integrands are smooth between scan points).
double panel_between(const Integrand& f, double a, double b) {
    QuadResult q = integrate_panel(f, a, b);
    // pure relative test: these pieces can be exponentially small and still
    // carry all the information once multiplied into the products
    if (q.converged && q.abs_error_estimate <= 1e-9 * std::fabs(q.value)) return q.value;
    QuadOptions opt;
    opt.rel_tol = 1e-9;
    opt.max_panels = 2000;
    opt.abs_floor = 0.0;
    q = integrate(f, Domain1D(a, b), opt);
    return q.value;
}

// Core of the B functionals:
//   sup_x (int_a^x f_lo) * (int_x^b f_hi)
// with f_lo cumulated from a and f_hi cumulated from b.
HardyResult sup_product(const Integrand& f_lo, const Integrand& f_hi, double a, double b) {
    HardyResult res;
    std::vector<double> xs = scan_points(a, b, 96);
    if (xs.size() < 8) {
        res.value = ExtReal::unknown();
        return res;
    }

    // head: (a, x0) of f_lo
    ExtReal head = classify_integral(f_lo, Domain1D(a, xs.front()));
    if (head.is_infinite()) {
        res.value = ExtReal::infinite();
        return res;
    }
    // tail: (x_n, b) of f_hi
    ExtReal tail = classify_integral(f_hi, Domain1D(xs.back(), b));
    if (tail.is_infinite()) {
        res.value = ExtReal::infinite();
        return res;
    }
    if (head.is_unknown() || tail.is_unknown()) {
        res.value = ExtReal::unknown();
        return res;
    }

    const std::size_t n = xs.size();
    std::vector<double> lo_cum(n), hi_cum(n);
    lo_cum[0] = head.value;
    for (std::size_t i = 1; i < n; ++i)
        lo_cum[i] = lo_cum[i - 1] + panel_between(f_lo, xs[i - 1], xs[i]);
    hi_cum[n - 1] = tail.value;
    for (std::size_t i = n - 1; i-- > 0;)
        hi_cum[i] = hi_cum[i + 1] + panel_between(f_hi, xs[i], xs[i + 1]);

    // A cumulative factor can overflow to inf while the opposite factor is
    // exponentially small (exponential/Gaussian weights far out): such
    // products are numerically indeterminate, and the finite ones always
    // saturate well before the overflow range. They are dropped and the
    // frontier test runs on the valid window; genuine endpoint divergence is
    // caught by the head/tail classification above.
    std::vector<std::size_t> vidx;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = lo_cum[i] * hi_cum[i];
        if (!std::isfinite(p)) continue;
        vidx.push_back(i);
        res.xs.push_back(xs[i]);
        res.products.push_back(p);
    }
    if (res.xs.size() < 4) {
        res.value = ExtReal::unknown();
        return res;
    }
    double best = -kInf;
    std::size_t jb = 0;
    for (std::size_t j = 0; j < res.products.size(); ++j)
        if (res.products[j] > best) {
            best = res.products[j];
            jb = j;
        }

    // frontier growth toward either endpoint: monotone rise by >= 10x over
    // the outermost scan window
    auto frontier = [&](bool right) {
        const std::size_t m = res.products.size();
        const std::size_t win = std::max<std::size_t>(4, m / 8);
        if (m < win) return false;
        std::vector<double> v;
        for (std::size_t k = 0; k < win; ++k)
            v.push_back(right ? res.products[m - win + k] : res.products[win - 1 - k]);
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] < v[i - 1]) return false;
        return v.back() > 10.0 * std::max(v.front(), 1e-300) &&
               v.back() >= best * (1.0 - 1e-12);
    };
    if (frontier(true) || frontier(false)) {
        res.value = ExtReal::infinite();
        return res;
    }

    // golden refinement inside the bracket around the best scan point
    auto product_at = [&](double x) {
        // anchor on the nearest scan point below
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t i = (it == xs.begin()) ? 0 : std::size_t(it - xs.begin()) - 1;
        const double lo_v = lo_cum[i] + (x > xs[i] ? panel_between(f_lo, xs[i], x) : 0.0);
        double hi_v;
        if (i + 1 < n)
            hi_v = hi_cum[i + 1] + (x < xs[i + 1] ? panel_between(f_hi, x, xs[i + 1]) : 0.0);
        else
            hi_v = panel_between(f_hi, x, xs[i]) + hi_cum[i]; // x beyond last point: not reached
        if (std::isinf(lo_v) || std::isinf(hi_v) || std::isnan(lo_v) || std::isnan(hi_v))
            return -kInf; // indeterminate region: never wins the refinement
        return lo_v * hi_v;
    };
    const std::size_t ib = vidx[jb];
    double lo_x = (jb == 0) ? res.xs[0] : res.xs[jb - 1];
    double hi_x = (jb + 1 >= res.xs.size()) ? res.xs.back() : res.xs[jb + 1];
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = hi_x - gr * (hi_x - lo_x), c2 = lo_x + gr * (hi_x - lo_x);
    double f1 = product_at(c1), f2 = product_at(c2);
    res.argmax = xs[ib];
    for (int it = 0; it < 40 && hi_x - lo_x > 1e-10 * (1.0 + std::fabs(lo_x)); ++it) {
        if (f1 < f2) {
            lo_x = c1; c1 = c2; f1 = f2;
            c2 = lo_x + gr * (hi_x - lo_x);
            f2 = product_at(c2);
        } else {
            hi_x = c2; c2 = c1; f2 = f1;
            c1 = hi_x - gr * (hi_x - lo_x);
            f1 = product_at(c1);
        }
        const double fb2 = std::max(f1, f2);
        if (fb2 > best) {
            best = fb2;
            res.argmax = (f1 > f2) ? c1 : c2;
        }
    }
    res.value = ExtReal::finite(best);
    return res;
}

} // namespace

HardyResult hardy_BR(const WeightSpec& nu, const WeightSpec& mu, double a, double b) {
    return sup_product([&](double x) { return nu.eval_unchecked(x); },
                       [&](double x) { return 1.0 / mu.eval_unchecked(x); }, a, b);
}

HardyResult hardy_BL(const WeightSpec& nu, const WeightSpec& mu, double a, double b) {
    return sup_product([&](double x) { return 1.0 / mu.eval_unchecked(x); },
                       [&](double x) { return nu.eval_unchecked(x); }, a, b);
}

SplitVerdict dirichlet_poincare_verdict(const WeightSpec& nu, const WeightSpec& mu,
                                        const Domain1D& dom) {
    const double a = dom.left, b = dom.right;
    SplitVerdict out;

    struct Cand {
        double c;
        bool at_left, at_right;
    };
    std::vector<Cand> cands;
    cands.push_back({a, true, false});
    cands.push_back({b, false, true});
    std::vector<double> interior = scan_points(a, b, 33);
    // thin to ~33 candidates
    const std::size_t stride = std::max<std::size_t>(1, interior.size() / 33);
    for (std::size_t i = 0; i < interior.size(); i += stride)
        cands.push_back({interior[i], false, false});

    bool any_inconclusive = false;
    for (const Cand& cd : cands) {
        ExtReal bl = ExtReal::finite(0.0), br = ExtReal::finite(0.0);
        if (!cd.at_left) {
            HardyResult h = hardy_BL(nu, mu, a, cd.c);
            bl = h.value;
        }
        if (bl.is_infinite()) continue;
        if (!cd.at_right) {
            HardyResult h = hardy_BR(nu, mu, cd.c, b);
            br = h.value;
        }
        if (bl.is_unknown() || br.is_unknown()) {
            any_inconclusive = true;
            continue;
        }
        if (bl.is_finite() && br.is_finite()) {
            out.verdict = Verdict::holds;
            out.c = cd.c;
            out.B_left = bl;
            out.B_right = br;
            return out;
        }
    }
    out.verdict = any_inconclusive ? Verdict::inconclusive : Verdict::fails;
    // keep the full-interval values for the report
    out.c = a;
    out.B_left = ExtReal::finite(0.0);
    out.B_right = hardy_BR(nu, mu, a, b).value;
    return out;
}

namespace {

// abscissae reaching far deeper into the endpoints than the product scan:
// the interpolated cumulative must be honest where the weight is singular,
// otherwise clamping fakes a non-integrable inner integrand
std::vector<double> deep_scan_points(double a, double b, int n) {
    std::vector<double> pts = scan_points(a, b, n);
    if (std::isfinite(a)) {
        const double len = std::isfinite(b) ? b - a : 1.0;
        for (double e = 13.0; e <= 299.0; e += 2.0) {
            const double x = a + len * std::pow(10.0, -e);
            if (x <= a || !(x < b)) break;
            pts.push_back(x);
        }
    }
    if (std::isfinite(b)) {
        const double len = std::isfinite(a) ? b - a : 1.0;
        for (double e = 13.0; e <= 299.0; e += 2.0) {
            const double x = b - len * std::pow(10.0, -e);
            if (x >= b || !(x > a)) break;
            pts.push_back(x);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

HardyResult zero_mean_core(const WeightSpec& nu, const WeightSpec& mu, double a, double b,
                           bool left_kind) {
    ExtReal total = measure_nu(nu, Domain1D(a, b));
    if (!total.is_finite())
        throw DomainError("zero-mean functional needs nu(a,b) < infinity");

    // cumulative nu from the anchored end on a fine scan, monotone-cubic
    // interpolated for the inner integrand
    std::vector<double> xs = deep_scan_points(a, b, 160);
    const std::size_t n = xs.size();
    std::vector<double> cum(n);
    auto fnu = [&](double x) { return nu.eval_unchecked(x); };
    if (left_kind) {
        ExtReal head = classify_integral(fnu, Domain1D(a, xs.front()));
        cum[0] = head.value;
        for (std::size_t i = 1; i < n; ++i)
            cum[i] = cum[i - 1] + panel_between(fnu, xs[i - 1], xs[i]);
    } else {
        ExtReal tail = classify_integral(fnu, Domain1D(xs.back(), b));
        cum[n - 1] = tail.value;
        for (std::size_t i = n - 1; i-- > 0;)
            cum[i] = cum[i + 1] + panel_between(fnu, xs[i], xs[i + 1]);
    }
    Pchip N(xs, cum);

    // beyond the scan range the cumulative is within its tiny head/tail piece
    // of the clamped value; the square keeps that error negligible. Ordered
    // division keeps deep-endpoint underflow of N^2 and mu from turning into
    // 0/0. Where the diffusion weight has underflowed entirely, the ratio is
    // representable junk: zero if the cumulative is equally microscopic
    // (deep-underflow territory), saturation-inf otherwise (out-of-range
    // territory, dropped by the product scan).
    auto inner = [&](double y) {
        const double yc = std::clamp(y, N.x_min(), N.x_max());
        const double Ny = std::max(N(yc), 0.0);
        const double mv = mu.eval_unchecked(y);
        if (mv == 0.0) return (Ny <= 1e-200) ? 0.0 : kInf;
        return (Ny / mv) * Ny;
    };

    if (left_kind)
        return sup_product(inner, fnu, a, b);
    return sup_product(fnu, inner, a, b);
}

} // namespace

HardyResult zero_mean_KL(const WeightSpec& nu, const WeightSpec& mu, double a, double b) {
    return zero_mean_core(nu, mu, a, b, true);
}

HardyResult zero_mean_KR(const WeightSpec& nu, const WeightSpec& mu, double a, double b) {
    return zero_mean_core(nu, mu, a, b, false);
}

namespace {

// smallest generalized eigenvalue of the FV stiffness/mass pair
double smallest_eig(const Grid& g, double gl, double gr, bool deflate) {
    const int n = g.size();
    std::vector<double> lower(n), diag(n), upper(n);
    for (int i = 0; i < n; ++i) {
        const double gL = (i > 0) ? g.cond[i - 1] : gl;
        const double gR = (i + 1 < n) ? g.cond[i] : gr;
        diag[i] = gL + gR;
        lower[i] = (i > 0) ? -g.cond[i - 1] : 0.0;
        upper[i] = (i + 1 < n) ? -g.cond[i] : 0.0;
    }

    double lam_max = 0.0;
    for (int i = 0; i < n; ++i) lam_max = std::max(lam_max, diag[i] / g.mass[i]);
    const double sigma = 1e-12 * lam_max;

    auto project = [&](std::vector<double>& v) {
        if (!deflate) return;
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            num += g.mass[i] * v[i];
            den += g.mass[i];
        }
        const double c = num / den;
        for (int i = 0; i < n; ++i) v[i] -= c;
    };

    auto rayleigh = [&](const std::vector<double>& v) {
        double num = gl * v[0] * v[0] + gr * v[n - 1] * v[n - 1];
        for (int i = 0; i + 1 < n; ++i) {
            const double d = v[i + 1] - v[i];
            num += g.cond[i] * d * d;
        }
        double den = 0.0;
        for (int i = 0; i < n; ++i) den += g.mass[i] * v[i] * v[i];
        return num / den;
    };

    // residual of the generalized eigenpair, scaled: ||Av - lam Mv|| in the
    // M^-1 norm over ||v||_M; catches plateaus where the Rayleigh quotient
    // stalls on a higher mode before the lowest one has emerged
    auto eig_residual = [&](const std::vector<double>& v, double lam) {
        double rr = 0.0, vv = 0.0;
        for (int i = 0; i < n; ++i) {
            double av = diag[i] * v[i];
            if (i > 0) av += lower[i] * v[i - 1];
            if (i + 1 < n) av += upper[i] * v[i + 1];
            const double r = av - lam * g.mass[i] * v[i];
            rr += r * r / g.mass[i];
            vv += g.mass[i] * v[i] * v[i];
        }
        return std::sqrt(rr / vv);
    };

    // seed with a centered monotone profile plus wiggles: overlaps the lowest
    // (non-constant) mode for both kinds
    std::vector<double> v(n);
    const double xc = 0.5 * (g.faces.front() + g.faces.back());
    const double xw = 0.5 * (g.faces.back() - g.faces.front());
    for (int i = 0; i < n; ++i) {
        const double s = (g.centers[i] - xc) / xw;
        v[i] = s + std::sin(std::numbers::pi * 0.5 * (s + 1.0)) + 0.1 * std::sin(7.3 * i + 0.4);
    }
    project(v);

    double lam = rayleigh(v);
    for (int it = 0; it < 8000; ++it) {
        std::vector<double> rhs(n), lo(n), dg(n), up(n);
        for (int i = 0; i < n; ++i) {
            rhs[i] = g.mass[i] * v[i];
            lo[i] = lower[i];
            dg[i] = diag[i] + sigma * g.mass[i];
            up[i] = upper[i];
        }
        kern::solve_tridiag(lo, dg, up, rhs);
        project(rhs);
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) nrm += g.mass[i] * rhs[i] * rhs[i];
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw NumericError("inverse iteration broke down");
        for (int i = 0; i < n; ++i) rhs[i] /= nrm;
        v = rhs;
        lam = rayleigh(v);
        if (it >= 8 && eig_residual(v, lam) <= 1e-9 * std::fabs(lam)) break;
    }
    return lam;
}

} // namespace

DiscreteConstant discrete_constant(SpectralKind kind, const WeightSpec& nu, const WeightSpec& mu,
                                   const Domain1D& dom, const std::vector<int>& grids,
                                   const std::vector<double>& truncations, double gamma) {
    if (grids.empty()) throw DomainError("discrete_constant: need at least one grid size");
    std::vector<double> truncs = truncations;
    if (dom.bounded())
        truncs = {0.0};
    else if (truncs.empty())
        throw DomainError("discrete_constant: unbounded domain needs truncation lengths");

    if (kind == SpectralKind::zero_mean) {
        ExtReal total = measure_nu(nu, dom);
        if (!total.is_finite())
            throw DomainError("zero-mean constant needs nu(domain) < infinity");
    }

    DiscreteConstant out;
    for (double L : truncs) {
        const Domain1D box = dom.bounded() ? dom : dom.truncated(L);
        for (int M : grids) {
            Grid g = build_grid(nu, mu, box, M, gamma,
                                gamma == 1.0 ? GradeSide::none : GradeSide::automatic);
            TraceEntry e;
            e.cells = M;
            e.truncation = L;
            if (kind == SpectralKind::dirichlet) {
                if (g.cond_left == 0.0 && g.cond_right == 0.0) {
                    // wall resistance infinite on both sides: the zero trace
                    // is invisible and the constant is +inf at this level
                    e.estimate = kInf;
                    e.decoupled = true;
                } else {
                    const double lam = smallest_eig(g, g.cond_left, g.cond_right, false);
                    e.estimate = 1.0 / std::sqrt(lam);
                }
            } else {
                const double lam = smallest_eig(g, 0.0, 0.0, true);
                e.estimate = 1.0 / std::sqrt(lam);
            }
            out.trace.push_back(e);
        }
    }

    // divergence: decoupled at any level, or >= 25% growth at every one of
    // >= 4 consecutive refinement steps
    for (const TraceEntry& e : out.trace)
        if (e.decoupled) out.divergent = true;
    if (!out.divergent && out.trace.size() >= 5) {
        int growth_run = 0, best_run = 0;
        for (std::size_t i = 1; i < out.trace.size(); ++i) {
            if (out.trace[i].estimate >= 1.25 * out.trace[i - 1].estimate)
                best_run = std::max(best_run, ++growth_run);
            else
                growth_run = 0;
        }
        if (best_run >= 4) out.divergent = true;
    }

    // Richardson extrapolation (second order) over the two finest grids of
    // the final truncation level
    const std::size_t nlev = out.trace.size();
    if (out.divergent || nlev == 0) {
        out.estimate = kInf;
    } else if (grids.size() >= 2) {
        const TraceEntry& fine = out.trace[nlev - 1];
        const TraceEntry& coarse = out.trace[nlev - 2];
        const double r = double(fine.cells) / coarse.cells;
        out.estimate = fine.estimate + (fine.estimate - coarse.estimate) / (r * r - 1.0);
    } else {
        out.estimate = out.trace.back().estimate;
    }
    return out;
}

WeakPoincare weak_poincare_check(const WeightSpec& nu, const WeightSpec& mu, const Domain1D& dom,
                                 std::optional<double> M_P, double q_low, int cells, double trunc) {
    ExtReal total = measure_nu(nu, dom);
    if (!total.is_finite()) throw DomainError("weak Poincare check needs nu(domain) < infinity");

    const Domain1D box = dom.bounded() ? dom : dom.truncated(trunc);
    Grid g = build_grid(nu, mu, box, cells, 1.0, GradeSide::none);
    const int n = g.size();

    auto ratio = [&](const std::vector<double>& v) {
        double l2 = 0.0, llow = 0.0, grad = 0.0;
        for (int i = 0; i < n; ++i) {
            l2 += g.mass[i] * v[i] * v[i];
            llow += g.mass[i] * std::pow(std::fabs(v[i]), q_low);
        }
        for (int i = 0; i + 1 < n; ++i) {
            const double d = v[i + 1] - v[i];
            grad += g.cond[i] * d * d;
        }
        const double denom = std::sqrt(grad) + std::pow(llow, 1.0 / q_low);
        return std::sqrt(l2) / denom;
    };

    const double a = box.left, b = box.right, len = b - a;
    std::vector<std::vector<double>> trials;
    trials.emplace_back(n, 1.0); // constants: gradient term vanishes
    for (double ctr : {0.25, 0.5, 0.75})
        for (double wid : {0.1, 0.3}) {
            std::vector<double> v(n);
            for (int i = 0; i < n; ++i) {
                const double s = (g.centers[i] - a) / len;
                v[i] = std::max(0.0, 1.0 - std::fabs(s - ctr) / wid);
            }
            trials.push_back(std::move(v));
        }
    for (int k = 1; k <= 4; ++k) {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i)
            v[i] = std::cos(k * std::numbers::pi * (g.centers[i] - a) / len);
        trials.push_back(std::move(v));
    }
    for (double c : {0.3, 0.7}) {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) {
            const double s = (g.centers[i] - a) / len;
            v[i] = std::max(0.0, s - c);
        }
        trials.push_back(std::move(v));
    }

    WeakPoincare out;
    for (const auto& v : trials) out.trial_max = std::max(out.trial_max, ratio(v));
    if (M_P) {
        out.bound = 2.0 * std::max(*M_P, 1.0 / std::sqrt(total.value));
        out.estimate = std::max(out.trial_max, *out.bound);
        out.verdict = Verdict::holds;
    } else {
        out.estimate = out.trial_max;
        out.verdict = Verdict::inconclusive;
    }
    return out;
}

GapResult riemannian_gap(const Pchip& psi, int N, double r_max, int budget) {
    if (N < 2) throw DomainError("riemannian_gap: dimension must be >= 2");
    if (!(r_max > 0.0)) throw DomainError("riemannian_gap: r_max must be positive");
    (void)budget;
    auto fwd = [&](double r) { return std::pow(psi(r), N - 1); };
    auto inv = [&](double r) { return std::pow(psi(r), 1 - N); };

    auto Q_of = [&](double R) {
        HardyResult h = sup_product(fwd, inv, 0.0, R);
        return h;
    };
    HardyResult q1 = Q_of(0.25 * r_max), q2 = Q_of(0.5 * r_max), q3 = Q_of(r_max);
    GapResult out;
    if (!q3.value.is_finite()) {
        out.Q = kInf;
        out.bounded = false;
        return out;
    }
    out.Q = q3.value.value;
    out.argmax_xi = q3.argmax;
    const double g32 = q3.value.value - q2.value.value;
    const double g21 = q2.value.value - q1.value.value;
    out.bounded = g32 <= 0.05 * q3.value.value + 1e-12 ||
                  (g21 > 0.0 && g32 <= 0.55 * g21); // geometric saturation
    return out;
}

Pchip bridged_profile(double a, double r_max) {
    if (!(r_max > 3.0)) throw DomainError("bridged_profile: r_max must exceed the bridge");
    std::vector<double> r, psi;
    for (double x = 1e-6; x <= 1.0; x += 0.05) {
        r.push_back(x);
        psi.push_back(x);
    }
    // monotone bridge on (1,2): cubic through (1,1) .. (2, e^(2a))
    for (double x = 1.05; x < 2.0; x += 0.05) {
        const double t = x - 1.0;
        const double y0 = 1.0, y1 = std::exp(2.0 * a);
        const double d0 = 1.0, d1 = a * std::exp(2.0 * a);
        const double h00 = 2 * t * t * t - 3 * t * t + 1, h10 = t * t * t - 2 * t * t + t;
        const double h01 = -2 * t * t * t + 3 * t * t, h11 = t * t * t - t * t;
        psi.push_back(h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1);
        r.push_back(x);
    }
    const int far = 80;
    for (int k = 0; k <= far; ++k) {
        const double x = 2.0 + (r_max - 2.0) * k / far;
        r.push_back(x);
        psi.push_back(std::exp(a * x));
    }
    return Pchip(r, psi);
}

double M_Pa_constant(double a, double M_P, double nu_measure) {
    if (!(a > 0.0 && a <= 1.0)) throw DomainError("M_Pa_constant: a must be in (0,1]");
    if (!(M_P > 0.0)) throw DomainError("M_Pa_constant: M_P must be positive");
    if (!(nu_measure > 0.0)) throw DomainError("M_Pa_constant: nu measure must be positive");
    return std::pow(2.0, 1.0 - 0.5 * a) * std::pow(nu_measure, 0.5 * (1.0 - a)) * std::pow(M_P, a);
}

double c_alpha_beta(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < alpha))
        throw DomainError("c_alpha_beta: need 0 < beta < alpha < 1");
    const double t = beta / alpha;
    auto tt = [](double x) { return x == 0.0 ? 1.0 : std::pow(x, x); }; // x^x, 0^0 = 1
    return 1.0 + tt(t) * tt(1.0 - t);
}

nlohmann::json PoincareReport::to_json() const {
    nlohmann::json j;
    j["label"] = label;
    j["B_L"] = B_L.str();
    j["B_R"] = B_R.str();
    j["split_c"] = std::isfinite(split_c) ? nlohmann::json(split_c)
                                          : nlohmann::json(split_c > 0 ? "inf" : "-inf");
    j["K_L"] = K_L.str();
    j["K_R"] = K_R.str();
    if (C_P) j["C_P"] = *C_P;
    if (M_P) j["M_P"] = *M_P;
    if (W_P) j["W_P"] = *W_P;
    if (Q) j["Q"] = *Q;
    j["verdicts"] = {{"dirichlet", verdict_name(dirichlet)},
                     {"zero_mean", verdict_name(zero_mean)},
                     {"weak", verdict_name(weak)}};
    nlohmann::json tr = nlohmann::json::array();
    for (const TraceEntry& e : trace)
        tr.push_back({{"cells", e.cells},
                      {"truncation", e.truncation},
                      {"estimate", std::isfinite(e.estimate) ? nlohmann::json(e.estimate)
                                                             : nlohmann::json("inf")},
                      {"decoupled", e.decoupled}});
    j["trace"] = tr;
    j["trace_divergent"] = trace_divergent;
    return j;
}

PoincareReport audit(const AuditRequest& req) {
    PoincareReport rep;
    rep.label = req.label;

    if (req.want_dirichlet) {
        SplitVerdict sv = dirichlet_poincare_verdict(req.nu, req.mu, req.dom);
        rep.dirichlet = sv.verdict;
        rep.split_c = sv.c;
        rep.B_L = sv.B_left;
        rep.B_R = sv.B_right;
    }

    ExtReal total = measure_nu(req.nu, req.dom);
    if (req.want_zero_mean) {
        if (!total.is_finite()) {
            rep.zero_mean = Verdict::fails; // no finite mean to converge to
            rep.K_L = ExtReal::infinite();
            rep.K_R = ExtReal::infinite();
        } else {
            HardyResult kl = zero_mean_KL(req.nu, req.mu, req.dom.left, req.dom.right);
            HardyResult kr = zero_mean_KR(req.nu, req.mu, req.dom.left, req.dom.right);
            rep.K_L = kl.value;
            rep.K_R = kr.value;
            if (kl.value.is_unknown() || kr.value.is_unknown())
                rep.zero_mean = Verdict::inconclusive;
            else
                rep.zero_mean = (kl.value.is_finite() && kr.value.is_finite()) ? Verdict::holds
                                                                               : Verdict::fails;
        }
    }

    if (req.want_discrete) {
        const bool zm = req.want_zero_mean && total.is_finite();
        try {
            SpectralKind kind = zm ? SpectralKind::zero_mean : SpectralKind::dirichlet;
            if (req.want_dirichlet && !zm) kind = SpectralKind::dirichlet;
            DiscreteConstant dc = discrete_constant(kind, req.nu, req.mu, req.dom, req.grids,
                                                    req.truncations, req.gamma);
            rep.trace = dc.trace;
            rep.trace_divergent = dc.divergent;
            if (!dc.divergent) {
                if (kind == SpectralKind::dirichlet)
                    rep.C_P = dc.estimate;
                else
                    rep.M_P = dc.estimate;
            }
        } catch (const Error&) {
            // discrete stage optional: non-integrable cell masses etc.
        }
    }

    if (total.is_finite()) {
        try {
            WeakPoincare wp = weak_poincare_check(req.nu, req.mu, req.dom, rep.M_P, 1.0, 512,
                                                  req.truncations.empty() ? 40.0
                                                                          : req.truncations.back());
            rep.W_P = wp.estimate;
            rep.weak = wp.verdict;
            if (rep.zero_mean == Verdict::holds) rep.weak = Verdict::holds;
        } catch (const Error&) {
        }
    }
    return rep;
}

std::vector<CatalogEntry> weight_catalog() {
    std::vector<CatalogEntry> cat;
    auto add = [&](std::string name, SpectralKind kind, bool holds, WeightSpec nu, WeightSpec mu,
                   std::vector<double> truncs = {}, std::vector<int> grids = {250, 1000, 4000},
                   double gamma = 1.0) {
        cat.push_back({std::move(name), kind, holds, std::move(nu), std::move(mu),
                       std::move(truncs), std::move(grids), gamma});
    };
    const Domain1D half(0.0, kInf), unit(0.0, 1.0), line(-kInf, kInf), ext(1.0, kInf);

    // Dirichlet-kind pairs
    add("power-b3-halfline-dir", SpectralKind::dirichlet, true,
        WeightSpec::power(1.0, half), WeightSpec::power(3.0, half), {40.0, 80.0});
    add("power-b0.5-unit-dir", SpectralKind::dirichlet, true,
        WeightSpec::power(-1.5, unit), WeightSpec::power(0.5, unit));
    add("power-b3-exterior-dir", SpectralKind::dirichlet, true,
        WeightSpec::power(1.0, ext), WeightSpec::power(3.0, ext), {40.0, 80.0});
    add("logpower-b3-unit-dir", SpectralKind::dirichlet, true,
        WeightSpec::logpower(1.0, -1.0, unit), WeightSpec::logpower(3.0, 1.0, unit));
    add("exp-a1-line-dir", SpectralKind::dirichlet, true,
        WeightSpec::exponential(1.0, line), WeightSpec::exponential(1.0, line), {30.0, 60.0});
    add("distpower-b0.5-unit-dir", SpectralKind::dirichlet, true,
        WeightSpec::distpower(-1.5, unit), WeightSpec::distpower(0.5, unit));
    add("radialpower-bm2-N3-exterior-dir", SpectralKind::dirichlet, true,
        WeightSpec::radialpower(-4.0, 3, ext), WeightSpec::radialpower(-2.0, 3, ext),
        {40.0, 80.0});
    add("exp-am1-exterior-dir", SpectralKind::dirichlet, true,
        WeightSpec::exponential(-1.0, ext, true), WeightSpec::exponential(-1.0, ext, true),
        {40.0, 80.0});

    // zero-mean pairs
    add("power-b3-unit-neu", SpectralKind::zero_mean, true,
        WeightSpec::power(1.0, unit), WeightSpec::power(3.0, unit));
    add("power-b0.5-exterior-neu", SpectralKind::zero_mean, true,
        WeightSpec::power(-1.5, ext), WeightSpec::power(0.5, ext), {40.0, 80.0});
    add("logpower-b0.5-halfunit-neu", SpectralKind::zero_mean, true,
        WeightSpec::logpower(-1.5, -1.0, Domain1D(0.0, 0.5)),
        WeightSpec::logpower(0.5, 1.0, Domain1D(0.0, 0.5)));
    add("exp-am1-line-neu", SpectralKind::zero_mean, true,
        WeightSpec::exponential(-1.0, line, true), WeightSpec::exponential(-1.0, line, true),
        {30.0, 60.0});
    add("distpower-b2-unit-neu", SpectralKind::zero_mean, true,
        WeightSpec::distpower(0.0, unit), WeightSpec::distpower(2.0, unit));
    add("radialpower-shifted-am1-N3-neu", SpectralKind::zero_mean, true,
        WeightSpec::radialpower(-4.0, 3, half, true), WeightSpec::radialpower(-2.0, 3, half, true),
        {40.0, 80.0});
    add("gaussian-d0.5-line-neu", SpectralKind::zero_mean, true,
        WeightSpec::gaussian(0.5, line), WeightSpec::gaussian(0.5, line), {10.0, 20.0});

    // the excluded boundary-degenerate pair: Dirichlet Poincare fails
    add("distpower-b1.5-unit-dir-FAILS", SpectralKind::dirichlet, false,
        WeightSpec::distpower(-0.5, unit), WeightSpec::distpower(1.5, unit), {},
        {250, 1000, 4000, 16000});

    return cat;
}

} // namespace wpme
