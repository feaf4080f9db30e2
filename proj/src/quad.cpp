#include "wpme/quad.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace wpme {

namespace {

// Gauss-Kronrod (7,15) nodes/weights on [-1,1].
const double kXgk[8] = {
    0.991455371120812639206854697526, 0.949107912342758524526189684048,
    0.864864423359769072789712788641, 0.741531185599394439863864773281,
    0.586087235467691130294144838259, 0.405845151377397166906606412077,
    0.207784955007898467600689403773, 0.0};
const double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEval {
    double value = 0.0;
    double error = 0.0;
    bool divergent = false; // integrand hit +/-inf
};

PanelEval gk15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    // nodes can round onto an endpoint once the panel width reaches the
    // subnormal range; such panels are unresolvable slivers
    double xs_lo = c - h * kXgk[0], xs_hi = c + h * kXgk[0];
    if (!(xs_lo > a) || !(xs_hi < b) || !(c > a) || !(c < b)) {
        PanelEval out;
        out.divergent = true;
        out.value = kInf;
        return out;
    }
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);

    PanelEval out;
    double kron = 0.0, gauss = 0.0, rough = 0.0;
    for (int i = 0; i < 15; ++i) {
        if (std::isnan(fv[i]))
            throw EvalError("integrand returned NaN at x = " +
                            std::to_string(c + h * ((i < 7) ? -kXgk[i] : (i > 7 ? kXgk[14 - i] : 0.0))));
        if (std::isinf(fv[i])) {
            out.divergent = true;
            out.value = fv[i];
            return out;
        }
        const int j = (i <= 7) ? i : 14 - i;
        kron += kWgk[j] * fv[i];
        rough += kWgk[j] * std::fabs(fv[i]);
    }
    // Gauss subset: odd Kronrod indices
    gauss = kWg[3] * fv[7];
    for (int i = 0; i < 3; ++i)
        gauss += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);

    out.value = h * kron;
    double err = std::fabs(h * (kron - gauss));
    // standard QUADPACK-style error sharpening
    double resabs = h * rough;
    if (resabs > 0.0 && err > 0.0)
        err = resabs * std::min(1.0, std::pow(200.0 * err / resabs, 1.5));
    out.error = err;
    return out;
}

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

// Integrate f over finite (a,b); never evaluates at the endpoints. Initial
// panels are graded geometrically toward both endpoints so algebraic
// singularities converge without deep bisection stacks.
QuadResult adapt_finite(const Integrand& f, double a, double b, const QuadOptions& opt) {
    QuadResult res;
    std::priority_queue<Panel> heap;

    std::vector<double> edges;
    edges.push_back(a);
    const double len = b - a;
    // geometric grading: ~18 panels per endpoint, ratio 1/8; offsets stop at
    // the rounding floor so no edge collapses onto an endpoint
    std::vector<double> off;
    for (double s = len / 3.0; s > len * 1e-16; s /= 8.0)
        if (a + s > a && b - s < b) off.push_back(s);
    for (auto it = off.rbegin(); it != off.rend(); ++it) edges.push_back(a + *it);
    for (double s : off) edges.push_back(b - s);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    // a divergent panel whose width sits at the floating-point rounding floor
    // cannot be refined; its true contribution is an unresolvable sliver and
    // is dropped (integrable-singularity case; genuine divergence still shows
    // up in the neighbouring panels and the classification probes)
    auto at_rounding_floor = [](double x0, double x1) {
        const double scale = std::max(std::fabs(x0), std::fabs(x1));
        return (x1 - x0) <= 8.0 * std::numeric_limits<double>::epsilon() * scale ||
               (x1 - x0) < 1e-305; // subnormal range: node arithmetic degenerates
    };

    double total = 0.0, toterr = 0.0;
    int n_panels = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        PanelEval pe = gk15(f, edges[i], edges[i + 1]);
        ++n_panels;
        if (pe.divergent) {
            if (at_rounding_floor(edges[i], edges[i + 1])) continue;
            res.value = pe.value;
            res.converged = false;
            res.subdivisions = n_panels;
            res.abs_error_estimate = kInf;
            return res;
        }
        total += pe.value;
        toterr += pe.error;
        heap.push({edges[i], edges[i + 1], pe.value, pe.error});
    }

    auto tol = [&](double v) { return opt.rel_tol * (opt.abs_floor + std::fabs(v)); };

    while (toterr > tol(total) && n_panels < opt.max_panels) {
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) { // width at rounding floor
            heap.push(worst);
            break;
        }
        PanelEval le = gk15(f, worst.a, mid);
        PanelEval re = gk15(f, mid, worst.b);
        ++n_panels;
        if (le.divergent || re.divergent) {
            const bool sliver = le.divergent ? at_rounding_floor(worst.a, mid)
                                             : at_rounding_floor(mid, worst.b);
            if (!sliver) {
                res.value = le.divergent ? le.value : re.value;
                res.converged = false;
                res.subdivisions = n_panels;
                res.abs_error_estimate = kInf;
                return res;
            }
            total -= worst.value;
            toterr -= worst.error;
            if (!le.divergent) {
                total += le.value;
                toterr += le.error;
                heap.push({worst.a, mid, le.value, le.error});
            }
            if (!re.divergent) {
                total += re.value;
                toterr += re.error;
                heap.push({mid, worst.b, re.value, re.error});
            }
            continue;
        }
        total += le.value + re.value - worst.value;
        toterr += le.error + re.error - worst.error;
        heap.push({worst.a, mid, le.value, le.error});
        heap.push({mid, worst.b, re.value, re.error});
    }

    res.value = total;
    res.abs_error_estimate = toterr;
    res.subdivisions = n_panels;
    res.converged = toterr <= tol(total);
    return res;
}

} // namespace

QuadResult integrate_panel(const Integrand& f, double a, double b) {
    PanelEval pe = gk15(f, a, b);
    QuadResult res;
    res.value = pe.value;
    res.abs_error_estimate = pe.divergent ? kInf : pe.error;
    res.subdivisions = 1;
    res.converged = !pe.divergent;
    return res;
}

QuadResult integrate(const Integrand& f, const Domain1D& itv, const QuadOptions& opt) {
    const bool li = !itv.left_finite(), ri = !itv.right_finite();
    if (!li && !ri) return adapt_finite(f, itv.left, itv.right, opt);

    if (li && ri) {
        // split at 0 and handle each half-line
        QuadOptions half = opt;
        half.rel_tol = 0.5 * opt.rel_tol;
        QuadResult l = integrate(f, Domain1D(-kInf, 0.0), half);
        QuadResult r = integrate(f, Domain1D(0.0, kInf), half);
        QuadResult res;
        res.value = l.value + r.value;
        res.abs_error_estimate = l.abs_error_estimate + r.abs_error_estimate;
        res.subdivisions = l.subdivisions + r.subdivisions;
        res.converged = l.converged && r.converged;
        return res;
    }

    // one infinite endpoint: x = c +/- s/(1-s), dx = +/- ds/(1-s)^2; zero
    // integrand values short-circuit before the Jacobian can overflow
    if (ri) {
        const double c = itv.left;
        auto g = [&](double s) {
            const double om = 1.0 - s;
            if (om <= 0.0) return 0.0;
            const double fx = f(c + s / om);
            if (fx == 0.0) return 0.0;
            return fx / (om * om);
        };
        return adapt_finite(g, 0.0, 1.0, opt);
    }
    const double c = itv.right;
    auto g = [&](double s) {
        const double om = 1.0 - s;
        if (om <= 0.0) return 0.0;
        const double fx = f(c - s / om);
        if (fx == 0.0) return 0.0;
        return fx / (om * om);
    };
    return adapt_finite(g, 0.0, 1.0, opt);
}

namespace {

// Decides finite/infinite from a monotone family of partial integrals J_k
// (nonnegative integrands) by the ratio of successive increments: geometric
// decay certifies a finite limit, sustained geometric growth (or the 1e12
// hard cap against J_0) certifies divergence. Log-borderline families stay
// undecided.
class IncrementScan {
public:
    // 0 finite, 1 infinite, -1 keep feeding
    int feed(double J) {
        if (!have_ref_) {
            ref_ = std::fabs(J);
            have_ref_ = true;
        }
        if (std::fabs(J) > 1e12 * std::max(ref_, 1e-300)) return 1;
        if (have_prev_) {
            const double d = J - prev_J_;
            const bool saturated = std::fabs(d) <= 1e-9 * (1.0 + std::fabs(J));
            if (saturated) {
                ++fin_run_;
                inf_run_ = 0;
            } else if (have_d_ && prev_d_ > 0.0 && d > 0.0) {
                const double r = d / prev_d_;
                if (r <= 0.95) {
                    ++fin_run_;
                    inf_run_ = 0;
                } else if (r >= 1.02) {
                    ++inf_run_;
                    fin_run_ = 0;
                } else {
                    fin_run_ = inf_run_ = 0;
                }
            }
            prev_d_ = d;
            have_d_ = true;
        }
        prev_J_ = J;
        have_prev_ = true;
        if (fin_run_ >= 3) return 0;
        if (inf_run_ >= 3) return 1;
        return -1;
    }

private:
    double ref_ = 0.0, prev_J_ = 0.0, prev_d_ = 0.0;
    bool have_ref_ = false, have_prev_ = false, have_d_ = false;
    int fin_run_ = 0, inf_run_ = 0;
};

QuadResult loose_integrate(const Integrand& f, double a, double b) {
    QuadOptions loose;
    loose.rel_tol = 1e-7;
    loose.max_panels = 4000;
    return integrate(f, Domain1D(a, b), loose);
}

// finite interval: shrink the gaps toward both endpoints simultaneously
ExtReal classify_finite(const Integrand& f, double a, double b, const QuadResult& q) {
    const double len = b - a;
    IncrementScan scan;
    double lastJ = 0.0;
    bool any = false;
    for (int k = 2; k <= 50; ++k) {
        const double gap = len * std::ldexp(1.0, -k);
        if (a + gap >= b - gap) break;
        QuadResult part = loose_integrate(f, a + gap, b - gap);
        if (!part.converged) break;
        lastJ = part.value;
        any = true;
        const int v = scan.feed(part.value);
        if (v == 1) return ExtReal::infinite();
        if (v == 0) {
            // best available estimate: the adaptive value reaches deeper into
            // the endpoints than the probe gaps (integrands are nonnegative)
            double val = lastJ;
            if (std::isfinite(q.value)) val = std::max(val, q.value);
            return ExtReal::finite(val);
        }
    }
    if (std::isinf(q.value)) return ExtReal::infinite();
    if (!any && q.converged) return ExtReal::finite(q.value); // interval below probe resolution
    return ExtReal::unknown(any ? lastJ : q.value);
}

// one infinite direction: head box near the finite anchor, then doubling
// boxes toward infinity
ExtReal classify_half_line(const Integrand& f, double c, double sgn, const QuadResult& q) {
    auto box = [&](double lo, double hi) {
        return loose_integrate(f, std::min(lo, hi), std::max(lo, hi));
    };
    QuadResult head_q = box(c, c + sgn);
    ExtReal head = classify_finite([&](double x) { return f(x); }, std::min(c, c + sgn),
                                   std::max(c, c + sgn), head_q);
    if (head.is_infinite()) return ExtReal::infinite();
    if (head.is_unknown()) return ExtReal::unknown(q.value);

    IncrementScan scan;
    double lastJ = 0.0;
    for (int k = 1; k <= 48; ++k) {
        QuadResult part = box(c + sgn, c + sgn * std::ldexp(1.0, k));
        if (!part.converged) return ExtReal::unknown(q.value);
        lastJ = part.value;
        const int v = scan.feed(part.value);
        if (v == 1) return ExtReal::infinite();
        if (v == 0) return ExtReal::finite(q.converged ? q.value : head.value + lastJ);
    }
    return ExtReal::unknown(q.converged ? q.value : head.value + lastJ);
}

} // namespace

ExtReal classify_integral(const Integrand& f, const Domain1D& itv, const QuadOptions& opt) {
    const bool li = !itv.left_finite(), ri = !itv.right_finite();
    if (li && ri) {
        ExtReal l = classify_integral(f, Domain1D(-kInf, 0.0), opt);
        if (l.is_infinite()) return l;
        ExtReal r = classify_integral(f, Domain1D(0.0, kInf), opt);
        if (r.is_infinite()) return r;
        if (l.is_unknown() || r.is_unknown()) return ExtReal::unknown(l.value + r.value);
        return ExtReal::finite(l.value + r.value);
    }

    QuadResult q = integrate(f, itv, opt);
    if (!li && !ri) return classify_finite(f, itv.left, itv.right, q);
    if (ri) return classify_half_line(f, itv.left, +1.0, q);
    return classify_half_line(f, itv.right, -1.0, q);
}

SupResult sup_search(const std::function<double(double)>& g, const Domain1D& itv, int budget) {
    if (budget < 64) throw DomainError("sup_search: budget must be >= 64");

    // Scan grid: clustered toward finite endpoints (geometric offsets) and
    // log-spaced toward infinite ones.
    std::vector<double> pts;
    const int n_side = budget / 4;
    if (itv.bounded()) {
        const double len = itv.length();
        for (int k = 0; k < n_side; ++k) {
            const double frac = 0.5 * std::pow(10.0, -12.0 * k / (n_side - 1));
            pts.push_back(itv.left + len * frac);
            pts.push_back(itv.right - len * frac);
        }
        for (int k = 1; k < n_side; ++k)
            pts.push_back(itv.left + len * k / n_side);
    } else {
        auto half_line = [&](double c, double sgn) {
            for (int k = 0; k < 2 * n_side; ++k) {
                const double e = -12.0 + 24.0 * k / (2.0 * n_side - 1.0);
                pts.push_back(c + sgn * std::pow(10.0, e));
            }
        };
        if (!itv.left_finite() && !itv.right_finite()) {
            half_line(0.0, 1.0);
            half_line(0.0, -1.0);
            pts.push_back(0.0);
        } else if (!itv.right_finite()) {
            half_line(itv.left, 1.0);
        } else {
            half_line(itv.right, -1.0);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::remove_if(pts.begin(), pts.end(),
                             [&](double x) { return !itv.contains(x); }),
              pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    SupResult res;
    res.sup = -kInf;
    std::vector<double> vals(pts.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        vals[i] = g(pts[i]);
        if (std::isnan(vals[i]))
            throw EvalError("sup_search: NaN at x = " + std::to_string(pts[i]));
        if (vals[i] > res.sup) {
            res.sup = vals[i];
            res.argmax = pts[i];
            best = i;
        }
    }
    if (std::isinf(res.sup)) {
        res.bounded = false;
        return res;
    }

    // Frontier growth: monotone increase by >= 10x across the outermost
    // decade of scan points toward either endpoint. Scan grids are log-
    // spaced toward endpoints, so a decade is a fixed count of points.
    auto frontier_unbounded = [&](bool toward_right) {
        // distance-to-frontier of a point
        auto dist = [&](double x) {
            if (toward_right) return itv.right_finite() ? itv.right - x : 1.0 / (1.0 + std::fabs(x));
            return itv.left_finite() ? x - itv.left : 1.0 / (1.0 + std::fabs(x));
        };
        const double d_edge = dist(toward_right ? pts.back() : pts.front());
        // walk inward from the frontier until the window spans a full decade
        // of distances (inclusive of the point crossing the boundary)
        std::vector<double> decade; // ordered frontier -> interior, reversed below
        if (toward_right) {
            for (std::size_t i = pts.size(); i-- > 0;) {
                decade.push_back(vals[i]);
                if (dist(pts[i]) >= 10.0 * d_edge) break;
            }
        } else {
            for (std::size_t i = 0; i < pts.size(); ++i) {
                decade.push_back(vals[i]);
                if (dist(pts[i]) >= 10.0 * d_edge) break;
            }
        }
        std::reverse(decade.begin(), decade.end());
        if (decade.size() < 3) return false;
        for (std::size_t i = 1; i < decade.size(); ++i)
            if (decade[i] < decade[i - 1]) return false;
        return decade.back() >= 10.0 * (1.0 - 1e-9) * std::max(decade.front(), 1e-300) &&
               decade.back() >= res.sup * (1.0 - 1e-12);
    };
    if (frontier_unbounded(true) || frontier_unbounded(false)) {
        res.bounded = false;
        return res;
    }

    // Golden-section refinement in the bracket around the best scan point.
    double lo = (best == 0) ? pts[0] : pts[best - 1];
    double hi = (best + 1 >= pts.size()) ? pts.back() : pts[best + 1];
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = hi - gr * (hi - lo), c2 = lo + gr * (hi - lo);
    double f1 = g(c1), f2 = g(c2);
    for (int it = 0; it < budget / 2 && hi - lo > 1e-12 * (1.0 + std::fabs(lo)); ++it) {
        if (f1 < f2) {
            lo = c1; c1 = c2; f1 = f2;
            c2 = lo + gr * (hi - lo);
            f2 = g(c2);
        } else {
            hi = c2; c2 = c1; f2 = f1;
            c1 = hi - gr * (hi - lo);
            f1 = g(c1);
        }
        const double fb = std::max(f1, f2);
        if (fb > res.sup) {
            res.sup = fb;
            res.argmax = (f1 > f2) ? c1 : c2;
        }
    }
    return res;
}

} // namespace wpme
