#include "wpme/grid.hpp"

#include <cmath>

#include "wpme/kernels.hpp"

namespace wpme {

double Grid::nu_total() const {
    double s = 0.0;
    for (double m : mass) s += m;
    return s;
}

namespace {

// Does the weight scale like a nontrivial power at the endpoint? Compare
// values at distances d and 2d from the wall.
bool singular_at(const WeightSpec& w, double x0, double toward, double len) {
    const double d = 1e-9 * len;
    const double w1 = w.eval_unchecked(x0 + toward * d);
    const double w2 = w.eval_unchecked(x0 + toward * 2.0 * d);
    if (!(w1 > 0.0) || !(w2 > 0.0) || !std::isfinite(w1) || !std::isfinite(w2)) return true;
    return std::fabs(std::log2(w1 / w2)) > 0.25;
}

double cell_mass(const WeightSpec& nu, double a, double b) {
    auto f = [&](double x) { return nu.eval_unchecked(x); };
    QuadResult q = integrate_panel(f, a, b);
    if (q.converged && q.abs_error_estimate <= 1e-10 * (1.0 + std::fabs(q.value)))
        return q.value;
    QuadOptions opt;
    opt.rel_tol = 1e-10;
    opt.max_panels = 400;
    q = integrate(f, Domain1D(a, b), opt);
    if (!q.converged && !(q.value >= 0.0 && std::isfinite(q.value)))
        throw NumericError("cell mass integral failed on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
    return q.value;
}

} // namespace

Grid build_grid(const WeightSpec& nu, const WeightSpec& mu, const Domain1D& dom, int M,
                double gamma, GradeSide side) {
    if (M < 8) throw DomainError("build_grid: need at least 8 cells");
    if (!dom.bounded()) throw DomainError("build_grid: domain must be truncated first");
    if (!(gamma >= 1.0)) throw DomainError("build_grid: gamma must be >= 1");

    const double a = dom.left, b = dom.right, len = dom.length();

    bool cl = false, cr = false;
    switch (side) {
        case GradeSide::none: break;
        case GradeSide::left: cl = true; break;
        case GradeSide::right: cr = true; break;
        case GradeSide::both: cl = cr = true; break;
        case GradeSide::automatic:
            cl = singular_at(nu, a, +1.0, len) || singular_at(mu, a, +1.0, len);
            cr = singular_at(nu, b, -1.0, len) || singular_at(mu, b, -1.0, len);
            break;
    }
    if (gamma == 1.0) cl = cr = false;

    auto map = [&](double s) {
        if (cl && cr) {
            const double p = std::pow(s, gamma);
            return p / (p + std::pow(1.0 - s, gamma));
        }
        if (cl) return std::pow(s, gamma);
        if (cr) return 1.0 - std::pow(1.0 - s, gamma);
        return s;
    };

    Grid g;
    g.gamma = (cl || cr) ? gamma : 1.0;
    g.faces.resize(M + 1);
    for (int k = 0; k <= M; ++k) g.faces[k] = a + len * map(double(k) / M);
    g.faces.front() = a;
    g.faces.back() = b;

    g.centers.resize(M);
    g.mass.resize(M);
    for (int i = 0; i < M; ++i) {
        g.centers[i] = 0.5 * (g.faces[i] + g.faces[i + 1]);
        g.mass[i] = cell_mass(nu, g.faces[i], g.faces[i + 1]);
    }

    g.cond.resize(M - 1);
    for (int i = 0; i + 1 < M; ++i)
        g.cond[i] = mu.eval_unchecked(g.faces[i + 1]) / (g.centers[i + 1] - g.centers[i]);

    auto wall_cond = [&](double wall, double center) {
        ExtReal r = classify_integral([&](double x) { return 1.0 / mu.eval_unchecked(x); },
                                      Domain1D(std::min(wall, center), std::max(wall, center)));
        if (r.is_infinite()) return 0.0;
        if (r.is_unknown())
            throw NumericError("boundary resistance integral inconclusive near x = " +
                               std::to_string(wall));
        return 1.0 / r.value;
    };
    g.cond_left = wall_cond(a, g.centers.front());
    g.cond_right = wall_cond(b, g.centers.back());

    // merge cells across vanishing faces / empty cells (far tails of rapidly
    // decaying weights underflow to exactly zero)
    bool again = true;
    while (again && g.size() > 8) {
        again = false;
        for (int i = 0; i + 1 < g.size(); ++i) {
            if (g.cond[i] < 1e-300 || g.mass[i] < 1e-300 || g.mass[i + 1] < 1e-300) {
                g.mass[i] += g.mass[i + 1];
                g.mass.erase(g.mass.begin() + i + 1);
                g.faces.erase(g.faces.begin() + i + 1);
                g.centers[i] = 0.5 * (g.faces[i] + g.faces[i + 1]);
                g.centers.erase(g.centers.begin() + i + 1);
                g.cond.erase(g.cond.begin() + i);
                if (i > 0) g.cond[i - 1] = mu.eval_unchecked(g.faces[i]) / (g.centers[i] - g.centers[i - 1]);
                if (i < int(g.cond.size()))
                    g.cond[i] = mu.eval_unchecked(g.faces[i + 1]) / (g.centers[i + 1] - g.centers[i]);
                ++g.merged_cells;
                again = true;
                break;
            }
        }
    }
    return g;
}

} // namespace wpme
