#include "wpme/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "wpme/kernels.hpp"

namespace wpme {

using nlohmann::json;

double weighted_norm(std::span<const double> u, const Grid& g, double q) {
    if (std::isinf(q)) return kern::max_abs(u);
    if (!(q >= 1.0)) throw DomainError("weighted_norm: q must be >= 1 or infinity");
    return std::pow(kern::weighted_pow_sum(g.mass, u, q), 1.0 / q);
}

double mean_value(std::span<const double> u, const Grid& g) {
    const double tot = g.nu_total();
    if (!(tot > 0.0) || !std::isfinite(tot))
        throw DomainError("mean_value: total nu mass must be finite and positive");
    return kern::weighted_sum(g.mass, u) / tot;
}

json RateFit::to_json() const {
    return json{{"exponent", exponent}, {"constant", constant}, {"window_lo", window_lo},
                {"window_hi", window_hi}, {"residual", residual}, {"samples", samples}};
}

json ExpFit::to_json() const {
    return json{{"rate", rate}, {"constant", constant}, {"window_lo", window_lo},
                {"window_hi", window_hi}, {"residual", residual}, {"samples", samples}};
}

namespace {

struct LsqFit {
    double slope, intercept, rms;
    int n;
};

LsqFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = int(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    LsqFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy * sxx - sx * sxy) / det;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    f.n = n;
    return f;
}

} // namespace

RateFit fit_power_decay(const std::vector<double>& t, const std::vector<double>& y,
                        double window_lo, double window_hi) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < window_lo || t[i] > window_hi || !(t[i] > 0.0)) continue;
        if (!(y[i] > 0.0))
            throw DomainError("fit_power_decay: nonpositive sample inside the window");
        lx.push_back(std::log(t[i]));
        ly.push_back(std::log(y[i]));
    }
    if (lx.size() < 8)
        throw DomainError("fit_power_decay: fewer than 8 in-window samples");
    const auto [mn, mx] = std::minmax_element(lx.begin(), lx.end());
    if (*mx - *mn < std::log(10.0) * (1.0 - 1e-9))
        throw DomainError("fit_power_decay: window must span at least one decade of t");

    LsqFit f = least_squares(lx, ly);
    RateFit out;
    out.exponent = f.slope;
    out.constant = std::exp(f.intercept);
    out.window_lo = window_lo;
    out.window_hi = window_hi;
    out.residual = f.rms;
    out.samples = f.n;
    return out;
}

ExpFit fit_exponential_decay(const std::vector<double>& t, const std::vector<double>& y,
                             double window_lo, double window_hi) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < window_lo || t[i] > window_hi) continue;
        if (!(y[i] > 0.0)) continue; // exact zeros fall below any exponential
        lx.push_back(t[i]);
        ly.push_back(std::log(y[i]));
    }
    if (lx.size() < 8)
        throw DomainError("fit_exponential_decay: fewer than 8 in-window samples");
    LsqFit f = least_squares(lx, ly);
    ExpFit out;
    out.rate = -f.slope;
    out.constant = std::exp(f.intercept);
    out.window_lo = window_lo;
    out.window_hi = window_hi;
    out.residual = f.rms;
    out.samples = f.n;
    return out;
}

double energy_q_state(std::span<const double> u, const Grid& g, double m, double q) {
    std::vector<double> p(u.size());
    kern::signed_pow(u, 0.5 * (m + q), p);
    return kern::face_energy(g.cond, p);
}

double energy(std::span<const double> u, const Grid& g, double m) {
    return energy_q_state(u, g, m, m);
}

std::vector<double> energy_q_series(const Trajectory& traj, double m, double q) {
    std::vector<double> out;
    out.reserve(traj.states.size());
    for (const State& s : traj.states) out.push_back(energy_q_state(s.u, traj.grid, m, q));
    return out;
}

std::vector<double> energy_identity_check(const Trajectory& traj, double m, double q) {
    if (q < 0.0) throw DomainError("energy_identity_check: q must be >= 0");
    const double coef = 4.0 * q * (q + 1.0) * m / ((m + q) * (m + q));
    std::vector<double> E = energy_q_series(traj, m, q);
    const double rhs = kern::weighted_pow_sum(traj.grid.mass, traj.states.front().u, q + 1.0);
    std::vector<double> out;
    double acc = 0.0;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        if (k > 0) {
            const double dt = traj.states[k].t - traj.states[k - 1].t;
            acc += 0.5 * dt * (E[k] + E[k - 1]);
        }
        const double lhs =
            coef * acc + kern::weighted_pow_sum(traj.grid.mass, traj.states[k].u, q + 1.0);
        out.push_back(lhs - rhs);
    }
    return out;
}

std::string bound_tag_name(BoundTag tag) {
    switch (tag) {
        case BoundTag::dirichlet_smoothing: return "dirichlet_smoothing";
        case BoundTag::dirichlet_absolute: return "dirichlet_absolute";
        case BoundTag::neumann_smoothing_exp: return "neumann_smoothing_exp";
        case BoundTag::neumann_smoothing_plus: return "neumann_smoothing_plus";
        case BoundTag::zero_mean_absolute: return "zero_mean_absolute";
        case BoundTag::zero_mean_smoothing: return "zero_mean_smoothing";
        case BoundTag::mean_absolute: return "mean_absolute";
        case BoundTag::mean_intermediate: return "mean_intermediate";
        case BoundTag::mean_exponential: return "mean_exponential";
        case BoundTag::local_uniform: return "local_uniform";
    }
    return "?";
}

json BoundReport::to_json() const {
    json j;
    j["bound"] = bound;
    j["fitted_constant"] = fitted_constant;
    if (aux_constant != 0.0) j["aux_constant"] = aux_constant;
    j["window_lo"] = window_lo;
    j["window_hi"] = window_hi;
    j["residual"] = residual;
    j["holds"] = holds;
    j["times"] = times;
    j["margins"] = margins;
    return j;
}

BoundReport check_bound(const Trajectory& traj, BoundTag tag, const BoundParams& p) {
    const Grid& g = traj.grid;
    const double t_end = traj.states.back().t;
    double lo = p.window_lo >= 0.0 ? p.window_lo : t_end / 100.0;
    double hi = p.window_hi >= 0.0 ? p.window_hi : t_end / 2.0;
    if (tag == BoundTag::mean_intermediate) lo = std::max(lo, 1.0);

    const std::vector<double>& u0 = traj.states.front().u;
    const double nu_tot = p.nu_total.value_or(g.nu_total());
    const double u0_q0 = weighted_norm(u0, g, p.q0);
    const double ubar = mean_value(u0, g);
    const double a_smooth = (p.rho - p.q0) / (p.rho * (p.m - 1.0));
    const double a_abs = 1.0 / (p.m - 1.0);

    // interior compact: central cells covering 60% of the nu measure
    auto compact_range = [&]() {
        const double cut = 0.2 * nu_tot;
        double acc = 0.0;
        int ilo = 0, ihi = g.size() - 1;
        for (int i = 0; i < g.size(); ++i) {
            acc += g.mass[i];
            if (acc >= cut) {
                ilo = i;
                break;
            }
        }
        acc = 0.0;
        for (int i = g.size() - 1; i >= 0; --i) {
            acc += g.mass[i];
            if (acc >= cut) {
                ihi = i;
                break;
            }
        }
        return std::make_pair(ilo, ihi);
    };

    std::vector<double> ts, lhs, form;
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        const State& s = traj.states[k];
        if (s.t < lo || s.t > hi) continue;
        double y = 0.0, F = 1.0;
        switch (tag) {
            case BoundTag::dirichlet_smoothing:
            case BoundTag::zero_mean_smoothing:
                y = weighted_norm(s.u, g, p.rho);
                F = std::pow(s.t, -a_smooth) * std::pow(u0_q0, p.q0 / p.rho);
                break;
            case BoundTag::dirichlet_absolute:
            case BoundTag::zero_mean_absolute:
                y = weighted_norm(s.u, g, p.rho);
                F = std::pow(s.t, -a_abs);
                break;
            case BoundTag::neumann_smoothing_exp: {
                y = weighted_norm(s.u, g, p.rho);
                double H = 0.0;
                if (p.M_P)
                    H = 2.0 / ((*p.M_P) * (*p.M_P) *
                               std::pow(nu_tot, std::min(1.0, p.m - 1.0)));
                F = std::pow(s.t, -a_smooth) * std::pow(u0_q0, p.q0 / p.rho) *
                    std::exp(H * std::pow(u0_q0, p.m - 1.0) * s.t);
                break;
            }
            case BoundTag::neumann_smoothing_plus:
                y = weighted_norm(s.u, g, p.rho);
                F = std::pow(s.t, -a_smooth) * std::pow(u0_q0, p.q0 / p.rho) + u0_q0;
                break;
            case BoundTag::mean_absolute: {
                std::vector<double> d(s.u);
                for (double& v : d) v -= ubar;
                y = weighted_norm(d, g, p.rho);
                F = std::pow(s.t, -a_abs);
                break;
            }
            case BoundTag::mean_intermediate: {
                std::vector<double> d(s.u);
                for (double& v : d) v -= ubar;
                y = weighted_norm(d, g, p.rho);
                F = std::pow(s.t, -2.0 * (1.0 - p.epsilon) / (p.rho * (p.m - 1.0))) *
                    std::pow(u0_q0, p.q0 * p.epsilon / p.rho);
                break;
            }
            case BoundTag::mean_exponential: {
                std::vector<double> d(s.u);
                for (double& v : d) v -= ubar;
                y = weighted_norm(d, g, p.rho);
                F = 1.0; // handled below
                break;
            }
            case BoundTag::local_uniform: {
                auto [ilo, ihi] = compact_range();
                double mx = 0.0;
                for (int i = ilo; i <= ihi; ++i) mx = std::max(mx, std::fabs(s.u[i] - ubar));
                y = mx;
                F = 1.0; // handled below
                break;
            }
        }
        ts.push_back(s.t);
        lhs.push_back(y);
        form.push_back(F);
    }
    if (ts.size() < 8) throw DomainError("check_bound: fewer than 8 in-window samples");

    BoundReport rep;
    rep.bound = bound_tag_name(tag);
    rep.window_lo = lo;
    rep.window_hi = hi;
    rep.times = ts;

    const double ymax = *std::max_element(lhs.begin(), lhs.end());
    if (ymax == 0.0) { // identically zero trajectory: any constant works
        rep.fitted_constant = 0.0;
        rep.margins.assign(ts.size(), 0.0);
        rep.holds = true;
        return rep;
    }

    if (tag == BoundTag::mean_exponential) {
        std::vector<double> d0(u0);
        for (double& v : d0) v -= ubar;
        const double y0 = weighted_norm(d0, g, p.rho);
        const double um = std::pow(std::fabs(ubar), p.m - 1.0);
        if (!(um > 0.0)) throw DomainError("mean_exponential bound needs a nonzero mean");
        double C = kInf;
        for (std::size_t i = 0; i < ts.size(); ++i)
            if (lhs[i] > 0.0) C = std::min(C, std::log(y0 / lhs[i]) / (um * ts[i]));
        if (std::isinf(C)) C = 0.0;
        rep.fitted_constant = C;
        rep.holds = C > 0.0;
        double ss = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double rhs = y0 * std::exp(-C * um * ts[i]);
            const double mg = (lhs[i] > 0.0) ? std::log(rhs / lhs[i]) : 0.0;
            rep.margins.push_back(mg);
            ss += mg * mg;
        }
        rep.residual = std::sqrt(ss / ts.size());
        return rep;
    }

    if (tag == BoundTag::local_uniform) {
        const double um = std::pow(std::fabs(ubar), p.m - 1.0);
        if (!(um > 0.0)) throw DomainError("local_uniform bound needs a nonzero mean");
        ExpFit ef = fit_exponential_decay(ts, lhs, lo, hi);
        const double C = std::max(ef.rate / um, 0.0);
        double G = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i)
            G = std::max(G, lhs[i] * std::exp(C * um * ts[i]));
        rep.aux_constant = C;
        rep.fitted_constant = G;
        rep.holds = C > 0.0;
        double ss = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double rhs = G * std::exp(-C * um * ts[i]);
            const double mg = (lhs[i] > 0.0) ? std::log(rhs / lhs[i]) : 0.0;
            rep.margins.push_back(mg);
            ss += mg * mg;
        }
        rep.residual = std::sqrt(ss / ts.size());
        return rep;
    }

    double K = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) K = std::max(K, lhs[i] / form[i]);
    rep.fitted_constant = K;
    if (tag == BoundTag::neumann_smoothing_exp && p.M_P)
        rep.aux_constant =
            2.0 / ((*p.M_P) * (*p.M_P) * std::pow(nu_tot, std::min(1.0, p.m - 1.0)));
    double ss = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double mg = (lhs[i] > 0.0) ? std::log(K * form[i] / lhs[i]) : 0.0;
        rep.margins.push_back(mg);
        rep.holds = rep.holds && std::isfinite(mg) && mg >= -1e-12;
        ss += mg * mg;
    }
    rep.residual = std::sqrt(ss / ts.size());
    return rep;
}

std::vector<SummaryRow> summarize(const Trajectory& traj, double m, double q) {
    std::vector<SummaryRow> rows;
    rows.reserve(traj.states.size());
    for (const State& s : traj.states) {
        SummaryRow r;
        r.t = s.t;
        r.norm1 = weighted_norm(s.u, traj.grid, 1.0);
        r.norm2 = weighted_norm(s.u, traj.grid, 2.0);
        r.normq = weighted_norm(s.u, traj.grid, q);
        r.norm_inf = weighted_norm(s.u, traj.grid, kInf);
        r.mean = mean_value(s.u, traj.grid);
        r.energy = energy(s.u, traj.grid, m);
        rows.push_back(r);
    }
    return rows;
}

} // namespace wpme
