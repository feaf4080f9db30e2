#include "wpme/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wpme/diagnostics.hpp"
#include "wpme/kernels.hpp"

namespace wpme {

using nlohmann::json;

namespace {

// discrete flux divergence D_i of a profile (boundary ghosts at zero value)
std::vector<double> flux_div(const Grid& g, const std::vector<double>& phi, double gl, double gr) {
    const std::size_t n = phi.size();
    std::vector<double> zero(n, 0.0), r(n);
    kern::be_residual(g.mass, g.cond, gl, gr, zero, zero, phi, 1.0, r);
    for (double& v : r) v = -v;
    return r;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i)
        t[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return t;
}

std::vector<double> lin_spaced(double lo, double hi, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = lo + (hi - lo) * i / (n - 1);
    return t;
}

std::vector<double> merge_times(std::vector<double> a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    std::vector<double> out;
    for (double t : a)
        if (out.empty() || t > out.back() * (1.0 + 1e-12)) out.push_back(t);
    return out;
}

} // namespace

json invariant_suite(const Trajectory& traj, const PMEProblem& pb) {
    const Grid& g = traj.grid;
    json j;

    if (pb.bc == BC::neumann) {
        const double m0 = mean_value(traj.states.front().u, g);
        double drift = 0.0;
        for (const State& s : traj.states)
            drift = std::max(drift, std::fabs(mean_value(s.u, g) - m0));
        const double scale = std::max(1.0, std::fabs(m0));
        j["mean_drift_rel"] = drift / scale;
        j["conservation_ok"] = drift / scale < 10.0 * pb.time.newton_tol;
    }

    bool nonneg_datum = true;
    for (double v : traj.states.front().u)
        if (v < 0.0) nonneg_datum = false;
    if (nonneg_datum) {
        double min_u = 0.0;
        for (const State& s : traj.states)
            for (double v : s.u) min_u = std::min(min_u, v);
        j["min_value"] = min_u;
        j["positivity_ok"] = min_u >= -1e-9 * std::max(1.0, kern::max_abs(traj.states.front().u));
    }

    json mono = json::object();
    bool all_mono = true;
    for (double q : {1.0, 2.0, pb.m + 1.0, kInf}) {
        double prev = kInf;
        bool ok = true;
        for (const State& s : traj.states) {
            const double nn = weighted_norm(s.u, g, q);
            if (nn > prev * (1.0 + 1e-9)) ok = false;
            prev = nn;
        }
        mono[std::isinf(q) ? "inf" : io::fmt(q)] = ok;
        all_mono = all_mono && ok;
    }
    j["norms_nonexpansive"] = mono;
    j["norms_ok"] = all_mono;
    return j;
}

namespace {

// Shared machinery of the two unboundedness counterexamples: datum f(x),
// subsolution f(x) * lambda_B(t) with lambda_B = (1 + B^-1 (m-1) t)^(-1/(m-1)).
struct UnboundedSetup {
    PMEProblem pb;
    std::vector<double> f; // datum profile on the grid
    Grid grid;
};

json run_unbounded(const std::string& name, double m, double L, int M, io::OutputDir* out,
                   bool& pass, bool neumann_line) {
    json det;
    const Domain1D dom = neumann_line ? Domain1D(-kInf, kInf) : Domain1D(0.0, kInf);
    auto make_problem = [&](double Lbox) {
        WeightSpec w = neumann_line ? WeightSpec::exponential(-1.0, dom, true)
                                    : WeightSpec::exponential(-1.0, dom, false);
        PMEProblem pb(m, neumann_line ? BC::neumann : BC::dirichlet, w, w, dom);
        pb.truncation = Truncation{neumann_line ? 2.0 * Lbox : Lbox, FarPolicy::zero_flux};
        pb.datum = Datum::named(neumann_line ? "logx2p2" : "log1p");
        pb.time.t_end = 1.0;
        pb.grading = 1.0;
        return pb;
    };

    auto profile = [&](double x) {
        return neumann_line ? std::log(x * x + 2.0) : std::log(x + 1.0);
    };
    auto lambda = [&](double B, double t) {
        return std::pow(1.0 + (m - 1.0) * t / B, -1.0 / (m - 1.0));
    };

    // ---- subsolution constant on the geometric ladder -------------------
    PMEProblem pb = make_problem(L);
    Grid grid = build_grid(pb.nu, pb.mu, pb.box(), M, 1.0, GradeSide::none);
    const int n = grid.size();
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = profile(grid.centers[i]);

    const double gl = (pb.bc == BC::dirichlet) ? grid.cond_left : 0.0;
    const double h = pb.box().length() / M;
    const double res_tol = 12.0 * h; // first-order in the mesh

    // cells hugging the truncation wall carry an O(1/h) scaled defect from
    // the zero-flux closure of the artificial boundary; the ladder checks the
    // physical region only (the wall retains mass, so it only helps the
    // solution side of the comparison)
    auto in_wall_margin = [&](double x) {
        if (neumann_line) return std::fabs(x) > pb.box().right - 2.0;
        return x > pb.box().right - 2.0;
    };

    const std::vector<double> t_samples = {0.0, 0.05, 0.1, 0.2, 0.4, 0.7, 1.0};
    double B_hat = -1.0;
    for (int k = 0; k <= 20 && B_hat < 0.0; ++k) {
        const double B = std::ldexp(1.0, k);
        bool ok = true;
        for (double t : t_samples) {
            const double lam = lambda(B, t);
            const double dlam = -std::pow(lam, m) / B;
            std::vector<double> vm(n);
            for (int i = 0; i < n; ++i)
                vm[i] = std::pow(lam * f[i], m); // f >= 0 here
            std::vector<double> D = flux_div(grid, vm, gl, 0.0);
            for (int i = 0; i < n && ok; ++i) {
                if (in_wall_margin(grid.centers[i])) continue;
                const double resid = grid.mass[i] * dlam * f[i] - D[i];
                if (resid > res_tol * grid.mass[i] * std::max(1.0, f[i])) ok = false;
            }
            if (!ok) break;
        }
        if (ok) B_hat = B;
    }
    det["B_hat"] = B_hat;
    if (B_hat < 0.0)
        throw ScenarioError(name + ": no admissible subsolution constant on the ladder "
                                   "(discretization too coarse)");

    // ---- solver run and domination --------------------------------------
    std::vector<double> outputs = {0.05, 0.1, 0.2, 0.4, 0.7, 1.0};
    Trajectory traj = solve_on_grid(pb, grid, f, outputs);
    det["invariants"] = invariant_suite(traj, pb);

    double worst = 0.0; // max of (v_Bhat - u), positive = violation
    for (const State& s : traj.states) {
        const double lam = lambda(B_hat, s.t);
        for (int i = 0; i < n; ++i) worst = std::max(worst, lam * f[i] - s.u[i]);
    }
    const double cmp_tol = 25.0 * h;
    det["domination_violation"] = worst;
    det["domination_tol"] = cmp_tol;
    const bool dominated = worst <= cmp_tol;

    // ---- growth of the grid max under L doubling -------------------------
    PMEProblem pb2 = make_problem(2.0 * L);
    Trajectory traj2 = solve(pb2, 2 * M, {1.0});
    const double max1 = kern::max_abs(traj.states.back().u);
    const double max2 = kern::max_abs(traj2.states.back().u);
    const double grow = max2 / max1;
    const double pred =
        neumann_line ? profile(2.0 * L) / profile(L)
                     : profile(2.0 * L) / profile(L); // subsolution ratio at the far end
    det["grid_max_L"] = max1;
    det["grid_max_2L"] = max2;
    det["growth"] = grow;
    det["predicted_growth"] = pred;
    const bool grows = (grow - 1.0) >= 0.8 * (pred - 1.0);

    bool symmetric = true;
    if (neumann_line) {
        double asym = 0.0;
        for (const State& s : traj.states)
            for (int i = 0; i < n; ++i)
                asym = std::max(asym, std::fabs(s.u[i] - s.u[n - 1 - i]));
        det["symmetry_defect"] = asym;
        symmetric = asym <= 1e-7 * std::max(1.0, kern::max_abs(traj.states.back().u));

        // truncated Dirichlet and Neumann problems nearly coincide for these
        // weights; record the interior gap
        PMEProblem pbd = make_problem(L);
        pbd.bc = BC::dirichlet;
        pbd.truncation->far = FarPolicy::dirichlet_zero;
        Trajectory trajd = solve_on_grid(pbd, grid, f, outputs);
        double gap = 0.0;
        for (std::size_t k = 0; k < traj.states.size(); ++k)
            for (int i = n / 4; i < 3 * n / 4; ++i)
                gap = std::max(gap,
                               std::fabs(traj.states[k].u[i] - trajd.states[k].u[i]));
        det["bc_agreement_interior_gap"] = gap;
        det["bc_agreement_rel"] = gap / max1;
    }

    pass = dominated && grows && symmetric;

    if (out) {
        out->write_trajectory_csv(name + "/trajectory.csv", traj);
        out->write_summary_csv(name + "/summary.csv", summarize(traj, m, m + 1.0));
    }
    return det;
}

} // namespace

ScenarioResult dirichlet_unbounded(double m, double L, int M, io::OutputDir* out) {
    if (L < 20.0) throw DomainError("dirichlet_unbounded: L must be >= 20");
    ScenarioResult r;
    r.name = "dirichlet_unbounded";
    r.details = run_unbounded(r.name, m, L, M, out, r.pass, false);
    if (out) out->write_json(r.name + "/verdict.json", json{{"pass", r.pass}, {"details", r.details}});
    return r;
}

ScenarioResult neumann_unbounded(double m, double L, int M, io::OutputDir* out) {
    if (L < 20.0) throw DomainError("neumann_unbounded: L must be >= 20");
    ScenarioResult r;
    r.name = "neumann_unbounded";
    r.details = run_unbounded(r.name, m, L, M, out, r.pass, true);
    if (out) out->write_json(r.name + "/verdict.json", json{{"pass", r.pass}, {"details", r.details}});
    return r;
}

ScenarioResult nonuniform_convergence(double m, double beta, double r0, int M,
                                      io::OutputDir* out) {
    if (!(beta > 1.0)) throw DomainError("nonuniform_convergence: beta must exceed 1");
    if (!(r0 > 0.0 && r0 < 0.5)) throw DomainError("nonuniform_convergence: r0 in (0, 0.5)");
    ScenarioResult res;
    res.name = "nonuniform_convergence";
    json det;

    const bool steep = m >= 2.0;
    const double C = steep ? m * (beta + 2.0 * (m - 1.0)) : m * (beta + m - 1.0);
    det["C_m_beta"] = C;

    auto rt = [&](double t) { return r0 * std::exp(-C * t); };
    auto uhat = [&](double x, double t) {
        const double r = rt(t);
        if (steep) {
            if (x <= 0.5 * r) return 0.0;
            if (x <= r) return 2.0 * x / r - 1.0;
            return 1.0;
        }
        return std::min(x / r, 1.0);
    };

    const Domain1D dom(0.0, 1.0);
    PMEProblem pb(m, BC::neumann, WeightSpec::power(beta - 2.0, dom), WeightSpec::power(beta, dom),
                  dom);
    pb.grading = 2.0;
    pb.grade_side = GradeSide::left;
    pb.time.t_end = 0.6;

    Grid grid = build_grid(pb.nu, pb.mu, dom, M, pb.grading, pb.grade_side);
    const int n = grid.size();
    const double t_end = pb.time.t_end;
    if (grid.cell_width(0) > rt(t_end) / 8.0)
        throw ScenarioError("grid too coarse near 0 to resolve the shrinking support");

    std::vector<double> u0(n);
    for (int i = 0; i < n; ++i) u0[i] = uhat(grid.centers[i], 0.0);

    std::vector<double> outputs = lin_spaced(0.05, t_end, 12);
    Trajectory traj = solve_on_grid(pb, grid, u0, outputs);
    det["invariants"] = invariant_suite(traj, pb);

    // supersolution residual, weak (cell-integrated) form, away from t jumps
    double res_min = 0.0;
    for (double t : {0.1, 0.3, 0.5}) {
        const double r = rt(t);
        std::vector<double> um(n), ut(n);
        for (int i = 0; i < n; ++i) {
            const double x = grid.centers[i];
            um[i] = std::pow(uhat(x, t), m);
            if (steep)
                ut[i] = (x > 0.5 * r && x <= r) ? 2.0 * C * x / r : 0.0;
            else
                ut[i] = (x < r) ? C * x / r : 0.0;
        }
        std::vector<double> D = flux_div(grid, um, 0.0, 0.0);
        for (int i = 0; i < n; ++i) {
            const double scale = grid.mass[i] * std::max(1.0, 2.0 * C);
            res_min = std::min(res_min, (grid.mass[i] * ut[i] - D[i]) / scale);
        }
    }
    det["supersolution_residual_min_scaled"] = res_min;
    const double res_tol = 40.0 / M;
    const bool supersol_ok = res_min >= -res_tol;

    // (a) domination, (b) pinned zero region with positive mean,
    // (c) monotone L2 convergence to the mean
    double viol = 0.0, leak = 0.0;
    const double ubar = mean_value(u0, grid);
    bool mean_pos = ubar > 0.0;
    std::vector<double> l2err;
    for (const State& s : traj.states) {
        const double r = rt(s.t);
        for (int i = 0; i < n; ++i) {
            const double x = grid.centers[i];
            viol = std::max(viol, s.u[i] - uhat(x, s.t));
            if (steep && x < 0.45 * r) leak = std::max(leak, std::fabs(s.u[i]));
        }
        std::vector<double> d(s.u);
        for (double& v : d) v -= ubar;
        l2err.push_back(weighted_norm(d, grid, 2.0));
    }
    bool l2_monotone = true;
    for (std::size_t k = 2; k < l2err.size(); ++k)
        if (l2err[k] > l2err[k - 1] * (1.0 + 1e-9)) l2_monotone = false;

    det["domination_violation"] = viol;
    det["zero_region_leak"] = leak;
    det["mean"] = ubar;
    det["l2_to_mean"] = l2err;
    const double dom_tol = 0.05;
    const double leak_tol = 5e-3;
    res.pass = supersol_ok && viol <= dom_tol && (!steep || leak <= leak_tol) && mean_pos &&
               l2_monotone;
    det["domination_tol"] = dom_tol;

    if (out) {
        out->write_trajectory_csv(res.name + "/trajectory.csv", traj);
        out->write_summary_csv(res.name + "/summary.csv", summarize(traj, m, m + 1.0));
        out->write_json(res.name + "/verdict.json", json{{"pass", res.pass}, {"details", det}});
    }
    res.details = det;
    return res;
}

ScenarioResult ar81_sharp_rate(double m, int M, io::OutputDir* out) {
    ScenarioResult res;
    res.name = "ar81_sharp_rate";
    json det;

    const Domain1D dom(0.0, 1.0);
    auto make_problem = [&](double scale) {
        PMEProblem pb(m, BC::neumann, WeightSpec::power(0.0, dom), WeightSpec::power(0.0, dom),
                      dom);
        pb.datum = Datum::named("cospi", scale);
        pb.time.t_end = 100.0;
        return pb;
    };
    const std::vector<double> outputs = log_spaced(1e-3, 100.0, 64);

    const double target = -1.0 / (m - 1.0);
    json fits = json::object();
    double exp1 = 0.0, exp1_scaled = 0.0;
    bool ok = true;
    for (double scale : {1.0, 10.0}) {
        PMEProblem pb = make_problem(scale);
        Trajectory traj = solve(pb, M, outputs);
        if (scale == 1.0) det["invariants"] = invariant_suite(traj, pb);
        std::vector<double> ts, n2, ninf;
        for (const State& s : traj.states) {
            if (s.t <= 0.0) continue;
            ts.push_back(s.t);
            n2.push_back(weighted_norm(s.u, traj.grid, 2.0));
            ninf.push_back(weighted_norm(s.u, traj.grid, kInf));
        }
        RateFit f2 = fit_power_decay(ts, n2, 1.0, 50.0);
        RateFit finf = fit_power_decay(ts, ninf, 1.0, 50.0);
        fits[io::fmt(scale)] = {{"norm2", f2.to_json()}, {"normInf", finf.to_json()}};
        if (scale == 1.0) {
            exp1 = f2.exponent;
            ok = ok && std::fabs(f2.exponent - target) <= 0.1 * std::fabs(target);
            ok = ok && std::fabs(finf.exponent - target) <= 0.1 * std::fabs(target);
        } else {
            exp1_scaled = f2.exponent;
        }
    }
    det["fits"] = fits;
    det["target_exponent"] = target;
    const double shift = std::fabs(exp1_scaled - exp1) / std::fabs(target);
    det["datum_scaling_shift"] = shift;
    ok = ok && shift < 0.05;
    res.pass = ok;
    res.details = det;
    if (out) out->write_json(res.name + "/verdict.json", json{{"pass", res.pass}, {"details", det}});
    return res;
}

ScenarioResult neumann_mean_convergence(double m, int M, io::OutputDir* out) {
    ScenarioResult res;
    res.name = "neumann_mean_convergence";
    json det;

    const Domain1D dom(0.0, 1.0);
    json sweeps = json::array();
    std::vector<double> rates, local_rates;
    bool ok = true;
    for (double ubar : {0.5, 1.0, 2.0}) {
        PMEProblem pb(m, BC::neumann, WeightSpec::power(0.0, dom), WeightSpec::power(0.0, dom),
                      dom);
        pb.datum = Datum::named("cospi", 0.5, ubar);
        pb.time.t_end = 1.2;
        std::vector<double> outputs = merge_times(lin_spaced(0.0125, 1.2, 96), {});
        Trajectory traj = solve(pb, M, outputs);

        std::vector<double> ts, y, yloc;
        const Grid& g = traj.grid;
        for (const State& s : traj.states) {
            if (s.t <= 0.0) continue;
            std::vector<double> d(s.u);
            for (double& v : d) v -= ubar;
            ts.push_back(s.t);
            y.push_back(weighted_norm(d, g, 2.0));
            double mx = 0.0;
            for (int i = g.size() / 5; i < 4 * g.size() / 5; ++i)
                mx = std::max(mx, std::fabs(d[i]));
            yloc.push_back(mx);
        }
        const double y0 = 0.5 / std::sqrt(2.0) * 1.0; // |0.5 cos(pi x)|_2
        double lo = ts.front(), hi = ts.back();
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (y[i] > 0.15 * y0) lo = ts[i];
            if (y[i] > 3e-5 * y0) hi = ts[i];
        }
        ExpFit f = fit_exponential_decay(ts, y, lo, hi);
        ExpFit floc = fit_exponential_decay(ts, yloc, lo, hi);
        json entry;
        entry["ubar"] = ubar;
        entry["fit_l2"] = f.to_json();
        entry["fit_local"] = floc.to_json();
        sweeps.push_back(entry);
        rates.push_back(f.rate);
        local_rates.push_back(floc.rate);
        const double rel_res = f.residual; // log-space RMS
        ok = ok && f.rate > 0.0 && floc.rate > 0.0 && rel_res < 0.05;

        if (out)
            out->write_summary_csv(res.name + "/summary_ubar_" + io::fmt(ubar) + ".csv",
                                   summarize(traj, m, m + 1.0));
    }
    for (std::size_t i = 1; i < rates.size(); ++i)
        ok = ok && rates[i] >= rates[i - 1] * 0.98;
    det["sweeps"] = sweeps;
    res.pass = ok;
    res.details = det;
    if (out) out->write_json(res.name + "/verdict.json", json{{"pass", res.pass}, {"details", det}});
    return res;
}

ScenarioResult run_scenario(const std::string& name, const json& overrides, io::OutputDir* out) {
    const double m = overrides.value("m", 2.0);
    const double L = overrides.value("L", 20.0);
    const int M = overrides.value("cells", 400);
    if (name == "dirichlet_unbounded") return dirichlet_unbounded(m, L, M, out);
    if (name == "neumann_unbounded") return neumann_unbounded(m, L, M, out);
    if (name == "nonuniform_convergence")
        return nonuniform_convergence(m, overrides.value("beta", 2.0), overrides.value("r0", 0.1),
                                      M, out);
    if (name == "ar81") return ar81_sharp_rate(m, overrides.value("cells", 200), out);
    if (name == "ar81_sharp_rate") return ar81_sharp_rate(m, overrides.value("cells", 200), out);
    if (name == "neumann_mean_convergence")
        return neumann_mean_convergence(m, overrides.value("cells", 200), out);
    throw ConfigError("unknown scenario '" + name + "'");
}

} // namespace wpme
