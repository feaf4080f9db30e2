#include "wpme/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wpme/diagnostics.hpp"
#include "wpme/io.hpp"
#include "wpme/poincare.hpp"
#include "wpme/scenarios.hpp"
#include "wpme/solver.hpp"

namespace wpme {

using nlohmann::json;

namespace {

// ---- strict config validation ------------------------------------------

void check_keys(const json& j, const std::string& ctx, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(ctx + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(ctx + ": unknown key '" + it.key() + "'");
}

void check_weight(const json& j, const std::string& ctx) {
    static const std::map<std::string, std::set<std::string>> fields = {
        {"power", {"family", "domain", "beta", "pivot"}},
        {"logpower", {"family", "domain", "exponent", "base_exponent"}},
        {"exp", {"family", "domain", "alpha", "abs"}},
        {"gaussian", {"family", "domain", "d"}},
        {"distpower", {"family", "domain", "beta"}},
        {"profile", {"family", "domain", "r", "psi", "dim"}},
        {"radialpower", {"family", "domain", "beta", "dim", "shifted"}},
    };
    if (!j.is_object() || !j.contains("family"))
        throw ConfigError(ctx + ": weight spec needs a 'family'");
    const std::string fam = j.at("family").get<std::string>();
    auto it = fields.find(fam);
    if (it == fields.end()) throw ConfigError(ctx + ": unknown weight family '" + fam + "'");
    check_keys(j, ctx, it->second);
    if (j.contains("domain")) check_keys(j.at("domain"), ctx + ".domain", {"left", "right", "name"});
}

void check_datum(const json& j, const std::string& ctx) {
    check_keys(j, ctx, {"kind", "scale", "offset", "t0", "C", "rate", "x", "y"});
}

json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return j;
}

std::vector<double> parse_outputs(const json& j) {
    if (j.is_array()) return j.get<std::vector<double>>();
    check_keys(j, "outputs", {"kind", "lo", "hi", "n"});
    const std::string kind = j.value("kind", std::string("log"));
    const double lo = j.at("lo").get<double>(), hi = j.at("hi").get<double>();
    const int n = j.at("n").get<int>();
    if (n < 2 || !(hi > lo)) throw ConfigError("outputs: need n >= 2 and hi > lo");
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i)
        t[i] = (kind == "log") ? lo * std::pow(hi / lo, double(i) / (n - 1))
                               : lo + (hi - lo) * i / (n - 1);
    if (kind != "log" && kind != "linear") throw ConfigError("outputs.kind must be log or linear");
    return t;
}

PMEProblem problem_from_config(const json& cfg) {
    check_weight(cfg.at("nu"), "nu");
    check_weight(cfg.at("mu"), "mu");
    Domain1D dom = domain_from_json(cfg.at("domain"));
    json nu_j = cfg.at("nu"), mu_j = cfg.at("mu");
    if (!nu_j.contains("domain")) nu_j["domain"] = cfg.at("domain");
    if (!mu_j.contains("domain")) mu_j["domain"] = cfg.at("domain");
    WeightSpec nu = WeightSpec::from_json(nu_j);
    WeightSpec mu = WeightSpec::from_json(mu_j);

    const std::string bc = cfg.value("bc", std::string("neumann"));
    if (bc != "neumann" && bc != "dirichlet") throw ConfigError("bc must be neumann or dirichlet");
    PMEProblem pb(cfg.at("m").get<double>(), bc == "neumann" ? BC::neumann : BC::dirichlet,
                  std::move(nu), std::move(mu), dom);

    if (cfg.contains("truncation")) {
        check_keys(cfg.at("truncation"), "truncation", {"length", "far"});
        Truncation tr;
        tr.length = cfg.at("truncation").at("length").get<double>();
        const std::string far = cfg.at("truncation").value("far", std::string("zero_flux"));
        if (far == "zero_flux")
            tr.far = FarPolicy::zero_flux;
        else if (far == "dirichlet_zero")
            tr.far = FarPolicy::dirichlet_zero;
        else
            throw ConfigError("truncation.far must be zero_flux or dirichlet_zero");
        pb.truncation = tr;
    }
    if (cfg.contains("datum")) {
        check_datum(cfg.at("datum"), "datum");
        pb.datum = Datum::from_json(cfg.at("datum"));
    }
    pb.reg.eps = cfg.value("eps", -1.0);
    pb.reg.continuation = cfg.value("continuation", false);
    pb.time.t_end = cfg.value("t_end", 1.0);
    pb.time.dt_init = cfg.value("dt_init", -1.0);
    pb.time.dt_max = cfg.value("dt_max", -1.0);
    pb.time.newton_tol = cfg.value("newton_tol", 1e-10);
    pb.grading = cfg.value("gamma", 1.0);
    const std::string side = cfg.value("grade_side", std::string("auto"));
    if (side == "auto") pb.grade_side = GradeSide::automatic;
    else if (side == "none") pb.grade_side = GradeSide::none;
    else if (side == "left") pb.grade_side = GradeSide::left;
    else if (side == "right") pb.grade_side = GradeSide::right;
    else if (side == "both") pb.grade_side = GradeSide::both;
    else throw ConfigError("grade_side must be auto|none|left|right|both");
    return pb;
}

const std::set<std::string> kSolveKeys = {
    "command", "m",    "bc",         "nu",        "mu",      "domain", "truncation",
    "datum",   "cells", "gamma",     "grade_side", "eps",    "continuation", "t_end",
    "dt_init", "dt_max", "newton_tol", "outputs",  "norm_q", "bounds", "label", "seed"};

BoundTag tag_from_name(const std::string& s) {
    for (BoundTag t : {BoundTag::dirichlet_smoothing, BoundTag::dirichlet_absolute,
                       BoundTag::neumann_smoothing_exp, BoundTag::neumann_smoothing_plus,
                       BoundTag::zero_mean_absolute, BoundTag::zero_mean_smoothing,
                       BoundTag::mean_absolute, BoundTag::mean_intermediate,
                       BoundTag::mean_exponential, BoundTag::local_uniform})
        if (bound_tag_name(t) == s) return t;
    throw ConfigError("unknown bound tag '" + s + "'");
}

// ---- subcommands ---------------------------------------------------------

int cmd_audit(const json& cfg, const std::string& outdir) {
    check_keys(cfg, "audit config",
               {"command", "label", "catalog", "nu", "mu", "domain", "kind", "discrete", "grids",
                "truncations", "gamma", "seed"});

    AuditRequest req = [&]() {
        if (cfg.contains("catalog")) {
            const std::string name = cfg.at("catalog").get<std::string>();
            for (const CatalogEntry& e : weight_catalog())
                if (e.name == name) {
                    AuditRequest r{e.nu, e.mu, e.nu.domain()};
                    r.truncations = e.truncations;
                    r.grids = e.grids;
                    r.gamma = e.gamma;
                    r.label = e.name;
                    return r;
                }
            throw ConfigError("unknown catalog entry '" + name + "'");
        }
        if (!cfg.contains("nu") || !cfg.contains("mu") || !cfg.contains("domain"))
            throw ConfigError("audit: need 'catalog' or 'nu'+'mu'+'domain'");
        check_weight(cfg.at("nu"), "nu");
        check_weight(cfg.at("mu"), "mu");
        Domain1D dom = domain_from_json(cfg.at("domain"));
        json nu_j = cfg.at("nu"), mu_j = cfg.at("mu");
        if (!nu_j.contains("domain")) nu_j["domain"] = cfg.at("domain");
        if (!mu_j.contains("domain")) mu_j["domain"] = cfg.at("domain");
        AuditRequest r{WeightSpec::from_json(nu_j), WeightSpec::from_json(mu_j), dom};
        return r;
    }();

    if (cfg.contains("label")) req.label = cfg.at("label").get<std::string>();
    const std::string kind = cfg.value("kind", std::string("both"));
    req.want_dirichlet = kind == "both" || kind == "dirichlet";
    req.want_zero_mean = kind == "both" || kind == "zero_mean";
    if (kind != "both" && kind != "dirichlet" && kind != "zero_mean")
        throw ConfigError("kind must be dirichlet, zero_mean or both");
    req.want_discrete = cfg.value("discrete", true);
    if (cfg.contains("grids")) req.grids = cfg.at("grids").get<std::vector<int>>();
    if (cfg.contains("truncations"))
        req.truncations = cfg.at("truncations").get<std::vector<double>>();
    req.gamma = cfg.value("gamma", req.gamma);
    if (!req.dom.bounded() && req.truncations.empty()) req.truncations = {40.0};

    PoincareReport rep = audit(req);

    io::OutputDir out(outdir);
    out.write_json("report.json", rep.to_json());
    out.finalize();

    bool inconclusive = false;
    if (req.want_dirichlet && rep.dirichlet == Verdict::inconclusive) inconclusive = true;
    if (req.want_zero_mean && rep.zero_mean == Verdict::inconclusive) inconclusive = true;
    std::cout << "audit " << (req.label.empty() ? "(anonymous)" : req.label) << ": dirichlet="
              << verdict_name(rep.dirichlet) << " zero_mean=" << verdict_name(rep.zero_mean)
              << "\n";
    return inconclusive ? 2 : 0;
}

int cmd_solve(const json& cfg, const std::string& outdir) {
    check_keys(cfg, "solve config", kSolveKeys);
    PMEProblem pb = problem_from_config(cfg);
    const int cells = cfg.value("cells", 400);
    std::vector<double> outputs =
        cfg.contains("outputs") ? parse_outputs(cfg.at("outputs"))
                                : parse_outputs(json{{"kind", "log"},
                                                     {"lo", pb.time.t_end / 256.0},
                                                     {"hi", pb.time.t_end},
                                                     {"n", 17}});

    Trajectory traj = solve(pb, cells, outputs);

    io::OutputDir out(outdir);
    out.write_trajectory_csv("trajectory.csv", traj);
    const double q = cfg.value("norm_q", pb.m + 1.0);
    out.write_summary_csv("summary.csv", summarize(traj, pb.m, q));

    if (cfg.contains("bounds")) {
        json reports = json::array();
        std::vector<std::vector<double>> rows;
        for (const json& b : cfg.at("bounds")) {
            check_keys(b, "bounds entry",
                       {"tag", "q0", "rho", "epsilon", "M_P", "window_lo", "window_hi"});
            BoundParams p;
            p.m = pb.m;
            p.q0 = b.value("q0", 1.0);
            p.rho = b.value("rho", 2.0);
            p.epsilon = b.value("epsilon", 0.5);
            if (b.contains("M_P")) p.M_P = b.at("M_P").get<double>();
            p.window_lo = b.value("window_lo", -1.0);
            p.window_hi = b.value("window_hi", -1.0);
            BoundReport rep = check_bound(traj, tag_from_name(b.at("tag").get<std::string>()), p);
            reports.push_back(rep.to_json());
            rows.push_back({double(rows.size()), rep.fitted_constant, rep.window_lo,
                            rep.window_hi, rep.residual});
        }
        out.write_json("bounds.json", reports);
    }
    if (!traj.continuation.empty()) {
        json cont = json::array();
        for (const auto& c : traj.continuation)
            cont.push_back({{"eps_from", c.eps_from},
                            {"eps_to", c.eps_to},
                            {"max_abs_diff", c.max_abs_diff},
                            {"max_l1nu_diff", c.max_l1nu_diff}});
        out.write_json("continuation.json", cont);
    }
    out.finalize();
    std::cout << "solve: " << traj.total_steps << " steps, " << traj.states.size()
              << " outputs -> " << out.root().string() << "\n";
    return 0;
}

int cmd_scenario(const std::string& name, const json& overrides, const std::string& outdir) {
    io::OutputDir out(outdir);
    ScenarioResult res = run_scenario(name, overrides, &out);
    if (!out.files().empty())
        out.write_json(res.name + "/verdict_root.json",
                       json{{"pass", res.pass}, {"name", res.name}});
    out.finalize();
    std::cout << "scenario " << res.name << ": " << (res.pass ? "pass" : "FAIL") << "\n";
    return res.pass ? 0 : 1;
}

int cmd_sweep(const json& cfg, const std::string& outdir, int jobs) {
    check_keys(cfg, "sweep config", {"command", "base", "sweep", "jobs", "seed"});
    const json& base = cfg.at("base");
    check_keys(base, "sweep base", kSolveKeys);
    const json& sw = cfg.at("sweep");
    if (!sw.is_object() || sw.empty()) throw ConfigError("sweep: need a nonempty 'sweep' object");
    jobs = cfg.value("jobs", jobs);

    std::vector<std::string> keys;
    std::vector<std::vector<json>> values;
    std::size_t count = 1;
    for (auto it = sw.begin(); it != sw.end(); ++it) {
        if (!it.value().is_array() || it.value().empty())
            throw ConfigError("sweep values for '" + it.key() + "' must be a nonempty array");
        keys.push_back(it.key());
        values.push_back(std::vector<json>(it.value().begin(), it.value().end()));
        count *= values.back().size();
    }

    std::vector<json> run_cfgs(count);
    for (std::size_t r = 0; r < count; ++r) {
        json c = base;
        std::size_t rem = r;
        for (std::size_t k = 0; k < keys.size(); ++k) {
            const auto& vals = values[k];
            c[keys[k]] = vals[rem % vals.size()];
            rem /= vals.size();
        }
        run_cfgs[r] = c;
    }

    std::vector<int> status(count, 1);
    std::vector<double> final_norm2(count, 0.0);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
    for (std::ptrdiff_t r = 0; r < std::ptrdiff_t(count); ++r) {
        char sub[32];
        std::snprintf(sub, sizeof(sub), "run_%03d", int(r));
        try {
            const json& c = run_cfgs[r];
            PMEProblem pb = problem_from_config(c);
            const int cells = c.value("cells", 400);
            std::vector<double> outputs =
                c.contains("outputs") ? parse_outputs(c.at("outputs"))
                                      : parse_outputs(json{{"kind", "log"},
                                                           {"lo", pb.time.t_end / 256.0},
                                                           {"hi", pb.time.t_end},
                                                           {"n", 17}});
            Trajectory traj = solve(pb, cells, outputs);
            io::OutputDir rd(std::filesystem::path(outdir) / sub);
            rd.write_trajectory_csv("trajectory.csv", traj);
            rd.write_summary_csv("summary.csv", summarize(traj, pb.m, c.value("norm_q", pb.m + 1.0)));
            rd.finalize();
            final_norm2[r] = weighted_norm(traj.states.back().u, traj.grid, 2.0);
            status[r] = 0;
        } catch (const std::exception& e) {
#pragma omp critical
            std::cerr << sub << ": " << e.what() << "\n";
        }
    }

    io::OutputDir out(outdir);
    std::string idx = "run";
    for (const auto& k : keys) idx += "," + k;
    idx += ",status,final_norm2\n";
    for (std::size_t r = 0; r < count; ++r) {
        char sub[32];
        std::snprintf(sub, sizeof(sub), "run_%03d", int(r));
        idx += sub;
        std::size_t rem = r;
        for (std::size_t k = 0; k < keys.size(); ++k) {
            const auto& vals = values[k];
            idx += "," + vals[rem % vals.size()].dump();
            rem /= vals.size();
        }
        idx += "," + std::to_string(status[r]) + "," + io::fmt(final_norm2[r]) + "\n";
    }
    out.write_text("index.csv", idx);
    out.finalize();

    for (int s : status)
        if (s != 0) return 1;
    std::cout << "sweep: " << count << " runs -> " << outdir << "\n";
    return 0;
}

int cmd_fit(const std::string& series, const std::string& form, double lo, double hi,
            const std::string& outdir) {
    std::ifstream f(series);
    if (!f) throw ConfigError("cannot open series file '" + series + "'");
    std::string line;
    std::getline(f, line); // header
    std::vector<double> t, y;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        t.push_back(std::strtod(a.c_str(), nullptr));
        y.push_back(std::strtod(b.c_str(), nullptr));
    }
    if (t.empty()) throw ConfigError("series file has no samples");
    if (lo < 0.0) lo = t.front();
    if (hi < 0.0) hi = t.back();

    json out;
    if (form == "power")
        out = fit_power_decay(t, y, lo, hi).to_json();
    else if (form == "exp")
        out = fit_exponential_decay(t, y, lo, hi).to_json();
    else
        throw ConfigError("fit form must be power or exp");
    std::cout << out.dump(2) << "\n";
    if (!outdir.empty()) {
        io::OutputDir od(outdir);
        od.write_json("fit.json", out);
        od.finalize();
    }
    return 0;
}

} // namespace

int run_cli(std::vector<std::string> args) {
    CLI::App app{"weighted porous-media solver and Poincare auditor"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", series_path, fit_form = "power", scenario_name;
    int jobs = 1;
    unsigned long long seed = 0;
    double fit_lo = -1.0, fit_hi = -1.0;
    json overrides = json::object();

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--jobs", jobs, "parallel runs");
        sub->add_option("--seed", seed, "seed recorded with the outputs");
    };

    CLI::App* audit_cmd = app.add_subcommand("audit", "decide Poincare inequalities");
    add_common(audit_cmd);
    CLI::App* solve_cmd = app.add_subcommand("solve", "run the finite-volume solver");
    add_common(solve_cmd);
    CLI::App* scen_cmd = app.add_subcommand("scenario", "run a named reproduction");
    add_common(scen_cmd);
    scen_cmd->add_option("name", scenario_name, "scenario name")->required();
    double ov_m = -1.0, ov_beta = -1.0, ov_L = -1.0, ov_r0 = -1.0;
    int ov_cells = -1;
    scen_cmd->add_option("--m", ov_m, "exponent m");
    scen_cmd->add_option("--beta", ov_beta, "weight exponent beta");
    scen_cmd->add_option("--L", ov_L, "truncation length");
    scen_cmd->add_option("--cells", ov_cells, "grid cells");
    scen_cmd->add_option("--r0", ov_r0, "initial support radius");
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "cross-product of solves");
    add_common(sweep_cmd);
    CLI::App* fit_cmd = app.add_subcommand("fit", "fit a decay form to a t,y series");
    add_common(fit_cmd);
    fit_cmd->add_option("--series", series_path, "CSV file with header t,y")->required();
    fit_cmd->add_option("--form", fit_form, "power or exp");
    fit_cmd->add_option("--lo", fit_lo, "window start");
    fit_cmd->add_option("--hi", fit_hi, "window end");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (audit_cmd->parsed()) {
            if (config_path.empty()) throw ConfigError("audit needs --config");
            return cmd_audit(load_config(config_path), out_dir);
        }
        if (solve_cmd->parsed()) {
            if (config_path.empty()) throw ConfigError("solve needs --config");
            return cmd_solve(load_config(config_path), out_dir);
        }
        if (scen_cmd->parsed()) {
            if (!config_path.empty()) overrides = load_config(config_path);
            if (ov_m > 0.0) overrides["m"] = ov_m;
            if (ov_beta > 0.0) overrides["beta"] = ov_beta;
            if (ov_L > 0.0) overrides["L"] = ov_L;
            if (ov_cells > 0) overrides["cells"] = ov_cells;
            if (ov_r0 > 0.0) overrides["r0"] = ov_r0;
            return cmd_scenario(scenario_name, overrides, out_dir);
        }
        if (sweep_cmd->parsed()) {
            if (config_path.empty()) throw ConfigError("sweep needs --config");
            return cmd_sweep(load_config(config_path), out_dir, jobs);
        }
        if (fit_cmd->parsed()) return cmd_fit(series_path, fit_form, fit_lo, fit_hi, "");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace wpme
