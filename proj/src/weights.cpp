#include "wpme/weights.hpp"

#include <cmath>

namespace wpme {

using nlohmann::json;

WeightSpec WeightSpec::power(double beta, Domain1D d, bool pivot_left) {
    WeightSpec w(Family::power, std::move(d));
    w.p1_ = beta;
    w.flag_ = pivot_left;
    w.validate();
    return w;
}

WeightSpec WeightSpec::logpower(double exponent, double base_exponent, Domain1D d) {
    WeightSpec w(Family::logpower, std::move(d));
    w.p1_ = exponent;
    w.p2_ = base_exponent;
    if (w.dom_.left < 0.0 || w.dom_.right > 1.0)
        throw DomainError("logpower weight needs a domain inside (0,1)");
    w.validate();
    return w;
}

WeightSpec WeightSpec::exponential(double alpha, Domain1D d, bool abs_arg) {
    WeightSpec w(Family::exp, std::move(d));
    w.p1_ = alpha;
    w.flag_ = abs_arg;
    w.validate();
    return w;
}

WeightSpec WeightSpec::gaussian(double dcoef, Domain1D d) {
    if (!(dcoef > 0.0)) throw DomainError("gaussian weight needs d > 0");
    WeightSpec w(Family::gaussian, std::move(d));
    w.p1_ = dcoef;
    w.validate();
    return w;
}

WeightSpec WeightSpec::distpower(double beta, Domain1D d) {
    if (!d.bounded()) throw DomainError("distance-power weight needs a bounded interval");
    WeightSpec w(Family::distpower, std::move(d));
    w.p1_ = beta;
    w.validate();
    return w;
}

WeightSpec WeightSpec::profile(std::vector<double> r, std::vector<double> psi, int dim, Domain1D d) {
    if (dim < 2) throw DomainError("profile weight needs dimension >= 2");
    // tabulated profiles may carry zeros (a.e.-positivity is only spot
    // checked); admissibility of such tables is what check_Bp decides
    bool any_positive = false;
    for (double v : psi) {
        if (v < 0.0) throw DomainError("profile psi must be nonnegative");
        any_positive = any_positive || v > 0.0;
    }
    if (!any_positive) throw DomainError("profile psi vanishes identically");
    WeightSpec w(Family::profile, std::move(d));
    w.dim_ = dim;
    w.table_ = Pchip(r, psi);
    w.tab_r_ = std::move(r);
    w.tab_psi_ = std::move(psi);
    w.validate();
    return w;
}

WeightSpec WeightSpec::radialpower(double beta, int dim, Domain1D d, bool shifted) {
    if (dim < 1) throw DomainError("radialpower weight needs dimension >= 1");
    if (d.left < 0.0) throw DomainError("radialpower weight lives on r >= 0");
    WeightSpec w(Family::radialpower, std::move(d));
    w.p1_ = beta;
    w.dim_ = dim;
    w.flag_ = shifted;
    w.validate();
    return w;
}

void WeightSpec::validate() const {
    // positivity at a handful of interior points; cheap guard against
    // parameters that break the rho > 0 contract
    const double a = dom_.left_finite() ? dom_.left : -8.0;
    const double b = dom_.right_finite() ? dom_.right : 8.0;
    for (int k = 1; k <= 7; ++k) {
        const double x = a + (b - a) * k / 8.0;
        if (!dom_.contains(x)) continue;
        const double v = eval_unchecked(x);
        if (!(v > 0.0) || !std::isfinite(v))
            throw DomainError("weight not strictly positive at x = " + std::to_string(x));
    }
}

double WeightSpec::eval_unchecked(double x) const {
    switch (family_) {
        case Family::power: {
            const double arg = flag_ ? (x - dom_.left) : std::fabs(x);
            return std::pow(arg, p1_);
        }
        case Family::logpower:
            return std::pow(x, p2_) * std::pow(std::fabs(std::log(x)), p1_);
        case Family::exp:
            return std::exp(p1_ * (flag_ ? std::fabs(x) : x));
        case Family::gaussian:
            return std::exp(-p1_ * x * x);
        case Family::distpower: {
            const double delta = std::min(x - dom_.left, dom_.right - x);
            return std::pow(delta, p1_);
        }
        case Family::profile:
            return std::pow(table_(x), dim_ - 1);
        case Family::radialpower: {
            const double sphere = (dim_ > 1) ? std::pow(x, dim_ - 1) : 1.0;
            const double radial = flag_ ? std::pow(1.0 + x * x, 0.5 * p1_) : std::pow(x, p1_);
            return sphere * radial;
        }
    }
    return 0.0;
}

double WeightSpec::operator()(double x) const {
    if (!dom_.contains(x))
        throw DomainError("weight evaluated outside its open domain at x = " + std::to_string(x));
    return eval_unchecked(x);
}

std::string WeightSpec::family_name() const {
    switch (family_) {
        case Family::power: return "power";
        case Family::logpower: return "logpower";
        case Family::exp: return "exp";
        case Family::gaussian: return "gaussian";
        case Family::distpower: return "distpower";
        case Family::profile: return "profile";
        case Family::radialpower: return "radialpower";
    }
    return "?";
}

namespace {
json domain_to_json(const Domain1D& d) {
    json j;
    j["left"] = d.left_finite() ? json(d.left) : json("-inf");
    j["right"] = d.right_finite() ? json(d.right) : json("inf");
    if (!d.name.empty()) j["name"] = d.name;
    return j;
}

double endpoint_from_json(const json& v, bool left) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
        throw ConfigError("bad domain endpoint '" + s + "'");
    }
    if (!v.is_number()) throw ConfigError(std::string("domain ") + (left ? "left" : "right") + " must be a number or +/-inf");
    return v.get<double>();
}
} // namespace

Domain1D domain_from_json(const json& j) {
    if (!j.is_object() || !j.contains("left") || !j.contains("right"))
        throw ConfigError("domain needs 'left' and 'right'");
    Domain1D d(endpoint_from_json(j.at("left"), true), endpoint_from_json(j.at("right"), false),
               j.value("name", std::string()));
    return d;
}

json WeightSpec::to_json() const {
    json j;
    j["family"] = family_name();
    j["domain"] = domain_to_json(dom_);
    switch (family_) {
        case Family::power:
            j["beta"] = p1_;
            j["pivot"] = flag_ ? "left" : "origin";
            break;
        case Family::logpower:
            j["exponent"] = p1_;
            j["base_exponent"] = p2_;
            break;
        case Family::exp:
            j["alpha"] = p1_;
            j["abs"] = flag_;
            break;
        case Family::gaussian:
            j["d"] = p1_;
            break;
        case Family::distpower:
            j["beta"] = p1_;
            break;
        case Family::profile:
            j["r"] = tab_r_;
            j["psi"] = tab_psi_;
            j["dim"] = dim_;
            break;
        case Family::radialpower:
            j["beta"] = p1_;
            j["dim"] = dim_;
            j["shifted"] = flag_;
            break;
    }
    return j;
}

WeightSpec WeightSpec::from_json(const json& j) {
    if (!j.is_object() || !j.contains("family"))
        throw ConfigError("weight spec needs a 'family'");
    const std::string fam = j.at("family").get<std::string>();
    Domain1D d = j.contains("domain") ? domain_from_json(j.at("domain")) : Domain1D(0.0, 1.0);
    if (fam == "power")
        return power(j.at("beta").get<double>(), d, j.value("pivot", std::string("origin")) == "left");
    if (fam == "logpower")
        return logpower(j.at("exponent").get<double>(), j.at("base_exponent").get<double>(), d);
    if (fam == "exp")
        return exponential(j.at("alpha").get<double>(), d, j.value("abs", false));
    if (fam == "gaussian")
        return gaussian(j.at("d").get<double>(), d);
    if (fam == "distpower")
        return distpower(j.at("beta").get<double>(), d);
    if (fam == "profile")
        return profile(j.at("r").get<std::vector<double>>(), j.at("psi").get<std::vector<double>>(),
                       j.at("dim").get<int>(), d);
    if (fam == "radialpower")
        return radialpower(j.at("beta").get<double>(), j.at("dim").get<int>(), d,
                           j.value("shifted", false));
    throw ConfigError("unknown weight family '" + fam + "'");
}

ExtReal measure_nu(const WeightSpec& w, const Domain1D& d, double tol) {
    if (!(tol > 0.0)) throw DomainError("measure_nu: tol must be positive");
    QuadOptions opt;
    opt.rel_tol = tol;
    ExtReal r = classify_integral([&](double x) { return w.eval_unchecked(x); }, d, opt);
    if (r.is_unknown())
        throw AccuracyError("measure_nu: quadrature did not converge", r.value);
    return r;
}

bool check_Bp(const WeightSpec& w, double p, const std::vector<Domain1D>& probes) {
    if (!(p > 1.0)) throw DomainError("check_Bp: need p > 1");
    const double e = 1.0 / (1.0 - p); // negative
    for (const auto& probe : probes) {
        if (!probe.bounded() || probe.left < w.domain().left || probe.right > w.domain().right)
            throw DomainError("check_Bp: probe must lie compactly inside the domain");
        bool vanished = false;
        auto f = [&](double x) {
            const double rho = w.eval_unchecked(x);
            if (rho == 0.0) {
                vanished = true;
                return kInf;
            }
            return std::pow(std::fabs(rho), e);
        };
        ExtReal r = classify_integral(f, probe);
        if (vanished || r.is_infinite()) return false;
        if (r.is_unknown())
            throw AccuracyError("check_Bp: quadrature inconclusive on a probe", r.value);
    }
    return true;
}

std::optional<std::pair<double, double>> dominates(
    const std::pair<WeightSpec, WeightSpec>& pair1,
    const std::pair<WeightSpec, WeightSpec>& pair2,
    const std::vector<double>& sample, double cap) {
    if (sample.empty()) throw DomainError("dominates: sample grid is empty");
    double dn = 0.0, dm = 0.0;
    for (double x : sample) {
        const double rn = pair2.first(x) / pair1.first(x);
        const double rm = pair1.second(x) / pair2.second(x);
        if (!std::isfinite(rn) || !std::isfinite(rm)) return std::nullopt;
        dn = std::max(dn, rn);
        dm = std::max(dm, rm);
    }
    if (dn > cap || dm > cap) return std::nullopt;
    return std::make_pair(dn, dm);
}

} // namespace wpme
