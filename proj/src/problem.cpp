#include "wpme/problem.hpp"

#include <cmath>
#include <numbers>

namespace wpme {

using nlohmann::json;

double barenblatt_profile(double x, double t, double m, double C) {
    const double alpha = 1.0 / (m + 1.0);
    const double k = (m - 1.0) / (2.0 * m * (m + 1.0));
    const double xi = x * std::pow(t, -alpha);
    const double core = C - k * xi * xi;
    if (core <= 0.0) return 0.0;
    return std::pow(t, -alpha) * std::pow(core, 1.0 / (m - 1.0));
}

double Datum::eval(double x, const Domain1D& dom, double m) const {
    double base = 0.0;
    switch (kind) {
        case Kind::log1p:
            base = std::log(x + 1.0);
            break;
        case Kind::logx2p2:
            base = std::log(x * x + 2.0);
            break;
        case Kind::cospi: {
            const double a = dom.left_finite() ? dom.left : -1.0;
            const double b = dom.right_finite() ? dom.right : 1.0;
            base = std::cos(std::numbers::pi * (x - a) / (b - a));
            break;
        }
        case Kind::bump: {
            const double a = dom.left_finite() ? dom.left : -1.0;
            const double b = dom.right_finite() ? dom.right : 1.0;
            const double s = 2.0 * (x - a) / (b - a) - 1.0;
            base = (std::fabs(s) < 1.0) ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0;
            break;
        }
        case Kind::barenblatt:
            base = barenblatt_profile(x, t0, m, C);
            break;
        case Kind::constant:
            base = 1.0;
            break;
        case Kind::exp_rate:
            base = std::exp(rate * x);
            break;
        case Kind::table: {
            Pchip p(tx, ty);
            double xc = std::min(std::max(x, p.x_min()), p.x_max());
            base = p(xc);
            break;
        }
    }
    return offset + scale * base;
}

namespace {
const char* kind_name(Datum::Kind k) {
    switch (k) {
        case Datum::Kind::log1p: return "log1p";
        case Datum::Kind::logx2p2: return "logx2p2";
        case Datum::Kind::cospi: return "cospi";
        case Datum::Kind::bump: return "bump";
        case Datum::Kind::barenblatt: return "barenblatt";
        case Datum::Kind::constant: return "constant";
        case Datum::Kind::exp_rate: return "exp_rate";
        case Datum::Kind::table: return "table";
    }
    return "?";
}
} // namespace

json Datum::to_json() const {
    json j;
    j["kind"] = kind_name(kind);
    j["scale"] = scale;
    j["offset"] = offset;
    if (kind == Kind::barenblatt) {
        j["t0"] = t0;
        j["C"] = C;
    }
    if (kind == Kind::exp_rate) j["rate"] = rate;
    if (kind == Kind::table) {
        j["x"] = tx;
        j["y"] = ty;
    }
    return j;
}

Datum Datum::named(const std::string& kind, double scale, double offset) {
    Datum d;
    d.scale = scale;
    d.offset = offset;
    if (kind == "log1p") d.kind = Kind::log1p;
    else if (kind == "logx2p2") d.kind = Kind::logx2p2;
    else if (kind == "cospi") d.kind = Kind::cospi;
    else if (kind == "bump") d.kind = Kind::bump;
    else if (kind == "barenblatt") d.kind = Kind::barenblatt;
    else if (kind == "constant") d.kind = Kind::constant;
    else if (kind == "exp_rate") d.kind = Kind::exp_rate;
    else if (kind == "table") d.kind = Kind::table;
    else throw ConfigError("unknown datum kind '" + kind + "'");
    return d;
}

Datum Datum::from_json(const json& j) {
    Datum d = named(j.at("kind").get<std::string>(), j.value("scale", 1.0), j.value("offset", 0.0));
    d.t0 = j.value("t0", 1.0);
    d.C = j.value("C", 1.0);
    d.rate = j.value("rate", 1.0);
    if (d.kind == Kind::table) {
        d.tx = j.at("x").get<std::vector<double>>();
        d.ty = j.at("y").get<std::vector<double>>();
    }
    return d;
}

} // namespace wpme
