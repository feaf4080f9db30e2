#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wpme/domain.hpp"
#include "wpme/grid.hpp"
#include "wpme/interp.hpp"
#include "wpme/weights.hpp"

namespace wpme {

enum class BC { dirichlet, neumann };

enum class FarPolicy { zero_flux, dirichlet_zero };

struct Truncation {
    double length = 40.0;
    FarPolicy far = FarPolicy::zero_flux;
};

// Closed-form initial datum descriptors plus a sampled table. scale/offset
// apply to every kind: u0 = offset + scale * base(x).
struct Datum {
    enum class Kind { log1p, logx2p2, cospi, bump, barenblatt, constant, exp_rate, table };
    Kind kind = Kind::constant;
    double scale = 1.0;
    double offset = 0.0;
    double t0 = 1.0;     // barenblatt
    double C = 1.0;      // barenblatt free constant
    double rate = 1.0;   // exp_rate
    std::vector<double> tx, ty; // table

    double eval(double x, const Domain1D& dom, double m) const;

    nlohmann::json to_json() const;
    static Datum from_json(const nlohmann::json& j);
    static Datum named(const std::string& kind, double scale = 1.0, double offset = 0.0);
};

// Barenblatt source-type profile for exponent m (one space dimension).
double barenblatt_profile(double x, double t, double m, double C);

struct Regularization {
    double eps = -1.0;        // < 0: auto, 1e-6 * max(1, |u0|_inf)
    bool continuation = false; // run eps, eps/4, eps/16 and record drift
};

struct TimeControls {
    double t_end = 1.0;
    double dt_init = -1.0; // < 0: auto
    double dt_max = -1.0;  // < 0: none
    double newton_tol = 1e-10;
};

struct PMEProblem {
    double m = 2.0;
    BC bc = BC::neumann;
    WeightSpec nu, mu;
    Domain1D domain;
    std::optional<Truncation> truncation;
    Datum datum;
    Regularization reg;
    TimeControls time;
    double grading = 1.0;
    GradeSide grade_side = GradeSide::automatic;

    PMEProblem(double m_, BC bc_, WeightSpec nu_, WeightSpec mu_, Domain1D dom)
        : m(m_), bc(bc_), nu(std::move(nu_)), mu(std::move(mu_)), domain(std::move(dom)) {
        if (!(m > 1.0)) throw DomainError("PMEProblem: m must be > 1");
    }

    // computational box after truncation
    Domain1D box() const {
        if (domain.bounded()) return domain;
        if (!truncation) throw DomainError("unbounded domain needs a truncation");
        return domain.truncated(truncation->length);
    }
};

} // namespace wpme
