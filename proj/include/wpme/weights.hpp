#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wpme/domain.hpp"
#include "wpme/ext_real.hpp"
#include "wpme/interp.hpp"
#include "wpme/quad.hpp"

namespace wpme {

// One member of the weight catalog. Families and JSON field names are fixed
// by docs/formats.md.
class WeightSpec {
public:
    enum class Family { power, logpower, exp, gaussian, distpower, profile, radialpower };

    static WeightSpec power(double beta, Domain1D d, bool pivot_left = false);
    static WeightSpec logpower(double exponent, double base_exponent, Domain1D d);
    static WeightSpec exponential(double alpha, Domain1D d, bool abs_arg = false);
    static WeightSpec gaussian(double dcoef, Domain1D d);
    static WeightSpec distpower(double beta, Domain1D d);
    // rho(r) = psi(r)^(dim-1) for a tabulated profile psi > 0
    static WeightSpec profile(std::vector<double> r, std::vector<double> psi, int dim, Domain1D d);
    // rho(r) = r^(dim-1) * r^beta, or r^(dim-1) * (1+r^2)^(beta/2) when shifted
    static WeightSpec radialpower(double beta, int dim, Domain1D d, bool shifted = false);

    double operator()(double x) const; // checked evaluation
    double eval_unchecked(double x) const;

    const Domain1D& domain() const { return dom_; }
    Family family() const { return family_; }
    std::string family_name() const;

    nlohmann::json to_json() const;
    static WeightSpec from_json(const nlohmann::json& j);

private:
    WeightSpec(Family f, Domain1D d) : family_(f), dom_(std::move(d)) {}
    void validate() const;

    Family family_;
    Domain1D dom_;
    double p1_ = 0.0, p2_ = 0.0;
    int dim_ = 1;
    bool flag_ = false; // pivot_left / abs_arg / shifted depending on family
    Pchip table_;
    std::vector<double> tab_r_, tab_psi_; // kept for serialization
};

Domain1D domain_from_json(const nlohmann::json& j);

// nu(domain) = integral of the weight; +inf via the growth certificate.
ExtReal measure_nu(const WeightSpec& w, const Domain1D& d, double tol = 1e-8);

inline ExtReal measure_nu(const WeightSpec& w, double tol = 1e-8) {
    return measure_nu(w, w.domain(), tol);
}

// B^p membership: |rho|^(1/(1-p)) locally integrable on each probe interval.
// Probes must lie compactly inside the weight's domain.
bool check_Bp(const WeightSpec& w, double p, const std::vector<Domain1D>& probes);

// Smallest constants (D_nu, D_mu) with nu2 <= D_nu * nu1 and mu1 <= D_mu * mu2
// over the sample grid; nullopt when a ratio exceeds the cap.
std::optional<std::pair<double, double>> dominates(
    const std::pair<WeightSpec, WeightSpec>& pair1,
    const std::pair<WeightSpec, WeightSpec>& pair2,
    const std::vector<double>& sample, double cap = 1e12);

} // namespace wpme
