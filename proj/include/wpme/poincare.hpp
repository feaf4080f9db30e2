#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wpme/ext_real.hpp"
#include "wpme/interp.hpp"
#include "wpme/weights.hpp"

namespace wpme {

enum class Verdict { holds, fails, inconclusive };
std::string verdict_name(Verdict v);

// sup-of-product functional with per-scan-point products kept for the
// constancy diagnostics.
struct HardyResult {
    ExtReal value;
    double argmax = 0.0;
    std::vector<double> xs;
    std::vector<double> products;
};

// B_L(a,b) = sup_x (int_x^b rho_nu) (int_a^x rho_mu^-1)
HardyResult hardy_BL(const WeightSpec& nu, const WeightSpec& mu, double a, double b);
// B_R(a,b) = sup_x (int_a^x rho_nu) (int_x^b rho_mu^-1)
HardyResult hardy_BR(const WeightSpec& nu, const WeightSpec& mu, double a, double b);

struct SplitVerdict {
    Verdict verdict = Verdict::inconclusive;
    double c = 0.0; // split point (may be +-inf = an endpoint)
    ExtReal B_left, B_right;
};

// Existence of a split c in [a,b] with B_L(a,c) and B_R(c,b) both finite
// (endpoint conventions B_L(a,a) = B_R(b,b) = 0).
SplitVerdict dirichlet_poincare_verdict(const WeightSpec& nu, const WeightSpec& mu,
                                        const Domain1D& dom);

// Zero-mean functionals; precondition nu(a,b) < infinity.
HardyResult zero_mean_KL(const WeightSpec& nu, const WeightSpec& mu, double a, double b);
HardyResult zero_mean_KR(const WeightSpec& nu, const WeightSpec& mu, double a, double b);

enum class SpectralKind { dirichlet, zero_mean };

struct TraceEntry {
    int cells = 0;
    double truncation = 0.0; // 0 for naturally bounded domains
    double estimate = 0.0;   // C_P or M_P at this level; inf when decoupled
    bool decoupled = false;
};

struct DiscreteConstant {
    double estimate = 0.0; // Richardson-extrapolated over the two finest grids
    std::vector<TraceEntry> trace;
    bool divergent = false;
};

// Smallest (nonzero for zero_mean) generalized eigenvalue of the assembled
// stiffness/mass pair via inverse power iteration; constant-vector deflation
// in the nu-inner product for the zero-mean kind. Divergence is declared when
// the estimate grows by >= 25% at every step across >= 4 steps, or when the
// Dirichlet wall coupling vanishes at every level (both boundary resistances
// infinite).
DiscreteConstant discrete_constant(SpectralKind kind, const WeightSpec& nu, const WeightSpec& mu,
                                   const Domain1D& dom, const std::vector<int>& grids,
                                   const std::vector<double>& truncations = {},
                                   double gamma = 1.0);

struct WeakPoincare {
    double estimate = 0.0;    // usable W_P (the proven bound when available)
    double trial_max = 0.0;   // largest trial-function ratio (lower bound)
    std::optional<double> bound; // 2 * max(M_P, nu(Omega)^-1/2) when M_P given
    Verdict verdict = Verdict::inconclusive;
};

// ||v||_2;nu <= W_P (||grad v||_2;mu + ||v||_q_low;nu) over a fixed battery of
// discrete trials; q_low = 1 is the weak inequality, q_low = q0/m probes the
// V^{q0/m} = W^{1,2} identification.
WeakPoincare weak_poincare_check(const WeightSpec& nu, const WeightSpec& mu, const Domain1D& dom,
                                 std::optional<double> M_P, double q_low = 1.0,
                                 int cells = 1024, double trunc = 40.0);

struct GapResult {
    double Q = 0.0;
    bool bounded = false;
    double argmax_xi = 0.0;
};

// sup over 0 < xi < r <= r_max of (int_0^xi psi^(N-1)) (int_xi^r psi^(1-N));
// bounded iff the sup saturates as r_max grows.
GapResult riemannian_gap(const Pchip& psi, int N, double r_max, int budget = 256);

// psi(r) = r near 0, e^(a r) far out, monotone-cubic bridge in between.
Pchip bridged_profile(double a, double r_max);

// 2^(1-a/2) * nu(Omega)^((1-a)/2) * M_P^a  for a in (0,1]
double M_Pa_constant(double a, double M_P, double nu_measure);

// c(alpha,beta) = 1 + (b/a)^(b/a) (1-b/a)^(1-b/a), 0 < beta < alpha < 1
double c_alpha_beta(double alpha, double beta);

struct PoincareReport {
    std::string label;
    ExtReal B_L, B_R;
    double split_c = 0.0;
    ExtReal K_L, K_R;
    std::optional<double> C_P, M_P, W_P;
    std::optional<double> Q;
    Verdict dirichlet = Verdict::inconclusive;
    Verdict zero_mean = Verdict::inconclusive;
    Verdict weak = Verdict::inconclusive;
    std::vector<TraceEntry> trace;
    bool trace_divergent = false;
    nlohmann::json to_json() const;
};

struct AuditRequest {
    WeightSpec nu, mu;
    Domain1D dom;
    bool want_dirichlet = true;
    bool want_zero_mean = true;
    bool want_discrete = true;
    std::vector<int> grids = {250, 1000, 4000};
    std::vector<double> truncations;
    double gamma = 1.0;
    std::string label;
};

PoincareReport audit(const AuditRequest& req);

// The explicit weight catalog: named pairs with the inequality kind each one
// satisfies (or, for the failure entry, provably violates).
struct CatalogEntry {
    std::string name;
    SpectralKind kind;
    bool expected_holds;
    WeightSpec nu, mu;
    std::vector<double> truncations; // for unbounded domains
    std::vector<int> grids;
    double gamma = 1.0;
};

std::vector<CatalogEntry> weight_catalog();

} // namespace wpme
