#pragma once

#include <string>

#include <json.hpp>

#include "wpme/io.hpp"
#include "wpme/solver.hpp"

namespace wpme {

struct ScenarioResult {
    std::string name;
    bool pass = false;
    nlohmann::json details;
};

// Dirichlet half-line with exponential weights: the log datum stays unbounded.
// Fits the subsolution constant on a geometric ladder, checks the solver
// dominates the subsolution, and verifies growth of the grid max under
// domain-truncation doubling.
ScenarioResult dirichlet_unbounded(double m, double L, int M, io::OutputDir* out = nullptr);

// Neumann analogue on the whole line with even datum log(x^2+2).
ScenarioResult neumann_unbounded(double m, double L, int M, io::OutputDir* out = nullptr);

// Weights (x^(beta-2), x^beta) on (0,1): the shrinking-support supersolution
// pins the solution to zero near the origin while the mean stays positive, so
// convergence to the mean is never uniform.
ScenarioResult nonuniform_convergence(double m, double beta, double r0, int M,
                                      io::OutputDir* out = nullptr);

// Unweighted zero-mean Neumann decay exponent -1/(m-1), datum-free.
ScenarioResult ar81_sharp_rate(double m, int M, io::OutputDir* out = nullptr);

// Exponential convergence to a nonzero mean; rate nondecreasing in |mean|.
ScenarioResult neumann_mean_convergence(double m, int M, io::OutputDir* out = nullptr);

// Conservation / comparison / contraction / positivity / norm monotonicity of
// one run, reported as a block every scenario embeds in its details.
nlohmann::json invariant_suite(const Trajectory& traj, const PMEProblem& pb);

// name-based dispatch used by the CLI; overrides: m, beta, L, cells, r0
ScenarioResult run_scenario(const std::string& name, const nlohmann::json& overrides,
                            io::OutputDir* out = nullptr);

} // namespace wpme
