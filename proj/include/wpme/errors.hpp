#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wpme {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A point or parameter outside its admissible range.
struct DomainError : Error {
    using Error::Error;
};

// Integrand or weight produced NaN/Inf at an interior node.
struct EvalError : Error {
    using Error::Error;
};

// Requested tolerance not reached; carries the best available estimate.
struct AccuracyError : Error {
    double best_estimate;
    AccuracyError(const std::string& msg, double best)
        : Error(msg), best_estimate(best) {}
};

// Assembly or iteration failure in a linear/eigen solve.
struct NumericError : Error {
    using Error::Error;
};

// Newton failed after all dt halvings; keeps the residual history.
struct StepError : Error {
    std::vector<double> residual_history;
    StepError(const std::string& msg, std::vector<double> hist)
        : Error(msg), residual_history(std::move(hist)) {}
};

struct ScenarioError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace wpme
