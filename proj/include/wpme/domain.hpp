#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "wpme/errors.hpp"

namespace wpme {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Open interval (left, right); either endpoint may be infinite.
struct Domain1D {
    double left = 0.0;
    double right = 1.0;
    std::string name;

    Domain1D() = default;
    Domain1D(double a, double b, std::string label = "")
        : left(a), right(b), name(std::move(label)) {
        if (!(left < right))
            throw DomainError("Domain1D: need left < right, got [" +
                              std::to_string(a) + ", " + std::to_string(b) + "]");
        if (std::isnan(left) || std::isnan(right))
            throw DomainError("Domain1D: NaN endpoint");
    }

    bool left_finite() const { return std::isfinite(left); }
    bool right_finite() const { return std::isfinite(right); }
    bool bounded() const { return left_finite() && right_finite(); }

    bool contains(double x) const { return x > left && x < right; }

    double length() const { return right - left; }

    // Truncate to a computational box of extent L measured from the finite
    // side(s); a fully infinite line becomes (-L, L).
    Domain1D truncated(double L) const {
        if (L <= 0) throw DomainError("truncation length must be positive");
        double a = left, b = right;
        if (!left_finite() && !right_finite()) {
            a = -L;
            b = L;
        } else if (!right_finite()) {
            b = a + L;
        } else if (!left_finite()) {
            a = b - L;
        }
        return Domain1D(a, b, name);
    }
};

} // namespace wpme
