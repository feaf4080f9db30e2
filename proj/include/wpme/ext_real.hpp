#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace wpme {

// Extended real with an explicit "could not decide" state. Finite/infinite is
// what the integral conditions actually need; unknown propagates quadrature
// failures without faking a number.
struct ExtReal {
    enum class State { finite, infinite, unknown };

    double value = 0.0;
    State state = State::finite;

    static ExtReal finite(double v) { return {v, State::finite}; }
    static ExtReal infinite() { return {std::numeric_limits<double>::infinity(), State::infinite}; }
    static ExtReal unknown(double best = std::numeric_limits<double>::quiet_NaN()) {
        return {best, State::unknown};
    }

    bool is_finite() const { return state == State::finite; }
    bool is_infinite() const { return state == State::infinite; }
    bool is_unknown() const { return state == State::unknown; }

    std::string str() const {
        if (is_infinite()) return "inf";
        if (is_unknown()) return "unknown";
        return std::to_string(value);
    }
};

} // namespace wpme
