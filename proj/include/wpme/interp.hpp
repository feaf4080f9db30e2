#pragma once

#include <cstddef>
#include <vector>

#include "wpme/errors.hpp"

namespace wpme {

// Monotone cubic (Fritsch-Carlson) interpolant. Preserves monotonicity of the
// data, which keeps interpolated cumulative integrals nondecreasing and
// tabulated weights positive.
class Pchip {
public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y);

    double operator()(double xq) const;
    double derivative(double xq) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

private:
    std::size_t find_interval(double xq) const;

    std::vector<double> x_, y_, d_; // nodes, values, node slopes
};

} // namespace wpme
