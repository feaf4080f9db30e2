#include "wpme/interp.hpp"

#include <algorithm>
#include <cmath>

namespace wpme {

Pchip::Pchip(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw DomainError("Pchip: need >= 2 nodes and matching values");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw DomainError("Pchip: abscissae must be strictly increasing");

    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }

    d_.assign(n, 0.0);
    if (n == 2) {
        d_[0] = d_[1] = delta[0];
    } else {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) {
                d_[i] = 0.0;
            } else {
                // weighted harmonic mean of neighbouring secants
                double w1 = 2.0 * h[i] + h[i - 1];
                double w2 = h[i] + 2.0 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        auto end_slope = [](double h0, double h1, double d0, double d1) {
            double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (d * d0 <= 0.0)
                d = 0.0;
            else if (d0 * d1 <= 0.0 && std::fabs(d) > 3.0 * std::fabs(d0))
                d = 3.0 * d0;
            return d;
        };
        d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }
}

std::size_t Pchip::find_interval(double xq) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), xq);
    std::size_t i = (it == x_.begin()) ? 0 : std::size_t(it - x_.begin()) - 1;
    if (i >= x_.size() - 1) i = x_.size() - 2;
    return i;
}

double Pchip::operator()(double xq) const {
    if (empty()) throw DomainError("Pchip: empty interpolant");
    const std::size_t i = find_interval(xq);
    const double h = x_[i + 1] - x_[i];
    const double t = (xq - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
}

double Pchip::derivative(double xq) const {
    if (empty()) throw DomainError("Pchip: empty interpolant");
    const std::size_t i = find_interval(xq);
    const double h = x_[i + 1] - x_[i];
    const double t = (xq - x_[i]) / h;
    const double t2 = t * t;
    const double g00 = (6 * t2 - 6 * t) / h, g10 = 3 * t2 - 4 * t + 1;
    const double g01 = (-6 * t2 + 6 * t) / h, g11 = 3 * t2 - 2 * t;
    return g00 * y_[i] + g10 * d_[i] + g01 * y_[i + 1] + g11 * d_[i + 1];
}

} // namespace wpme
