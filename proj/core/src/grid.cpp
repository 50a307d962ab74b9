#include "radialbc/grid.hpp"

#include "radialbc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace radialbc {

RadialGrid::RadialGrid(double r0, double r_max, int n_points, double scale) : scale_(scale) {
    if (!(r0 > 0.0) || !(r_max > r0) || !std::isfinite(r_max)) {
        throw DomainError("radial grid requires 0 < r0 < r_max (got r0=" + std::to_string(r0) +
                          ", r_max=" + std::to_string(r_max) + ")");
    }
    if (n_points < kMinPoints) {
        throw DomainError("radial grid requires at least " + std::to_string(kMinPoints) +
                          " points");
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw DomainError("radial grid scale must be finite and > 0");
    }

    const auto n = static_cast<std::size_t>(n_points);
    const double x0 = to_x(r0);
    const double x1 = to_x(r_max);
    h_ = (x1 - x0) / static_cast<double>(n - 1);
    r_.resize(n);
    jac_.resize(n);
    half_schwarzian_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = i == 0 ? r0 : (i + 1 == n ? r_max : to_r(x0 + h_ * static_cast<double>(i)));
        r_[i] = r;
        const double f1 = 1.0 / r + 1.0 / scale_;
        const double f2 = -1.0 / (r * r);
        const double f3 = 2.0 / (r * r * r);
        jac_[i] = 1.0 / f1;
        const double ratio = f2 / f1;
        half_schwarzian_[i] = 0.5 * (f3 / f1 - 1.5 * ratio * ratio);
    }
}

double RadialGrid::to_x(double r) const noexcept { return std::log(r) + r / scale_; }

double RadialGrid::to_r(double x) const noexcept {
    // Newton on t = ln r: t + e^t / s = x (monotone, convex)
    double t = x < std::log(scale_) + 1.0 ? x : std::log(scale_ * (x - std::log(scale_)));
    for (int it = 0; it < 100; ++it) {
        const double e = std::exp(t) / scale_;
        const double f = t + e - x;
        const double dt = f / (1.0 + e);
        t -= dt;
        if (std::abs(dt) <= 1e-15 * std::max(1.0, std::abs(t))) {
            break;
        }
    }
    return std::exp(t);
}

double RadialGrid::integrate(std::span<const double> f) const {
    if (f.size() != r_.size()) {
        throw DomainError("integrand length does not match the grid");
    }
    double acc = 0.5 * (f.front() * jac_.front() + f.back() * jac_.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        acc += f[i] * jac_[i];
    }
    return acc * h_;
}

} // namespace radialbc
