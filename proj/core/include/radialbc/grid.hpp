#pragma once

#include <span>
#include <vector>

namespace radialbc {

/// User-facing grid request. Zero means "choose automatically".
struct GridSettings {
    double r0 = 0.0;    ///< series start-off radius
    double r_max = 0.0; ///< outer radius
    int n_points = 12000;
    double scale = 0.0; ///< crossover radius between geometric and uniform spacing

    friend bool operator==(const GridSettings&, const GridSettings&) = default;
};

/// Radial mesh uniform in x = ln r + r / s.
///
/// For r << s the points are geometric (dr ~ h r); for r >> s they are
/// uniform (dr -> h s). The map is smooth, so Numerov keeps its order when
/// applied to w = u / sqrt(dr/dx), which obeys w'' + F w = 0 with
/// F = (dr/dx)^2 [Q(r) - S(r)/2] and S the Schwarzian derivative of x(r).
class RadialGrid {
public:
    static constexpr int kMinPoints = 200;

    RadialGrid(double r0, double r_max, int n_points, double scale);

    std::size_t size() const noexcept { return r_.size(); }
    double step() const noexcept { return h_; }
    double r0() const noexcept { return r_.front(); }
    double r_max() const noexcept { return r_.back(); }
    double scale() const noexcept { return scale_; }

    std::span<const double> r() const noexcept { return r_; }
    double r(std::size_t i) const noexcept { return r_[i]; }
    /// dr/dx at point i.
    double jacobian(std::size_t i) const noexcept { return jac_[i]; }
    /// S(r)/2 where S is the Schwarzian of x(r) = ln r + r/s.
    double half_schwarzian(std::size_t i) const noexcept { return half_schwarzian_[i]; }

    /// x(r) for any r > 0, and its inverse.
    double to_x(double r) const noexcept;
    double to_r(double x) const noexcept;

    /// Trapezoidal rule for the integral of f dr on [r0, r_max], applied in x.
    double integrate(std::span<const double> f) const;

    GridSettings settings() const noexcept { return {r0(), r_max(), static_cast<int>(size()), scale_}; }

    friend bool operator==(const RadialGrid& a, const RadialGrid& b) {
        return a.r_ == b.r_ && a.scale_ == b.scale_;
    }

private:
    double scale_;
    double h_;
    std::vector<double> r_;
    std::vector<double> jac_;
    std::vector<double> half_schwarzian_;
};

} // namespace radialbc
