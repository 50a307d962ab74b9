#pragma once

#include "frobenius.hpp"
#include "radialbc/grid.hpp"
#include "radialbc/rsolve.hpp"

#include <span>
#include <vector>

namespace radialbc::detail {

/// Numerov machinery for one problem on one grid. Immutable after
/// construction; every method is const and allocates its own buffers.
class Shooter {
public:
    Shooter(const RadialProblem& problem, Frobenius frobenius, Branch branch, RadialGrid grid);

    const RadialGrid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return grid_.size(); }

    /// Q(r_i; E) with u'' + Q u = 0.
    std::vector<double> q_values(double E) const;
    /// Numerov weights f_i = 1 + h^2 F_i / 12 for w = u / sqrt(dr/dx).
    std::vector<double> numerov_weights(std::span<const double> Q) const;

    /// Outermost classical turning point (largest i with Q_i >= 0), grid
    /// midpoint when there is none, clamped away from the ends.
    std::size_t turning_index(std::span<const double> Q) const;

    /// Interior nodes of the outward solution. Counting stops once the sweep
    /// is past the last sign change of F and |w| grows, where the exact
    /// solution cannot turn over again.
    int count_nodes(double E) const;

    /// Relative discrete Wronskian of the outward and inward solutions at
    /// (m, m+1). Sign is continuous in E; zero at eigenvalues.
    double defect(double E, std::size_t m) const;

    struct Assembled {
        std::vector<double> u; ///< normalized, u > 0 next to the origin
        int nodes = 0;
        double defect = 0.0;
        int rescalings = 0;
        double start_omitted = 0.0;
    };
    Assembled assemble(double E, std::size_t m) const;

    /// Raw sweeps. outward fills w[0..stop], inward fills w[stop..N-1].
    /// `strict` makes the start-off enforce the series tolerance.
    void outward(double E, std::span<const double> f, std::size_t stop, std::vector<double>& w,
                 int& rescalings, bool strict, double* omitted = nullptr) const;
    void inward(std::span<const double> Q, std::span<const double> f, std::size_t stop,
                std::vector<double>& w, int& rescalings) const;

    double overflow() const noexcept { return overflow_; }

private:
    StartValues start(double E, double r, bool strict) const;

    Frobenius fr_;
    Branch branch_;
    RadialGrid grid_;
    double mass_;
    bool relativistic_;
    double overflow_;
    std::vector<double> v_;           // V(r_i)
    std::vector<double> centrifugal_; // l(l+1)/r_i^2
};

} // namespace radialbc::detail
