#pragma once

#include "radialbc/rsolve.hpp"

#include <vector>

namespace radialbc::detail {

/// d(E) r^{-q} with d(E) = c0 + c1 E + c2 E^2.
struct RemainderTerm {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double q = 0.0;

    double at(double E) const noexcept { return c0 + E * (c1 + E * c2); }
};

/// Small-r structure of u'' = [a(a-1)/r^2 + sum_k d_k(E) r^{-q_k}] u.
struct Frobenius {
    double P = 0.0;
    double a_plus = 0.0;
    double a_minus = 0.0;
    bool degenerate = false;
    double theta = 0.0;
    double length = 1.0;
    std::vector<RemainderTerm> terms; ///< merged by q, every q < 2
};

Frobenius make_frobenius(const RadialProblem& problem, const ProblemAnalysis& analysis);

/// Start-off value of the requested branch at r. With FirstCorrection a
/// logarithmic resonance (2a + sigma - 1 = 0) throws StartOffError.
StartValues start_values(const Frobenius& fr, Branch branch, double E, double r,
                         SeriesOrder order);

/// Relative size of the first omitted (second-order) term.
inline double omitted_term(const StartValues& sv) noexcept { return sv.correction * sv.correction; }

constexpr double kStartOffTolerance = 1e-6;

} // namespace radialbc::detail
