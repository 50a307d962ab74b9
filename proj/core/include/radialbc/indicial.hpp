#pragma once

#include "radialbc/potential.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace radialbc {

/// Admissibility band of the minus-branch exponent.
enum class Regime {
    BothCriteriaAmbiguous, ///< 0 <= P < 1/2: r^{1/2-P} is L^2 and vanishes at the origin
    L2AmbiguousOnly,       ///< 1/2 <= P < 1: L^2 but u(0) != 0 or divergent
    Unique,                ///< P >= 1: only r^{1/2+P} survives either criterion
    FallToCenter,          ///< (l + 1/2)^2 < 2mV0
};

std::string to_string(Regime regime);

/// Leading Frobenius exponents u ~ r^a at the origin for
/// a(a - 1) = l(l + 1) - 2mV0, i.e. a = 1/2 +- P.
struct IndicialReport {
    int l = 0;
    double two_m_V0 = 0.0;
    std::optional<double> P; ///< absent in the fall-to-center regime
    double a_plus = 0.0;     ///< NaN when P is absent
    double a_minus = 0.0;    ///< NaN when P is absent
    bool plus_l2 = true;
    bool minus_l2 = false;
    bool plus_bc = true;
    bool minus_bc = false;
    bool degenerate = false; ///< P == 0, second solution sqrt(r) log r
    Regime regime = Regime::Unique;

    bool fall_to_center() const noexcept { return !P.has_value(); }
};

/// Indicial analysis from the dimensionless coupling 2mV0.
IndicialReport indicial_from_coupling(int l, double two_m_V0);

/// Indicial analysis for a classified origin. StronglySingular throws
/// ClassificationError; fall to the center is reported, not thrown.
IndicialReport solve_indicial(int l, double mass, const OriginClass& origin);

/// One report per (l, V0) with l in [l_min, l_max], rows sorted by (l, 2mV0).
std::vector<IndicialReport> admissibility_table(int l_min, int l_max, double mass,
                                                std::span<const double> V0_grid);

inline std::vector<IndicialReport> admissibility_table(int l_max, double mass,
                                                       std::span<const double> V0_grid) {
    return admissibility_table(0, l_max, mass, V0_grid);
}

/// CSV with header l,two_m_V0,P,a_plus,a_minus,minus_l2,minus_bc,regime.
std::string admissibility_csv(std::span<const IndicialReport> rows);

} // namespace radialbc
