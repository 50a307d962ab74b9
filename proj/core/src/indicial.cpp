#include "radialbc/indicial.hpp"

#include "radialbc/errors.hpp"
#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace radialbc {

std::string to_string(Regime regime) {
    switch (regime) {
    case Regime::BothCriteriaAmbiguous:
        return "both-criteria-ambiguous";
    case Regime::L2AmbiguousOnly:
        return "L2-ambiguous-only";
    case Regime::Unique:
        return "unique";
    case Regime::FallToCenter:
        return "fall-to-center";
    }
    return "unknown";
}

IndicialReport indicial_from_coupling(int l, double two_m_V0) {
    if (l < 0) {
        throw DomainError("angular momentum l must be >= 0");
    }
    if (!std::isfinite(two_m_V0)) {
        throw DomainError("2mV0 must be finite");
    }
    IndicialReport rep;
    rep.l = l;
    rep.two_m_V0 = two_m_V0;

    const double half = l + 0.5;
    const double radicand = half * half - two_m_V0;
    if (radicand < 0.0) {
        rep.P.reset();
        rep.a_plus = rep.a_minus = std::numeric_limits<double>::quiet_NaN();
        rep.minus_l2 = rep.minus_bc = false;
        rep.regime = Regime::FallToCenter;
        return rep;
    }

    // V0 = 0 reproduces a = l + 1, -l exactly
    const double P = two_m_V0 == 0.0 ? half : std::sqrt(radicand);
    rep.P = P;
    rep.a_plus = 0.5 + P;
    rep.a_minus = 0.5 - P;
    rep.degenerate = P == 0.0;
    rep.plus_l2 = true;
    rep.plus_bc = true;
    rep.minus_l2 = P < 1.0;
    rep.minus_bc = P < 0.5;
    if (P < 0.5) {
        rep.regime = Regime::BothCriteriaAmbiguous;
    } else if (P < 1.0) {
        rep.regime = Regime::L2AmbiguousOnly;
    } else {
        rep.regime = Regime::Unique;
    }
    return rep;
}

IndicialReport solve_indicial(int l, double mass, const OriginClass& origin) {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw DomainError("mass must be finite and > 0");
    }
    switch (origin.kind) {
    case OriginClass::Kind::Regular:
        return indicial_from_coupling(l, 0.0);
    case OriginClass::Kind::TransitiveSingular:
        return indicial_from_coupling(l, 2.0 * mass * origin.V0);
    case OriginClass::Kind::StronglySingular:
        break;
    }
    throw ClassificationError(
        "indicial analysis supports regular and transitive-singular origins only "
        "(|r^2 V| diverges at the origin)");
}

std::vector<IndicialReport> admissibility_table(int l_min, int l_max, double mass,
                                                std::span<const double> V0_grid) {
    if (l_min < 0 || l_max < l_min) {
        throw DomainError("invalid l range");
    }
    std::vector<double> sorted(V0_grid.begin(), V0_grid.end());
    for (double v : sorted) {
        if (!std::isfinite(v)) {
            throw DomainError("V0 grid must be finite");
        }
    }
    std::sort(sorted.begin(), sorted.end());
    std::vector<IndicialReport> rows;
    rows.reserve(static_cast<std::size_t>(l_max - l_min + 1) * sorted.size());
    for (int l = l_min; l <= l_max; ++l) {
        for (double v0 : sorted) {
            rows.push_back(solve_indicial(l, mass, {OriginClass::Kind::TransitiveSingular, v0}));
        }
    }
    return rows;
}

std::string admissibility_csv(std::span<const IndicialReport> rows) {
    std::string out = "l,two_m_V0,P,a_plus,a_minus,minus_l2,minus_bc,regime\n";
    for (const auto& r : rows) {
        out += std::to_string(r.l);
        out += ',' + detail::fmt17(r.two_m_V0);
        if (r.P) {
            out += ',' + detail::fmt17(*r.P) + ',' + detail::fmt17(r.a_plus) + ',' +
                   detail::fmt17(r.a_minus);
        } else {
            out += ",,,";
        }
        out += r.minus_l2 ? ",true" : ",false";
        out += r.minus_bc ? ",true" : ",false";
        out += ',' + to_string(r.regime) + '\n';
    }
    return out;
}

} // namespace radialbc
