#include "frobenius.hpp"

#include "format.hpp"

#include <algorithm>
#include <cmath>

namespace radialbc::detail {

namespace {

void add_term(std::vector<RemainderTerm>& terms, RemainderTerm t) {
    for (auto& existing : terms) {
        if (std::abs(existing.q - t.q) <= 1e-12) {
            existing.c0 += t.c0;
            existing.c1 += t.c1;
            existing.c2 += t.c2;
            return;
        }
    }
    terms.push_back(t);
}

struct Series {
    double u;
    double du;
    double correction;
};

// r^a (1 + sum c_k r^{sigma_k})
Series power_series(const Frobenius& fr, double a, double E, double r, SeriesOrder order) {
    const double ra = std::pow(r, a);
    double u = ra;
    double du = a * ra / r;
    double corr = 0.0;
    if (order == SeriesOrder::FirstCorrection) {
        for (const auto& t : fr.terms) {
            const double d = t.at(E);
            if (d == 0.0) {
                continue;
            }
            const double sigma = 2.0 - t.q;
            const double denom = sigma * (2.0 * a + sigma - 1.0);
            if (std::abs(denom) < 1e-10) {
                throw StartOffError("Frobenius start-off: logarithmic resonance between exponent " +
                                    fmt17(a) + " and remainder power r^" + fmt17(-t.q));
            }
            const double c = d / denom;
            const double rs = std::pow(r, sigma);
            u += c * ra * rs;
            du += c * (a + sigma) * ra * rs / r;
            corr += std::abs(c * rs);
        }
    }
    return {u, du, corr};
}

} // namespace

Frobenius make_frobenius(const RadialProblem& problem, const ProblemAnalysis& analysis) {
    Frobenius fr;
    const auto& rep = analysis.indicial;
    fr.P = *rep.P;
    fr.a_plus = rep.a_plus;
    fr.a_minus = rep.a_minus;
    fr.degenerate = rep.degenerate;
    if (const auto* sae = std::get_if<MixedSAE>(&problem.policy)) {
        fr.theta = sae->theta;
        fr.length = sae->length;
    }

    const auto vterms = origin_terms(problem.potential);
    const double m = problem.mass;
    if (!problem.relativistic) {
        // u'' = [l(l+1)/r^2 + 2m(V - E)] u, the r^{-2} part lives in a(a-1)
        for (const auto& t : vterms) {
            if (t.p < 2.0 - 1e-12) {
                add_term(fr.terms, {2.0 * m * t.coeff, 0.0, 0.0, t.p});
            }
        }
        add_term(fr.terms, {0.0, -2.0 * m, 0.0, 0.0});
    } else {
        // u'' = [l(l+1)/r^2 + m^2 - (E - V)^2] u with V = sum c_k r^{-p_k}, p_k <= 1
        add_term(fr.terms, {m * m, 0.0, -1.0, 0.0});
        for (const auto& t : vterms) {
            add_term(fr.terms, {0.0, 2.0 * t.coeff, 0.0, t.p});
        }
        for (std::size_t j = 0; j < vterms.size(); ++j) {
            for (std::size_t k = 0; k < vterms.size(); ++k) {
                const double q = vterms[j].p + vterms[k].p;
                if (std::abs(q - 2.0) <= 1e-12) {
                    continue; // Coulomb^2, absorbed into a(a-1)
                }
                add_term(fr.terms, {-vterms[j].coeff * vterms[k].coeff, 0.0, 0.0, q});
            }
        }
    }
    std::sort(fr.terms.begin(), fr.terms.end(),
              [](const RemainderTerm& a, const RemainderTerm& b) { return a.q > b.q; });
    return fr;
}

StartValues start_values(const Frobenius& fr, Branch branch, double E, double r,
                         SeriesOrder order) {
    switch (branch) {
    case Branch::Plus: {
        const auto s = power_series(fr, fr.a_plus, E, r, order);
        return {r, s.u, s.du, s.correction};
    }
    case Branch::Minus: {
        if (fr.degenerate) {
            // second solution sqrt(r) log r
            const double sq = std::sqrt(r);
            return {r, sq * std::log(r), (0.5 * std::log(r) + 1.0) / sq, 0.0};
        }
        const auto s = power_series(fr, fr.a_minus, E, r, order);
        return {r, s.u, s.du, s.correction};
    }
    case Branch::Mixed:
        break;
    }

    const double c = std::cos(fr.theta);
    const double s = std::sin(fr.theta);
    const double L = fr.length;
    if (fr.degenerate) {
        const auto plus = power_series(fr, 0.5, E, r, order);
        const double sq = std::sqrt(r);
        const double lg = std::log(r / L);
        const double u = c * plus.u + s * sq * lg;
        const double du = c * plus.du + s * (0.5 * lg + 1.0) / sq;
        return {r, u, du, plus.correction};
    }
    const auto plus = power_series(fr, fr.a_plus, E, r, order);
    const auto minus = power_series(fr, fr.a_minus, E, r, order);
    const double wp = c * std::pow(L, -fr.a_plus);
    const double wm = -s * std::pow(L, -fr.a_minus);
    return {r, wp * plus.u + wm * minus.u, wp * plus.du + wm * minus.du,
            std::max(plus.correction, minus.correction)};
}

} // namespace radialbc::detail
