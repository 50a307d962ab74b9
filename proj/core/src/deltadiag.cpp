#include "radialbc/deltadiag.hpp"

#include "format.hpp"
#include "radialbc/errors.hpp"
#include "radialbc/indicial.hpp"
#include "radialbc/rsolve.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace radialbc {

using detail::fmt17;

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::SourceFree:
        return "source-free";
    case Verdict::PointSource:
        return "point-source";
    case Verdict::Inconclusive:
        return "inconclusive";
    }
    return "unknown";
}

CandidateU sampled_candidate(const LevelSolution& solution, int l, double energy,
                             const PotentialModel& potential, double mass) {
    return CandidateU{SampledForm{solution.r, solution.u}, l, energy, potential, mass};
}

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

struct ValueSlope {
    double u;
    double du;
};

void validate(const CandidateU& c) {
    if (c.l < 0) {
        throw DomainError("candidate l must be >= 0");
    }
    if (!(c.mass > 0.0)) {
        throw DomainError("candidate mass must be > 0");
    }
    if (const auto* p = std::get_if<PowerForm>(&c.form)) {
        if (!(p->a >= 0.0)) {
            throw DomainError("candidate exponent a = " + fmt17(p->a) +
                              " < 0 is not finite at the origin");
        }
    } else if (const auto* pp = std::get_if<PowerPairForm>(&c.form)) {
        if (!(pp->a1 >= 0.0) || !(pp->a2 >= 0.0)) {
            throw DomainError("candidate exponents must be >= 0");
        }
    } else {
        const auto& s = std::get<SampledForm>(c.form);
        if (s.r.size() != s.u.size() || s.r.size() < 5) {
            throw DomainError("sampled candidate needs at least 5 (r, u) pairs of equal length");
        }
        for (std::size_t i = 0; i < s.r.size(); ++i) {
            if (!std::isfinite(s.r[i]) || !std::isfinite(s.u[i]) || !(s.r[i] > 0.0) ||
                (i > 0 && !(s.r[i] > s.r[i - 1]))) {
                throw DomainError("sampled candidate values must be finite on an increasing r > 0 mesh");
            }
        }
    }
}

ValueSlope lagrange5(const SampledForm& s, double r) {
    const std::size_t n = s.r.size();
    const auto it = std::upper_bound(s.r.begin(), s.r.end(), r);
    const std::size_t j = it == s.r.begin() ? 0 : static_cast<std::size_t>(it - s.r.begin()) - 1;
    const std::size_t lo = std::min(j >= 2 ? j - 2 : 0, n - 5);
    const double* x = &s.r[lo];
    const double* y = &s.u[lo];
    ValueSlope out{0.0, 0.0};
    for (int i = 0; i < 5; ++i) {
        double w = 1.0;
        for (int k = 0; k < 5; ++k) {
            if (k != i) {
                w *= (r - x[k]) / (x[i] - x[k]);
            }
        }
        double dw = 0.0;
        for (int m = 0; m < 5; ++m) {
            if (m == i) {
                continue;
            }
            double t = 1.0 / (x[i] - x[m]);
            for (int k = 0; k < 5; ++k) {
                if (k != i && k != m) {
                    t *= (r - x[k]) / (x[i] - x[k]);
                }
            }
            dw += t;
        }
        out.u += y[i] * w;
        out.du += y[i] * dw;
    }
    return out;
}

// exponent of the leading small-r power of u
double head_exponent(const SampledForm& s) {
    if (s.u[0] == 0.0 || s.u[0] * s.u[1] <= 0.0) {
        return 1.0;
    }
    return std::log(s.u[1] / s.u[0]) / std::log(s.r[1] / s.r[0]);
}

// u below the first sample: c1 r^a1 + c2 r^a2
struct HeadModel {
    double c1, a1, c2, a2;
};

// Both indicial branches when they are finite at the origin and reproduce the
// samples; otherwise a single power with the measured exponent.
HeadModel head_model(const CandidateU& c, const SampledForm& s) {
    const double alpha = head_exponent(s);
    const HeadModel single{s.u[0] / std::pow(s.r[0], alpha), alpha, 0.0, 0.0};
    IndicialReport rep;
    try {
        rep = solve_indicial(c.l, c.mass, origin_class(c.potential));
    } catch (const Error&) {
        return single;
    }
    if (rep.fall_to_center() || rep.degenerate || !(rep.a_minus >= 0.0)) {
        return single;
    }
    std::size_t j = 1;
    while (j + 1 < s.r.size() && s.r[j] < 2.0 * s.r[0]) {
        ++j;
    }
    if (j < 2) {
        return single;
    }
    const double ap = rep.a_plus, am = rep.a_minus;
    const double p0 = std::pow(s.r[0], ap), m0 = std::pow(s.r[0], am);
    const double pj = std::pow(s.r[j], ap), mj = std::pow(s.r[j], am);
    const double det = p0 * mj - pj * m0;
    if (det == 0.0) {
        return single;
    }
    const double A = (s.u[0] * mj - s.u[j] * m0) / det;
    const double B = (p0 * s.u[j] - pj * s.u[0]) / det;
    const std::size_t k = j / 2;
    const double predicted = A * std::pow(s.r[k], ap) + B * std::pow(s.r[k], am);
    if (std::abs(predicted - s.u[k]) > 1e-4 * std::abs(s.u[k])) {
        return single;
    }
    // a small r^a_minus part is the plus branch's own series correction, not an admixture
    if (std::abs(B * m0) < 1e-2 * std::abs(s.u[0])) {
        return single;
    }
    return {A, ap, B, am};
}

ValueSlope value_slope(const CandidateU& c, double r, const HeadModel* head = nullptr) {
    if (const auto* p = std::get_if<PowerForm>(&c.form)) {
        const double v = p->c * std::pow(r, p->a);
        return {v, p->a * v / r};
    }
    if (const auto* pp = std::get_if<PowerPairForm>(&c.form)) {
        const double v1 = pp->c1 * std::pow(r, pp->a1);
        const double v2 = pp->c2 * std::pow(r, pp->a2);
        return {v1 + v2, (pp->a1 * v1 + pp->a2 * v2) / r};
    }
    const auto& s = std::get<SampledForm>(c.form);
    if (r < s.r[0]) {
        const HeadModel h = head ? *head : head_model(c, s);
        const double v1 = h.c1 * std::pow(r, h.a1);
        const double v2 = h.c2 * std::pow(r, h.a2);
        return {v1 + v2, (h.a1 * v1 + h.a2 * v2) / r};
    }
    return lagrange5(s, r);
}

// smallest exponent present in u near the origin
double lowest_exponent(const CandidateU& c, const HeadModel* head) {
    if (const auto* p = std::get_if<PowerForm>(&c.form)) {
        return p->c == 0.0 ? std::numeric_limits<double>::infinity() : p->a;
    }
    double c1, a1, c2, a2;
    if (const auto* pp = std::get_if<PowerPairForm>(&c.form)) {
        c1 = pp->c1, a1 = pp->a1, c2 = pp->c2, a2 = pp->a2;
    } else {
        c1 = head->c1, a1 = head->a1, c2 = head->c2, a2 = head->a2;
    }
    double e = std::numeric_limits<double>::infinity();
    if (c1 != 0.0) {
        e = std::min(e, a1);
    }
    if (c2 != 0.0) {
        e = std::min(e, a2);
    }
    return e;
}

// leading singular power q of 2m(E - V) - l(l+1)/r^2 ~ r^-q
double bracket_power(const CandidateU& c) {
    double q = 0.0;
    double inv_sq = static_cast<double>(c.l) * (c.l + 1);
    for (const auto& t : origin_terms(c.potential)) {
        if (std::abs(t.p - 2.0) < 1e-12) {
            inv_sq += 2.0 * c.mass * t.coeff;
        } else if (t.p > 0.0) {
            q = std::max(q, t.p);
        }
    }
    if (std::abs(inv_sq) > 1e-14) {
        q = std::max(q, 2.0);
    }
    return q;
}

} // namespace

double sphere_residual(const CandidateU& candidate, double a) {
    validate(candidate);
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError("sphere radius must be finite and > 0");
    }
    if (const auto* s = std::get_if<SampledForm>(&candidate.form); s && a > s->r.back()) {
        throw DomainError("sphere radius " + fmt17(a) + " lies beyond the sampled range");
    }

    const auto* sampled = std::get_if<SampledForm>(&candidate.form);
    std::optional<HeadModel> head;
    if (sampled) {
        head = head_model(candidate, *sampled);
    }
    const HeadModel* hp = head ? &*head : nullptr;
    const double alpha = lowest_exponent(candidate, hp);
    const double q = bracket_power(candidate);
    const double e1 = std::isfinite(alpha) ? 2.0 + alpha - q : 2.0;
    if (e1 <= 0.0) {
        throw DivergentVolumeError("volume term diverges: integrand ~ r^" + fmt17(e1 - 1.0) +
                                   " at the origin (u ~ r^" + fmt17(alpha) +
                                   " against an r^-" + fmt17(q) +
                                   " coefficient); the candidate does not solve the equation near 0");
    }

    const auto surface = value_slope(candidate, a, hp);
    const double S_surface = kFourPi * (a * surface.du - surface.u);

    const double two_m = 2.0 * candidate.mass;
    const double ll = static_cast<double>(candidate.l) * (candidate.l + 1);
    const auto integrand = [&](double r) {
        if (r <= 0.0) {
            return 0.0;
        }
        const double u = value_slope(candidate, r, hp).u;
        return kFourPi * r * (two_m * (candidate.energy - evaluate(candidate.potential, r)) - ll / (r * r)) * u;
    };
    // r = t^k turns the leading r^(e1-1) behaviour into a constant in t
    const double k = e1 < 1.0 ? 1.0 / e1 : 2.0;
    const auto substituted = [&](double t) {
        if (t <= 0.0) {
            return 0.0;
        }
        const double r = std::pow(t, k);
        return integrand(r) * k * r / t;
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double head_end = sampled ? std::min(a, sampled->r.front()) : a;
    double error = 0.0;
    double l1 = 0.0;
    double S_volume = GK::integrate(substituted, 0.0, std::pow(head_end, 1.0 / k), 10, 1e-12, &error, &l1);
    if (!std::isfinite(S_volume) || error > 1e-6 * l1 + 1e-300) {
        throw DivergentVolumeError("volume quadrature did not converge at a = " + fmt17(a) +
                                   " (error estimate " + fmt17(error) + ")");
    }
    if (sampled && a > head_end) {
        // the interpolant is one polynomial per mesh interval
        const auto& r = sampled->r;
        for (std::size_t i = 0; i + 1 < r.size() && r[i] < a; ++i) {
            S_volume += GK::integrate(integrand, r[i], std::min(r[i + 1], a), 0);
        }
    }
    return S_surface + S_volume;
}

ResidualReport residual_limit(const CandidateU& candidate, double a_start, double ratio,
                              int n_steps) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw DomainError("ratio must lie in (0, 1)");
    }
    if (n_steps < 4) {
        throw DomainError("n_steps must be >= 4");
    }
    if (!(a_start > 0.0)) {
        throw DomainError("a_start must be > 0");
    }
    ResidualReport rep;
    double a = a_start;
    for (int k = 0; k < n_steps; ++k) {
        rep.radii.push_back(a);
        rep.S_values.push_back(sphere_residual(candidate, a));
        a *= ratio;
    }
    const auto& S = rep.S_values;
    const std::size_t n = S.size();
    rep.tol_S = 1e-6 * (1.0 + std::abs(S.front()));

    const double s_last = S[n - 1];
    const double d1 = S[n - 2] - S[n - 3];
    const double d2 = S[n - 1] - S[n - 2];
    const double flat = 1e-14 * (1.0 + std::abs(s_last));
    rep.order = std::numeric_limits<double>::quiet_NaN();
    bool converged = true;
    if (std::abs(d1) <= flat && std::abs(d2) <= flat) {
        rep.S_limit = s_last;
    } else if (d1 * d2 > 0.0 && std::abs(d2) < std::abs(d1)) {
        const double p = std::log(d1 / d2) / std::log(1.0 / ratio);
        const double rp = std::pow(ratio, p);
        rep.order = p;
        rep.S_limit = s_last + d2 * rp / (1.0 - rp);
    } else {
        rep.S_limit = s_last;
        converged = std::max(std::abs(d1), std::abs(d2)) < rep.tol_S;
    }

    if (!converged) {
        rep.verdict = Verdict::Inconclusive;
    } else if (std::abs(rep.S_limit) < rep.tol_S) {
        rep.verdict = Verdict::SourceFree;
    } else {
        rep.verdict = Verdict::PointSource;
        rep.strength = rep.S_limit;
    }
    return rep;
}

} // namespace radialbc
