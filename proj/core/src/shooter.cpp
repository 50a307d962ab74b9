#include "shooter.hpp"

#include "format.hpp"

#include <algorithm>
#include <cmath>

namespace radialbc::detail {

namespace {

// start values are only trusted for sign structure beyond this correction
constexpr double kLenientCorrection = 0.1;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

} // namespace

Shooter::Shooter(const RadialProblem& problem, Frobenius frobenius, Branch branch, RadialGrid grid)
    : fr_(std::move(frobenius)),
      branch_(branch),
      grid_(std::move(grid)),
      mass_(problem.mass),
      relativistic_(problem.relativistic),
      overflow_(problem.tol.overflow) {
    const std::size_t n = grid_.size();
    v_.resize(n);
    centrifugal_.resize(n);
    const double ll = static_cast<double>(problem.l) * (problem.l + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid_.r(i);
        v_[i] = evaluate(problem.potential, r);
        centrifugal_[i] = ll / (r * r);
    }
}

std::vector<double> Shooter::q_values(double E) const {
    std::vector<double> Q(size());
    if (relativistic_) {
        const double m2 = mass_ * mass_;
        for (std::size_t i = 0; i < Q.size(); ++i) {
            const double k = E - v_[i];
            Q[i] = k * k - m2 - centrifugal_[i];
        }
    } else {
        const double two_m = 2.0 * mass_;
        for (std::size_t i = 0; i < Q.size(); ++i) {
            Q[i] = two_m * (E - v_[i]) - centrifugal_[i];
        }
    }
    return Q;
}

std::vector<double> Shooter::numerov_weights(std::span<const double> Q) const {
    std::vector<double> f(Q.size());
    const double h2 = grid_.step() * grid_.step() / 12.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double j = grid_.jacobian(i);
        f[i] = 1.0 + h2 * j * j * (Q[i] - grid_.half_schwarzian(i));
    }
    return f;
}

std::size_t Shooter::turning_index(std::span<const double> Q) const {
    const std::size_t n = Q.size();
    std::size_t m = n / 2;
    for (std::size_t i = n; i-- > 0;) {
        if (Q[i] >= 0.0) {
            m = i;
            break;
        }
    }
    return std::clamp<std::size_t>(m, 3, n - 4);
}

StartValues Shooter::start(double E, double r, bool strict) const {
    if (strict) {
        const auto sv = start_values(fr_, branch_, E, r, SeriesOrder::FirstCorrection);
        if (omitted_term(sv) > kStartOffTolerance) {
            throw StartOffError("Frobenius start-off: omitted correction " +
                                fmt17(omitted_term(sv)) + " at r0 = " + fmt17(r) +
                                " exceeds 1e-6; use a smaller r0");
        }
        return sv;
    }
    try {
        const auto sv = start_values(fr_, branch_, E, r, SeriesOrder::FirstCorrection);
        if (sv.correction <= kLenientCorrection) {
            return sv;
        }
    } catch (const StartOffError&) {
    }
    return start_values(fr_, branch_, E, r, SeriesOrder::Leading);
}

void Shooter::outward(double E, std::span<const double> f, std::size_t stop,
                      std::vector<double>& w, int& rescalings, bool strict,
                      double* omitted) const {
    const auto s0 = start(E, grid_.r(0), strict);
    const auto s1 = start(E, grid_.r(1), strict);
    if (omitted != nullptr) {
        *omitted = omitted_term(s0);
    }
    w[0] = s0.u / std::sqrt(grid_.jacobian(0));
    w[1] = s1.u / std::sqrt(grid_.jacobian(1));
    for (std::size_t i = 1; i < stop; ++i) {
        w[i + 1] = ((12.0 - 10.0 * f[i]) * w[i] - f[i - 1] * w[i - 1]) / f[i + 1];
        if (std::abs(w[i + 1]) > overflow_) {
            const double s = 1.0 / overflow_;
            for (std::size_t k = 0; k <= i + 1; ++k) {
                w[k] *= s;
            }
            ++rescalings;
        }
    }
}

void Shooter::inward(std::span<const double> Q, std::span<const double> f, std::size_t stop,
                     std::vector<double>& w, int& rescalings) const {
    const std::size_t n = size();
    if (!(Q[n - 1] < 0.0) || !(Q[n - 2] < 0.0)) {
        throw NotBoundRegimeError("inward sweep needs a decaying tail: Q(r_max) = " +
                                  fmt17(Q[n - 1]) + " >= 0 (energy above the continuum edge)");
    }
    const double kappa = 0.5 * (std::sqrt(-Q[n - 1]) + std::sqrt(-Q[n - 2]));
    const double u1 = 1.0;
    const double u2 = std::exp(kappa * (grid_.r(n - 1) - grid_.r(n - 2)));
    w[n - 1] = u1 / std::sqrt(grid_.jacobian(n - 1));
    w[n - 2] = u2 / std::sqrt(grid_.jacobian(n - 2));
    for (std::size_t i = n - 2; i > stop; --i) {
        w[i - 1] = ((12.0 - 10.0 * f[i]) * w[i] - f[i + 1] * w[i + 1]) / f[i - 1];
        if (std::abs(w[i - 1]) > overflow_) {
            const double s = 1.0 / overflow_;
            for (std::size_t k = i - 1; k < n; ++k) {
                w[k] *= s;
            }
            ++rescalings;
        }
    }
}

int Shooter::count_nodes(double E) const {
    const auto Q = q_values(E);
    const auto f = numerov_weights(Q);
    const std::size_t n = size();

    // F < 0 (f < 1) on [forbidden_from, n)
    std::size_t forbidden_from = n;
    while (forbidden_from > 0 && f[forbidden_from - 1] < 1.0) {
        --forbidden_from;
    }

    const auto s0 = start(E, grid_.r(0), false);
    const auto s1 = start(E, grid_.r(1), false);
    double w_prev = s0.u / std::sqrt(grid_.jacobian(0));
    double w_cur = s1.u / std::sqrt(grid_.jacobian(1));
    int nodes = 0;
    int last_sign = sign_of(w_cur) != 0 ? sign_of(w_cur) : sign_of(w_prev);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double w_next = ((12.0 - 10.0 * f[i]) * w_cur - f[i - 1] * w_prev) / f[i + 1];
        const int sg = sign_of(w_next);
        if (i + 1 < n - 1 && sg != 0 && last_sign != 0 && sg != last_sign) {
            ++nodes;
        }
        if (sg != 0) {
            last_sign = sg;
        }
        w_prev = w_cur;
        w_cur = w_next;
        if (i + 1 >= forbidden_from && w_cur * (w_cur - w_prev) > 0.0) {
            break;
        }
        if (std::abs(w_cur) > overflow_) {
            w_prev /= overflow_;
            w_cur /= overflow_;
        }
    }
    return nodes;
}

double Shooter::defect(double E, std::size_t m) const {
    const auto Q = q_values(E);
    const auto f = numerov_weights(Q);
    std::vector<double> wo(size()), wi(size());
    int resc = 0;
    outward(E, f, m + 1, wo, resc, true);
    inward(Q, f, m, wi, resc);
    const double a = f[m] * wo[m] * f[m + 1] * wi[m + 1];
    const double b = f[m + 1] * wo[m + 1] * f[m] * wi[m];
    const double denom = std::abs(a) + std::abs(b);
    return denom > 0.0 ? (a - b) / denom : 0.0;
}

Shooter::Assembled Shooter::assemble(double E, std::size_t m) const {
    const auto Q = q_values(E);
    const auto f = numerov_weights(Q);
    const std::size_t n = size();
    std::vector<double> wo(n), wi(n);
    Assembled out;
    outward(E, f, m + 1, wo, out.rescalings, true, &out.start_omitted);
    inward(Q, f, m, wi, out.rescalings);
    {
        const double a = f[m] * wo[m] * f[m + 1] * wi[m + 1];
        const double b = f[m + 1] * wo[m + 1] * f[m] * wi[m];
        const double denom = std::abs(a) + std::abs(b);
        out.defect = denom > 0.0 ? (a - b) / denom : 0.0;
    }

    const double scale_out = 1.0 / std::abs(wo[m]);
    const double scale_in = (wo[m] * scale_out) / wi[m];
    out.u.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = i <= m ? wo[i] * scale_out : wi[i] * scale_in;
        out.u[i] = std::sqrt(grid_.jacobian(i)) * w;
    }
    const double phase = out.u[1] < 0.0 ? -1.0 : 1.0;

    std::vector<double> u2(n);
    for (std::size_t i = 0; i < n; ++i) {
        u2[i] = out.u[i] * out.u[i];
    }
    double norm = grid_.integrate(u2);
    // [0, r0]: u ~ r^alpha
    const double r0 = grid_.r(0);
    const double r1 = grid_.r(1);
    if (out.u[0] != 0.0 && out.u[0] * out.u[1] > 0.0) {
        const double alpha = std::log(out.u[1] / out.u[0]) / std::log(r1 / r0);
        if (2.0 * alpha + 1.0 > 0.0) {
            norm += u2[0] * r0 / (2.0 * alpha + 1.0);
        }
    }
    // [r_max, inf): u ~ exp(-kappa r)
    norm += u2[n - 1] / (2.0 * std::sqrt(-Q[n - 1]));

    const double s = phase / std::sqrt(norm);
    int last_sign = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out.u[i] *= s;
        if (i == 0 || i == n - 1) {
            continue;
        }
        const int sg = sign_of(out.u[i]);
        if (sg != 0 && last_sign != 0 && sg != last_sign) {
            ++out.nodes;
        }
        if (sg != 0) {
            last_sign = sg;
        }
    }
    return out;
}

} // namespace radialbc::detail
