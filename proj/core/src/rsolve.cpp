#include "radialbc/rsolve.hpp"

#include "format.hpp"
#include "frobenius.hpp"
#include "shooter.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace radialbc {

using detail::fmt17;
using detail::Frobenius;
using detail::Shooter;

std::string describe(const BoundaryPolicy& policy) {
    if (std::holds_alternative<DirichletOrigin>(policy)) {
        return "dirichlet";
    }
    if (std::holds_alternative<L2Only>(policy)) {
        return "l2";
    }
    const auto& s = std::get<MixedSAE>(policy);
    return "sae:theta=" + fmt17(s.theta) + ",L=" + fmt17(s.length);
}

// --- analysis ----------------------------------------------------------------

ProblemAnalysis analyze(const RadialProblem& problem) {
    if (!(problem.mass > 0.0) || !std::isfinite(problem.mass)) {
        throw DomainError("mass must be finite and > 0");
    }
    if (problem.l < 0) {
        throw DomainError("angular momentum l must be >= 0");
    }
    const auto& g = problem.grid;
    if (g.n_points < RadialGrid::kMinPoints) {
        throw DomainError("grid needs at least " + std::to_string(RadialGrid::kMinPoints) + " points");
    }
    if (g.r0 < 0.0 || g.r_max < 0.0 || g.scale < 0.0 || (g.r0 > 0.0 && g.r_max > 0.0 && g.r0 >= g.r_max)) {
        throw DomainError("grid requires 0 < r0 < r_max");
    }
    if (problem.window && !(problem.window->lo < problem.window->hi)) {
        throw DomainError("energy window requires lo < hi");
    }

    ProblemAnalysis a;
    a.origin = origin_class(problem.potential);
    if (a.origin.kind == OriginClass::Kind::StronglySingular) {
        throw ClassificationError("potential '" + describe(problem.potential) +
                                  "' is strongly singular at the origin (|r^2 V| -> inf); "
                                  "only regular and transitive-singular potentials are solvable");
    }
    a.asymptote = asymptotic_value(problem.potential);

    if (problem.relativistic) {
        const auto terms = origin_terms(problem.potential);
        double coulomb = 0.0;
        for (const auto& t : terms) {
            if (t.p > 1.0 + 1e-12) {
                throw ClassificationError(
                    "Klein-Gordon reduction: (E - V)^2 is more singular than r^-2 for '" +
                    describe(problem.potential) + "'; only potentials up to 1/r are supported");
            }
            if (std::abs(t.p - 1.0) <= 1e-12) {
                coulomb = t.coeff;
            }
        }
        if (!std::isfinite(a.asymptote)) {
            throw DomainError("Klein-Gordon bound states need a finite V(r -> inf)");
        }
        a.indicial = indicial_from_coupling(problem.l, coulomb * coulomb);
    } else {
        a.indicial = solve_indicial(problem.l, problem.mass, a.origin);
    }
    if (a.indicial.fall_to_center()) {
        throw FallToCenterError(
            std::string(problem.relativistic ? "relativistic " : "") +
            "fall to the center: (l + 1/2)^2 = " + fmt17((problem.l + 0.5) * (problem.l + 0.5)) +
            " < " + (problem.relativistic ? "Z^2 = " : "2mV0 = ") + fmt17(a.indicial.two_m_V0) +
            "; the indicial exponent P is imaginary");
    }

    a.branch = Branch::Plus;
    if (const auto* sae = std::get_if<MixedSAE>(&problem.policy)) {
        if (!(sae->theta >= 0.0 && sae->theta < std::numbers::pi) || !(sae->length > 0.0) ||
            !std::isfinite(sae->length)) {
            throw DomainError("MixedSAE requires theta in [0, pi) and L > 0");
        }
        if (sae->theta != 0.0) {
            if (!a.indicial.minus_bc) {
                throw PolicyError("MixedSAE with theta != 0 requires 0 <= P < 1/2 (got P = " +
                                  fmt17(*a.indicial.P) +
                                  "); the admixed r^{1/2-P} branch violates u(0) = 0" +
                                  (a.indicial.minus_l2 ? "" : " and is not square integrable"));
            }
            a.branch = Branch::Mixed;
        }
    }

    a.length = natural_length(problem.potential, problem.mass);
    const auto terms = origin_terms(problem.potential);
    const bool scale_free =
        terms.empty() || (terms.size() == 1 && std::abs(terms.front().p - 2.0) < 1e-12);
    if (scale_free) {
        const auto* sae = std::get_if<MixedSAE>(&problem.policy);
        a.length = sae != nullptr ? sae->length : 1.0;
    }
    return a;
}

// --- grid resolution -----------------------------------------------------------

namespace {

constexpr double kDecayTarget = 40.0; // WKB exponent at r_max
constexpr double kR0Fraction = 1e-6;  // auto r0 relative to r_max
constexpr double kR0Correction = 1e-4;

double q_at(const RadialProblem& p, double E, double r) {
    const double v = evaluate(p.potential, r);
    const double cent = static_cast<double>(p.l) * (p.l + 1) / (r * r);
    if (p.relativistic) {
        return (E - v) * (E - v) - p.mass * p.mass - cent;
    }
    return 2.0 * p.mass * (E - v) - cent;
}

// max(3 r_tp, radius where the WKB decay exponent reaches kDecayTarget);
// +inf when E is not below the continuum.
double required_rmax(const RadialProblem& p, double length, double E) {
    const double r_lo = 1e-6 * length;
    const double r_hi = 1e7 * length;
    if (q_at(p, E, r_hi) >= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const int probes = 4000;
    const double ratio = std::pow(r_hi / r_lo, 1.0 / probes);
    double r_tp = 0.0;
    double r = r_hi;
    for (int k = 0; k < probes; ++k) {
        const double r_in = r / ratio;
        if (q_at(p, E, r_in) >= 0.0) {
            double a = r_in, b = r;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (a + b);
                (q_at(p, E, mid) >= 0.0 ? a : b) = mid;
            }
            r_tp = b;
            break;
        }
        r = r_in;
    }
    double start = r_tp > 0.0 ? r_tp : length;
    double acc = 0.0;
    double x = start;
    double dr = 1e-3 * start;
    double prev = std::sqrt(std::max(0.0, -q_at(p, E, x)));
    for (int it = 0; it < 2000000 && acc < kDecayTarget; ++it) {
        const double cur = std::sqrt(std::max(0.0, -q_at(p, E, x + dr)));
        acc += 0.5 * (prev + cur) * dr;
        x += dr;
        prev = cur;
        // keep ~200 steps per unit of decay exponent
        const double want = cur > 0.0 ? 0.005 / cur : 10.0 * dr;
        dr = std::clamp(want, 1e-3 * start, std::max(4.0 * dr, 1e-3 * start));
        dr = std::min(dr, 0.05 * x + 1e-3 * start);
    }
    return std::max(3.0 * r_tp, x);
}

// r such that the first-order Frobenius correction is kR0Correction at energy E
double correction_radius(const Frobenius& fr, double E) {
    double r_ok = std::numeric_limits<double>::infinity();
    for (const double a : {fr.a_plus, fr.a_minus}) {
        for (const auto& t : fr.terms) {
            const double d = t.at(E);
            const double sigma = 2.0 - t.q;
            const double denom = sigma * (2.0 * a + sigma - 1.0);
            if (d == 0.0 || std::abs(denom) < 1e-10) {
                continue;
            }
            const double c = std::abs(d / denom);
            r_ok = std::min(r_ok, std::pow(kR0Correction / c, 1.0 / sigma));
        }
    }
    return r_ok;
}

struct GridPlan {
    double r_max;
    double r0_shrink = 1.0;
};

RadialGrid make_grid(const RadialProblem& p, const Frobenius& fr, double r_max, double E_ref,
                     double r0_shrink) {
    const auto& s = p.grid;
    const double rm = s.r_max > 0.0 ? s.r_max : r_max;
    double r0 = s.r0;
    if (r0 <= 0.0) {
        r0 = std::min(kR0Fraction * rm, correction_radius(fr, E_ref)) * r0_shrink;
        r0 = std::max(r0, 1e-14 * rm);
    }
    const double scale = s.scale > 0.0 ? s.scale : rm / 20.0;
    return RadialGrid(r0, rm, s.n_points, scale);
}

double energy_scale(const RadialProblem& p, const ProblemAnalysis& a) {
    return 1.0 / (2.0 * p.mass * a.length * a.length);
}

} // namespace

// --- series ----------------------------------------------------------------------

StartValues series_start_at(const RadialProblem& problem, double E, Branch branch, double r,
                            SeriesOrder order) {
    const auto a = analyze(problem);
    if (branch == Branch::Mixed && a.branch != Branch::Mixed) {
        throw PolicyError("mixed start-off requires a MixedSAE policy with theta != 0");
    }
    if (branch == Branch::Minus) {
        const bool ok = (std::holds_alternative<L2Only>(problem.policy) && a.indicial.minus_l2) ||
                        (std::holds_alternative<MixedSAE>(problem.policy) && a.indicial.minus_bc);
        if (!ok) {
            throw PolicyError("the r^{1/2-P} branch is not admitted by policy '" +
                              describe(problem.policy) + "' at P = " + fmt17(*a.indicial.P));
        }
    }
    if (!(r > 0.0)) {
        throw DomainError("series start-off requires r > 0");
    }
    const auto fr = detail::make_frobenius(problem, a);
    const auto sv = detail::start_values(fr, branch, E, r, order);
    if (order == SeriesOrder::FirstCorrection && detail::omitted_term(sv) > detail::kStartOffTolerance) {
        throw StartOffError("Frobenius start-off: r0 = " + fmt17(r) +
                            " too large, omitted correction " + fmt17(detail::omitted_term(sv)) +
                            " exceeds 1e-6 relative; use a smaller r0");
    }
    return sv;
}

StartValues series_start(const RadialProblem& problem, double E, Branch branch, SeriesOrder order) {
    double r0 = problem.grid.r0;
    if (r0 <= 0.0) {
        const auto a = analyze(problem);
        const auto fr = detail::make_frobenius(problem, a);
        double rm = problem.grid.r_max;
        if (rm <= 0.0) {
            rm = required_rmax(problem, a.length, E);
            if (!std::isfinite(rm)) {
                rm = 40.0 * a.length;
            }
        }
        r0 = std::max(std::min(kR0Fraction * rm, correction_radius(fr, E)), 1e-14 * rm);
    }
    return series_start_at(problem, E, branch, r0, order);
}

// --- single sweep ------------------------------------------------------------------

Sweep numerov_sweep(const RadialProblem& problem, double E, Direction direction,
                    std::optional<double> match_radius) {
    const auto a = analyze(problem);
    const auto fr = detail::make_frobenius(problem, a);
    double rm = required_rmax(problem, a.length, E);
    if (!std::isfinite(rm)) {
        rm = 40.0 * a.length;
    }
    Shooter sh(problem, fr, a.branch, make_grid(problem, fr, rm, E, 1.0));
    const auto& grid = sh.grid();
    const std::size_t n = grid.size();
    const auto Q = sh.q_values(E);
    const auto f = sh.numerov_weights(Q);

    std::size_t m = sh.turning_index(Q);
    if (match_radius) {
        const auto it = std::lower_bound(grid.r().begin(), grid.r().end(), *match_radius);
        m = std::clamp<std::size_t>(static_cast<std::size_t>(it - grid.r().begin()), 3, n - 4);
    }

    Sweep out;
    out.direction = direction;
    out.grid = grid.settings();
    out.r.assign(grid.r().begin(), grid.r().end());
    out.match_index = m;
    out.match_radius = grid.r(m);
    std::vector<double> w(n, std::numeric_limits<double>::quiet_NaN());
    std::size_t first = 0, last = n - 1;
    if (direction == Direction::Outward) {
        sh.outward(E, f, n - 1, w, out.rescalings, false);
        out.nodes = sh.count_nodes(E);
    } else {
        first = m - 2;
        sh.inward(Q, f, first, w, out.rescalings);
    }
    out.u.assign(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = first; i <= last; ++i) {
        out.u[i] = std::sqrt(grid.jacobian(i)) * w[i];
    }
    if (direction == Direction::Inward) {
        int last_sign = 0;
        for (std::size_t i = first + 1; i < last; ++i) {
            const int sg = (out.u[i] > 0.0) - (out.u[i] < 0.0);
            if (sg != 0 && last_sign != 0 && sg != last_sign) {
                ++out.nodes;
            }
            if (sg != 0) {
                last_sign = sg;
            }
        }
    }
    // five-point derivative in x, converted with dr/dx
    const auto& u = out.u;
    const double dudx = (-u[m + 2] + 8.0 * u[m + 1] - 8.0 * u[m - 1] + u[m - 2]) / (12.0 * grid.step());
    out.log_derivative = dudx / grid.jacobian(m) / u[m];
    return out;
}

// --- level search ------------------------------------------------------------------

namespace {

struct Refined {
    double energy;
    int iterations;
};

// toms748 on the relative Wronskian inside [lo, hi] with a fixed matching index.
Refined refine(const Shooter& sh, double lo, double hi, std::size_t m, const Tolerances& tol,
               int budget, std::vector<BracketStep>& history) {
    const double d_lo = sh.defect(lo, m);
    const double d_hi = sh.defect(hi, m);
    if (d_lo == 0.0) {
        return {lo, 1};
    }
    if (d_hi == 0.0) {
        return {hi, 1};
    }
    std::uintmax_t iters = static_cast<std::uintmax_t>(std::max(budget, 1));
    const auto stop = [&tol](double a, double b) {
        return std::abs(b - a) <= std::max(0.25 * tol.energy, 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)));
    };
    const auto res = boost::math::tools::toms748_solve(
        [&](double E) { return sh.defect(E, m); }, lo, hi, d_lo, d_hi, stop, iters);
    history.push_back({res.first, res.second});
    if (!stop(res.first, res.second)) {
        throw ConvergenceError("match-defect refinement did not converge in " +
                                   std::to_string(budget) + " iterations",
                               history);
    }
    return {0.5 * (res.first + res.second), static_cast<int>(iters)};
}

LevelSolution finish(const Shooter& sh, double E, std::size_t m, int n_r, int iterations,
                     std::vector<BracketStep> history) {
    auto asm_ = sh.assemble(E, m);
    LevelSolution sol;
    sol.level = {n_r, E, asm_.defect, asm_.nodes};
    sol.r.assign(sh.grid().r().begin(), sh.grid().r().end());
    sol.u = std::move(asm_.u);
    sol.grid = sh.grid().settings();
    sol.iterations = iterations;
    sol.history = std::move(history);
    return sol;
}

LevelSolution find_level_schroedinger(const RadialProblem& p, const ProblemAnalysis& a,
                                      const Frobenius& fr, int n_r) {
    const double eps = energy_scale(p, a);
    const bool auto_rmax = p.grid.r_max <= 0.0;
    const bool auto_r0 = p.grid.r0 <= 0.0;
    const double r_cap_default = 1e6 * a.length;

    double r_max = 40.0 * a.length;
    double r_cap = r_cap_default;
    double E_ref = a.asymptote - eps;
    if (!std::isfinite(E_ref)) {
        E_ref = eps;
    }
    if (p.window) {
        E_ref = p.window->hi;
        const double need = required_rmax(p, a.length, p.window->hi);
        if (std::isfinite(need)) {
            r_max = std::min(need, r_cap_default);
            r_cap = r_max;
        }
    }
    double r0_shrink = 1.0;
    int total_iter = 0;
    std::vector<BracketStep> history;

    for (int attempt = 0; attempt < 16; ++attempt) {
        Shooter sh(p, fr, a.branch, make_grid(p, fr, r_max, E_ref, r0_shrink));
        const auto count = [&](double E) {
            ++total_iter;
            return sh.count_nodes(E);
        };

        double lo, hi;
        if (p.window) {
            lo = p.window->lo;
            hi = p.window->hi;
        } else {
            const auto Q0 = sh.q_values(0.0);
            // lowest point of the effective potential on the grid
            double vmin = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < sh.size(); ++i) {
                vmin = std::min(vmin, -Q0[i] / (2.0 * p.mass));
            }
            lo = std::min(vmin, std::isfinite(a.asymptote) ? a.asymptote : vmin) - eps;
            hi = std::isfinite(a.asymptote) ? a.asymptote : lo + 4.0 * eps;
            for (int k = 0; k < 60 && count(lo) > n_r; ++k) {
                lo -= 2.0 * (hi - lo);
            }
            if (!std::isfinite(a.asymptote)) {
                for (int k = 0; k < 60 && count(hi) <= n_r; ++k) {
                    hi += 2.0 * (hi - lo);
                }
            }
        }
        const int n_lo = count(lo);
        const int n_hi = count(hi);
        history.push_back({lo, hi});
        if (n_lo > n_r) {
            throw BracketError("energy window [" + fmt17(lo) + ", " + fmt17(hi) +
                                   "] does not bracket level n_r = " + std::to_string(n_r) +
                                   ": node count " + std::to_string(n_lo) + " at the lower edge",
                               n_lo, n_hi);
        }
        if (n_hi <= n_r) {
            if (auto_rmax && r_max < r_cap) {
                r_max = std::min(4.0 * r_max, r_cap);
                continue;
            }
            throw BracketError("no level with n_r = " + std::to_string(n_r) + " in [" + fmt17(lo) +
                                   ", " + fmt17(hi) + "]: node counts " + std::to_string(n_lo) +
                                   " and " + std::to_string(n_hi) + " at the window edges",
                               n_lo, n_hi);
        }

        // node bisection until the bracket hugs the level
        int n_b_lo = n_lo, n_b_hi = n_hi;
        while (true) {
            const double width = hi - lo;
            const double mid = 0.5 * (lo + hi);
            if (n_b_lo == n_r && n_b_hi == n_r + 1 &&
                width <= 1e-3 * std::max(eps, std::abs(mid)) &&
                (sh.q_values(hi).back() < 0.0 || (auto_rmax && r_max < r_cap))) {
                break;
            }
            if (total_iter > p.tol.max_iter) {
                throw ConvergenceError("node bisection exceeded " + std::to_string(p.tol.max_iter) +
                                           " iterations",
                                       history);
            }
            const int nm = count(mid);
            if (nm > n_r) {
                hi = mid;
                n_b_hi = nm;
            } else {
                lo = mid;
                n_b_lo = nm;
            }
            history.push_back({lo, hi});
        }

        if (sh.q_values(hi).back() >= 0.0) {
            r_max = std::min(4.0 * r_max, r_cap);
            continue;
        }
        const double mid = 0.5 * (lo + hi);
        const std::size_t m = sh.turning_index(sh.q_values(mid));
        double E;
        try {
            const auto ref = refine(sh, lo, hi, m, p.tol, p.tol.max_iter - total_iter, history);
            total_iter += ref.iterations;
            E = ref.energy;
        } catch (const StartOffError&) {
            if (auto_r0 && r0_shrink > 1e-6) {
                r0_shrink *= 0.1;
                continue;
            }
            throw;
        } catch (const NotBoundRegimeError&) {
            if (auto_rmax && r_max < r_cap) {
                r_max = std::min(4.0 * r_max, r_cap);
                continue;
            }
            throw;
        } catch (const std::domain_error&) {
            // defect has equal signs at both ends: level sits outside the node bracket
            if (auto_rmax && r_max < r_cap) {
                r_max = std::min(2.0 * r_max, r_cap);
                continue;
            }
            throw ConvergenceError("match defect does not change sign across the node bracket [" +
                                       fmt17(lo) + ", " + fmt17(hi) + "]",
                                   history);
        }

        if (auto_rmax) {
            const double need = required_rmax(p, a.length, E);
            if (std::isfinite(need) && r_max < 0.9 * need && r_max < r_cap) {
                r_max = std::min(1.1 * need, r_cap);
                E_ref = E;
                continue;
            }
        }
        if (auto_r0) {
            const double want = correction_radius(fr, E);
            if (sh.grid().r0() > want && r0_shrink > 1e-6) {
                E_ref = E;
                r0_shrink *= 0.1;
                continue;
            }
        }
        auto sol = finish(sh, E, m, n_r, total_iter, std::move(history));
        if (sol.level.node_count != n_r) {
            throw ConvergenceError("converged wavefunction has " +
                                   std::to_string(sol.level.node_count) + " nodes, expected " +
                                   std::to_string(n_r));
        }
        return sol;
    }
    throw ConvergenceError("grid adaptation did not settle for level n_r = " + std::to_string(n_r),
                           history);
}

LevelSolution find_level_kg(const RadialProblem& p, const ProblemAnalysis& a, const Frobenius& fr,
                            int n_r) {
    const double m = p.mass;
    const bool auto_rmax = p.grid.r_max <= 0.0;
    const double lo_edge = p.window ? p.window->lo : a.asymptote - m;
    const double hi_edge = p.window ? p.window->hi : a.asymptote + m;
    const double r_cap = 1e6 * a.length;
    double r_max = 40.0 * a.length;
    double E_ref = a.asymptote;
    int total_iter = 0;
    std::vector<BracketStep> history;

    for (int attempt = 0; attempt < 16; ++attempt) {
        Shooter sh(p, fr, a.branch, make_grid(p, fr, r_max, E_ref, 1.0));
        std::optional<LevelSolution> found;
        int highest_nodes = -1;

        int previous_roots = -1;
        for (int samples = 64; samples <= 4096 && !found; samples *= 2) {
            int roots = 0;
            std::vector<double> E(samples), D(samples);
            std::vector<std::size_t> M(samples);
            for (int k = 0; k < samples; ++k) {
                const double phi = std::numbers::pi * (k + 0.5) / samples;
                E[samples - 1 - k] = a.asymptote + m * std::cos(phi);
            }
            for (int k = 0; k < samples; ++k) {
                D[k] = std::numeric_limits<double>::quiet_NaN();
                if (E[k] <= lo_edge || E[k] >= hi_edge) {
                    continue;
                }
                const auto Q = sh.q_values(E[k]);
                if (!(Q.back() < 0.0)) {
                    continue;
                }
                M[k] = sh.turning_index(Q);
                D[k] = sh.defect(E[k], M[k]);
                ++total_iter;
            }
            for (int k = 0; k + 1 < samples && !found; ++k) {
                if (!std::isfinite(D[k]) || !std::isfinite(D[k + 1]) || D[k] * D[k + 1] > 0.0) {
                    continue;
                }
                std::vector<BracketStep> local;
                const auto ref = refine(sh, E[k], E[k + 1], M[k], p.tol, p.tol.max_iter, local);
                total_iter += ref.iterations;
                auto sol = finish(sh, ref.energy, M[k], n_r, total_iter, local);
                if (!(std::abs(sol.level.match_defect) <= 1e-6)) {
                    continue; // sign jump where the defect normalisation vanishes
                }
                ++roots;
                highest_nodes = std::max(highest_nodes, sol.level.node_count);
                if (sol.level.node_count == n_r) {
                    history.insert(history.end(), local.begin(), local.end());
                    sol.history = history;
                    found = std::move(sol);
                }
            }
            // finer sampling only pays off while it keeps resolving new roots
            if (samples >= 256 && roots == previous_roots) {
                break;
            }
            previous_roots = roots;
        }

        if (!found) {
            if (auto_rmax && r_max < r_cap) {
                r_max = std::min(4.0 * r_max, r_cap);
                continue;
            }
            throw BracketError("Klein-Gordon sign scan found no level with n_r = " +
                                   std::to_string(n_r) + " in (" + fmt17(lo_edge) + ", " +
                                   fmt17(hi_edge) + ")",
                               -1, highest_nodes);
        }
        if (auto_rmax) {
            const double need = required_rmax(p, a.length, found->level.energy);
            if (std::isfinite(need) && r_max < 0.9 * need && r_max < r_cap) {
                r_max = std::min(1.1 * need, r_cap);
                E_ref = found->level.energy;
                continue;
            }
        }
        found->iterations = total_iter;
        return std::move(*found);
    }
    throw ConvergenceError("grid adaptation did not settle for Klein-Gordon level n_r = " +
                           std::to_string(n_r));
}

} // namespace

LevelSolution find_level(const RadialProblem& problem, int n_r) {
    if (n_r < 0) {
        throw DomainError("node count n_r must be >= 0");
    }
    const auto a = analyze(problem);
    const auto fr = detail::make_frobenius(problem, a);
    if (problem.relativistic) {
        return find_level_kg(problem, a, fr, n_r);
    }
    return find_level_schroedinger(problem, a, fr, n_r);
}

EigenResult spectrum(const RadialProblem& problem, int n_levels) {
    if (n_levels < 1) {
        throw DomainError("n_levels must be >= 1");
    }
    EigenResult res;
    res.policy = describe(problem.policy);
    for (int n_r = 0; n_r < n_levels; ++n_r) {
        try {
            auto sol = find_level(problem, n_r);
            res.iterations += sol.iterations;
            res.levels.push_back(sol.level);
            res.solutions.push_back(std::move(sol));
        } catch (const BracketError& e) {
            if (n_r == 0) {
                throw;
            }
            res.absent.push_back({n_r, e.what()});
        } catch (const ConvergenceError& e) {
            if (n_r == 0) {
                throw;
            }
            res.absent.push_back({n_r, e.what()});
        }
    }
    return res;
}

// --- Klein-Gordon --------------------------------------------------------------------

KgCoefficient::KgCoefficient(PotentialModel potential, double mass, int l, double energy)
    : potential_(std::move(potential)), mass_(mass), l_(l), energy_(energy) {}

double KgCoefficient::operator()(double r) const {
    const double k = energy_ - evaluate(potential_, r);
    return k * k - mass_ * mass_ - static_cast<double>(l_) * (l_ + 1) / (r * r);
}

KgCoefficient kg_effective(const RadialProblem& problem, double E) {
    if (!problem.relativistic) {
        throw DomainError("kg_effective requires a relativistic problem");
    }
    analyze(problem);
    return KgCoefficient(problem.potential, problem.mass, problem.l, E);
}

} // namespace radialbc
