#include "radialbc/rsolve.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <future>
#include <numbers>
#include <vector>

using namespace radialbc;

namespace {

RadialProblem coulomb(double Z = 1.0, int l = 0) {
    RadialProblem p;
    p.potential = Coulomb{Z};
    p.l = l;
    return p;
}

RadialProblem harmonic(int l = 0) {
    RadialProblem p;
    p.potential = Harmonic{1.0, 1.0};
    p.l = l;
    return p;
}

// trapezoid in r on the (nonuniform) mesh
double trapezoid(const std::vector<double>& r, const std::vector<double>& f) {
    double s = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i) {
        s += 0.5 * (f[i] + f[i - 1]) * (r[i] - r[i - 1]);
    }
    return s;
}

int sign_changes(const std::vector<double>& u) {
    int n = 0;
    int last = 0;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const int s = (u[i] > 0) - (u[i] < 0);
        if (s != 0 && last != 0 && s != last) {
            ++n;
        }
        if (s != 0) {
            last = s;
        }
    }
    return n;
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST(FindLevel, CoulombSpectrum) {
    const auto res = spectrum(coulomb(), 3);
    ASSERT_EQ(res.levels.size(), 3u);
    for (int n = 0; n < 3; ++n) {
        const double exact = -0.5 / ((n + 1.0) * (n + 1.0));
        EXPECT_NEAR(res.levels[n].energy, exact, 1e-6);
        EXPECT_NEAR(res.levels[n].energy / exact, 1.0, 1e-5);
    }
}

TEST(FindLevel, CoulombHigherL) {
    // E = -Z^2 / (2 (n_r + l + 1)^2)
    for (int l = 1; l <= 2; ++l) {
        const auto s = find_level(coulomb(2.0, l), 1);
        EXPECT_NEAR(s.level.energy, -4.0 / (2.0 * (l + 2.0) * (l + 2.0)), 1e-7);
    }
}

TEST(FindLevel, HarmonicSpectrum) {
    for (int l = 0; l <= 2; ++l) {
        const auto res = spectrum(harmonic(l), 3);
        for (int n = 0; n < 3; ++n) {
            EXPECT_NEAR(res.levels[n].energy, 2.0 * n + l + 1.5, 1e-6) << "l=" << l << " n=" << n;
        }
    }
}

TEST(FindLevel, DeepWellApproachesBoxLimit) {
    // finite spherical well: k cot(k a) = -kappa, with k^2 + kappa^2 = 2 m depth
    const auto finite_well = [](double depth) {
        double lo = 0.5 * std::numbers::pi + 1e-12, hi = std::numbers::pi - 1e-12;
        for (int it = 0; it < 200; ++it) {
            const double k = 0.5 * (lo + hi);
            const double kappa = std::sqrt(2.0 * depth - k * k);
            (k / std::tan(k) + kappa > 0.0 ? lo : hi) = k;
        }
        const double k = 0.5 * (lo + hi);
        return 0.5 * k * k - depth;
    };
    double previous = 0.0;
    for (const double depth : {50.0, 500.0, 5000.0}) {
        RadialProblem p;
        p.potential = SphericalWell{depth, 1.0};
        p.grid.n_points = 40000;
        const auto s = find_level(p, 0);
        const double oracle = finite_well(depth);
        EXPECT_NEAR(s.level.energy, oracle, 2e-4 * std::abs(oracle) + 1e-3) << "depth " << depth;
        const double binding = s.level.energy + depth;
        EXPECT_LT(binding, std::numbers::pi * std::numbers::pi / 2.0);
        EXPECT_GT(binding, previous);
        previous = binding;
    }
    EXPECT_NEAR(previous, std::numbers::pi * std::numbers::pi / 2.0, 0.15);
}

TEST(FindLevel, SturmOrderingAndNodes) {
    for (const auto& p : {coulomb(1.0, 0), coulomb(1.0, 1), harmonic(0), harmonic(2)}) {
        const auto res = spectrum(p, 4);
        ASSERT_EQ(res.levels.size(), 4u);
        for (int n = 0; n < 4; ++n) {
            EXPECT_EQ(res.levels[n].node_count, n);
            EXPECT_EQ(sign_changes(res.solutions[n].u), n);
            if (n > 0) {
                EXPECT_LT(res.levels[n - 1].energy, res.levels[n].energy);
            }
        }
    }
}

TEST(FindLevel, NormalizationPhaseAndDefect) {
    for (const auto& p : {coulomb(), harmonic(1)}) {
        const auto res = spectrum(p, 3);
        for (const auto& s : res.solutions) {
            std::vector<double> u2(s.u.size());
            for (std::size_t i = 0; i < u2.size(); ++i) {
                u2[i] = s.u[i] * s.u[i];
            }
            EXPECT_NEAR(trapezoid(s.r, u2), 1.0, 1e-6);
            EXPECT_GT(s.u[1], 0.0);
            EXPECT_LT(std::abs(s.level.match_defect), p.tol.match);
        }
    }
}

TEST(FindLevel, GridRefinementMovesEnergyLittle) {
    const auto base = find_level(coulomb(), 1);
    auto p = coulomb();
    p.grid.n_points = 2 * base.grid.n_points;
    p.grid.r0 = base.grid.r0 / 2.0;
    p.grid.r_max = base.grid.r_max * 1.5;
    const auto fine = find_level(p, 1);
    EXPECT_LT(std::abs(fine.level.energy - base.level.energy), 10.0 * p.tol.energy);
}

TEST(FindLevel, FourthOrderConvergence) {
    // fixed r0, r_max and scale: doubling the points halves the step
    const auto error = [](RadialProblem p, int points, double exact) {
        p.grid.r0 = 1e-6;
        p.grid.r_max = p.grid.r_max > 0 ? p.grid.r_max : 60.0;
        p.grid.scale = 2.0;
        p.grid.n_points = points;
        p.tol.energy = 1e-14;
        return std::abs(find_level(p, 0).level.energy - exact);
    };
    const double c1 = error(coulomb(), 400, -0.5);
    const double c2 = error(coulomb(), 800, -0.5);
    EXPECT_GT(c1 / c2, 8.0) << c1 << " " << c2;
    auto h = harmonic(0);
    h.grid.r_max = 12.0;
    const double h1 = error(h, 300, 1.5);
    const double h2 = error(h, 600, 1.5);
    EXPECT_GT(h1 / h2, 8.0) << h1 << " " << h2;
}

TEST(FindLevel, HarmonicVirial) {
    for (int l = 0; l <= 1; ++l) {
        const auto res = spectrum(harmonic(l), 3);
        for (const auto& s : res.solutions) {
            std::vector<double> vu2(s.u.size());
            for (std::size_t i = 0; i < vu2.size(); ++i) {
                vu2[i] = 0.5 * s.r[i] * s.r[i] * s.u[i] * s.u[i];
            }
            const double V = trapezoid(s.r, vu2);
            const double T = s.level.energy - V;
            EXPECT_NEAR(2.0 * T / (2.0 * V), 1.0, 1e-4);
        }
    }
}

TEST(FindLevel, DeterministicUnderConcurrency) {
    const auto reference = spectrum(coulomb(), 3);
    std::vector<std::future<EigenResult>> jobs;
    for (int k = 0; k < 6; ++k) {
        jobs.push_back(std::async(std::launch::async, [k] {
            return k % 2 == 0 ? spectrum(coulomb(), 3) : spectrum(harmonic(1), 2);
        }));
    }
    for (int k = 0; k < 6; k += 2) {
        const auto r = jobs[k].get();
        for (std::size_t n = 0; n < r.levels.size(); ++n) {
            EXPECT_TRUE(bit_equal(r.levels[n].energy, reference.levels[n].energy));
            EXPECT_TRUE(bit_equal(r.levels[n].match_defect, reference.levels[n].match_defect));
            ASSERT_EQ(r.solutions[n].u.size(), reference.solutions[n].u.size());
            for (std::size_t i = 0; i < r.solutions[n].u.size(); ++i) {
                ASSERT_TRUE(bit_equal(r.solutions[n].u[i], reference.solutions[n].u[i]));
            }
        }
    }
    for (int k = 1; k < 6; k += 2) {
        jobs[k].get();
    }
}

TEST(Policies, AgreeOnRegularPotentials) {
    for (auto p : {coulomb(), coulomb(1.0, 1), harmonic(0), harmonic(1)}) {
        const auto d = spectrum(p, 3);
        p.policy = MixedSAE{0.0, 1.0};
        const auto t = spectrum(p, 3);
        p.policy = L2Only{};
        const auto l2 = spectrum(p, 3);
        for (int n = 0; n < 3; ++n) {
            EXPECT_NEAR(d.levels[n].energy, t.levels[n].energy, 1e-9);
            EXPECT_NEAR(d.levels[n].energy, l2.levels[n].energy, 1e-9);
        }
    }
}

TEST(Policies, SaeRequiresSmallP) {
    auto p = coulomb();
    p.policy = MixedSAE{0.5, 1.0};
    EXPECT_THROW(analyze(p), PolicyError);
    RadialProblem q;
    q.potential = InverseSquare{(0.75 * 0.75 - 0.25) / 2.0}; // P = 0.75
    q.policy = MixedSAE{0.3, 1.0};
    EXPECT_THROW(find_level(q, 0), PolicyError);
    q.policy = MixedSAE{std::numbers::pi, 1.0};
    EXPECT_THROW(analyze(q), DomainError);
    q.policy = MixedSAE{0.0, 1.0};
    EXPECT_NO_THROW(analyze(q));
}

TEST(Errors, StronglySingularAndFallToCenter) {
    RadialProblem p;
    p.potential = PowerLaw{-1.0, 3.0};
    EXPECT_THROW(find_level(p, 0), ClassificationError);
    p.potential = InverseSquare{-0.3}; // 2mV0 = 0.6 > 1/4
    EXPECT_THROW(find_level(p, 0), FallToCenterError);
}

TEST(Errors, InverseSquareDirichletHasNoBoundState) {
    RadialProblem p;
    p.potential = InverseSquare{(0.09 - 0.25) / 2.0}; // P = 0.3
    p.window = EnergyWindow{-1e6, -1e-6};
    try {
        find_level(p, 0);
        FAIL() << "expected BracketError";
    } catch (const BracketError& e) {
        EXPECT_EQ(e.nodes_lo(), 0);
        EXPECT_EQ(e.nodes_hi(), 0);
    }
}

TEST(Errors, WindowMustBracket) {
    auto p = coulomb();
    p.window = EnergyWindow{-0.4, -0.2};
    try {
        find_level(p, 0);
        FAIL() << "expected BracketError";
    } catch (const BracketError& e) {
        EXPECT_EQ(e.nodes_lo(), 1);
    }
    p.window = EnergyWindow{-0.6, -0.3};
    EXPECT_NEAR(find_level(p, 0).level.energy, -0.5, 1e-8);
}

TEST(Errors, IterationLimitCarriesHistory) {
    auto p = coulomb();
    p.tol.max_iter = 3;
    try {
        find_level(p, 0);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_FALSE(e.history().empty());
    }
}

TEST(Errors, InvalidProblems) {
    auto p = coulomb();
    p.mass = 0.0;
    EXPECT_THROW(analyze(p), DomainError);
    p = coulomb();
    p.grid.n_points = 100;
    EXPECT_THROW(analyze(p), DomainError);
    EXPECT_THROW(find_level(coulomb(), -1), DomainError);
    EXPECT_THROW(spectrum(coulomb(), 0), DomainError);
}

TEST(Sweep, CoulombNodeCountsBetweenLevels) {
    EXPECT_EQ(numerov_sweep(coulomb(), -0.5, Direction::Outward).nodes, 0);
    EXPECT_EQ(numerov_sweep(coulomb(), -0.3, Direction::Outward).nodes, 1);
    // dense scan, offset so no sample sits on a level: the count is the number of levels below E
    for (int k = 0; k < 56; ++k) {
        const double E = -0.6 + 0.01 * k + 0.0037;
        int below = 0;
        for (int n = 1; n < 20; ++n) {
            below += -0.5 / (n * n) < E ? 1 : 0;
        }
        EXPECT_EQ(numerov_sweep(coulomb(), E, Direction::Outward).nodes, below) << "E=" << E;
    }
}

TEST(Sweep, HarmonicLogDerivativesAgree) {
    const auto out = numerov_sweep(harmonic(), 1.5, Direction::Outward, 1.0);
    const auto in = numerov_sweep(harmonic(), 1.5, Direction::Inward, 1.0);
    // analytic u = r exp(-r^2/2): u'/u = 1/r - r = 0 at the matching radius 1
    const double exact = 1.0 / out.match_radius - out.match_radius;
    EXPECT_NEAR(out.log_derivative, in.log_derivative, 1e-6);
    EXPECT_NEAR(out.log_derivative, exact, 1e-6);
}

TEST(Sweep, InwardNeedsDecayingTail) {
    EXPECT_THROW(numerov_sweep(coulomb(), 0.1, Direction::Inward), NotBoundRegimeError);
    EXPECT_THROW(numerov_sweep(coulomb(), 0.0, Direction::Inward), NotBoundRegimeError);
}

TEST(Sweep, OverflowRescalingIsRecorded) {
    auto p = coulomb();
    p.grid.r_max = 400.0;
    const auto s = numerov_sweep(p, -2.0, Direction::Outward);
    EXPECT_GT(s.rescalings, 0);
    for (const double u : s.u) {
        ASSERT_TRUE(std::isfinite(u));
    }
}

TEST(Series, LeadingAndCorrectedStartValues) {
    auto p = coulomb(1.0, 1);
    const auto lead = series_start_at(p, -0.5, Branch::Plus, 1e-3, SeriesOrder::Leading);
    EXPECT_DOUBLE_EQ(lead.u, 1e-6);
    EXPECT_DOUBLE_EQ(lead.du, 2e-3);

    // l = 0 Coulomb: u = r (1 - Z r + ...), slope 1 at the origin
    const auto s = series_start_at(coulomb(), -0.5, Branch::Plus, 1e-4);
    EXPECT_NEAR(s.u / 1e-4, 1.0 - 1e-4, 1e-8);
    EXPECT_NEAR(s.du, 1.0 - 2e-4, 1e-7);
}

TEST(Series, MinusBranchOfSingularPotential) {
    RadialProblem p;
    p.potential = InverseSquare{-3.0 / 32.0}; // 2mV0 = 3/16, P = 1/4
    p.policy = L2Only{};
    const auto a = series_start_at(p, -1.0, Branch::Minus, 1e-4, SeriesOrder::Leading);
    const auto b = series_start_at(p, -1.0, Branch::Minus, 1.6e-3, SeriesOrder::Leading);
    EXPECT_NEAR(b.u / a.u, std::pow(16.0, 0.25), 1e-12);
    p.policy = DirichletOrigin{};
    EXPECT_THROW(series_start_at(p, -1.0, Branch::Minus, 1e-4), PolicyError);
}

TEST(Series, StartOffTooFarThrows) {
    EXPECT_THROW(series_start_at(coulomb(), -0.5, Branch::Plus, 0.1), StartOffError);
    EXPECT_NO_THROW(series_start(coulomb(), -0.5, Branch::Plus));
}
