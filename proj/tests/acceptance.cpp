// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Oracles are closed forms evaluated here, never the library's own helpers.
#include "radialbc/deltadiag.hpp"
#include "radialbc/indicial.hpp"
#include "radialbc/rsolve.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace radialbc;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) {
                detail += "; ";
            }
            detail += what;
        }
    }
};

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

RadialProblem coulomb_problem() {
    RadialProblem p;
    p.potential = Coulomb{1.0};
    return p;
}

RadialProblem harmonic_problem(int l) {
    RadialProblem p;
    p.potential = Harmonic{1.0, 1.0};
    p.l = l;
    return p;
}

Outcome indicial_bands() {
    Outcome o;
    std::mt19937_64 rng(20240611);
    double worst = 0.0;
    for (int l = 0; l <= 4; ++l) {
        const double edge = (l + 0.5) * (l + 0.5);
        std::uniform_real_distribution<double> coupling(-10.0, edge);
        for (int k = 0; k < 200; ++k) {
            const double c = coupling(rng);
            const auto rep = indicial_from_coupling(l, c);
            if (rep.fall_to_center()) {
                continue;
            }
            const double sum = rep.a_plus + rep.a_minus;
            const double prod = rep.a_plus * rep.a_minus;
            const double expected_prod = c - l * (l + 1.0);
            worst = std::max({worst, std::abs(sum - 1.0),
                              std::abs(prod - expected_prod) / std::max(1.0, std::abs(expected_prod))});
            const double P = std::sqrt(edge - c);
            o.check(rep.minus_bc == (P < 0.5), "minus_bc flag wrong at l=" + std::to_string(l) + " 2mV0=" + num(c));
            o.check(rep.minus_l2 == (P < 1.0), "minus_l2 flag wrong at l=" + std::to_string(l) + " 2mV0=" + num(c));
        }
        // exact band edges: P = 1/2 at 2mV0 = l(l+1), P = 1 at 2mV0 = (l+1/2)^2 - 1
        const double half = l * (l + 1.0);
        const double one = edge - 1.0;
        const auto at_half = indicial_from_coupling(l, half);
        const auto in_half = indicial_from_coupling(l, half + 1e-12);
        const auto at_one = indicial_from_coupling(l, one);
        const auto in_one = indicial_from_coupling(l, one + 1e-12);
        o.check(!at_half.minus_bc && in_half.minus_bc, "boundary-condition flag does not flip at P = 1/2");
        o.check(!at_one.minus_l2 && in_one.minus_l2, "L2 flag does not flip at P = 1");
        o.check(at_half.minus_l2, "P = 1/2 must stay square integrable");
    }
    o.check(worst <= 1e-12, "Vieta residual " + num(worst));
    if (o.pass) {
        o.detail = "max Vieta residual " + num(worst) + ", flips exact at P = 1/2 and P = 1";
    }
    return o;
}

Outcome regular_exponents() {
    Outcome o;
    for (int l = 0; l <= 10; ++l) {
        const auto rep = solve_indicial(l, 1.0, origin_class(PotentialModel{Coulomb{1.0}}));
        o.check(rep.a_plus == l + 1.0 && rep.a_minus == -static_cast<double>(l),
                "l=" + std::to_string(l) + " gives (" + num(rep.a_plus) + ", " + num(rep.a_minus) + ")");
    }
    if (o.pass) {
        o.detail = "a_plus = l+1, a_minus = -l exactly for l = 0..10";
    }
    return o;
}

Outcome delta_strength() {
    Outcome o;
    for (double c : {1.0, 2.0, -3.0}) {
        const auto rep = residual_limit(CandidateU{PowerForm{c, 0.0}, 0, 0.0, {}, 1.0}, 1e-2);
        const double expected = -4.0 * kPi * c;
        const double rel = std::abs(rep.strength - expected) / std::abs(expected);
        o.check(rep.verdict == Verdict::PointSource && rel <= 1e-6,
                "c=" + num(c) + " strength relative error " + num(rel));
    }
    const auto lin = residual_limit(CandidateU{PowerForm{1.0, 1.0}, 0, 0.0, {}, 1.0}, 1e-2);
    o.check(std::abs(lin.S_limit) < 1e-6, "u = r gives S_limit " + num(lin.S_limit));

    double worst = 0.0;
    int count = 0;
    const auto sweep = [&](const RadialProblem& p, int n) {
        const auto res = spectrum(p, n);
        for (const auto& s : res.solutions) {
            const auto cand = sampled_candidate(s, p.l, s.level.energy, p.potential, p.mass);
            const auto rep = residual_limit(cand, 1e-2);
            worst = std::max(worst, std::abs(rep.S_limit));
            ++count;
        }
    };
    sweep(coulomb_problem(), 3);
    sweep(harmonic_problem(0), 3);
    sweep(harmonic_problem(1), 3);
    o.check(worst < 1e-6, "eigenfunction |S_limit| up to " + num(worst));
    if (o.pass) {
        o.detail = "strengths -4 pi c within 1e-6; " + std::to_string(count) +
                   " eigenfunctions with max |S_limit| " + num(worst);
    }
    return o;
}

Outcome coulomb_spectrum() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = spectrum(coulomb_problem(), 3);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double worst = 0.0;
    o.check(res.levels.size() == 3, "expected 3 levels");
    for (std::size_t n = 0; n < res.levels.size(); ++n) {
        const double exact = -0.5 / ((n + 1.0) * (n + 1.0));
        worst = std::max(worst, std::abs(res.levels[n].energy - exact));
    }
    o.check(worst <= 1e-6, "max error " + num(worst));
    o.check(secs < 5.0, "runtime " + num(secs) + " s");
    if (o.pass) {
        o.detail = "max error " + num(worst) + " in " + num(secs) + " s";
    }
    return o;
}

Outcome harmonic_spectrum() {
    Outcome o;
    double worst = 0.0;
    for (int l = 0; l <= 1; ++l) {
        const auto res = spectrum(harmonic_problem(l), 3);
        o.check(res.levels.size() == 3, "expected 3 levels for l=" + std::to_string(l));
        for (std::size_t n = 0; n < res.levels.size(); ++n) {
            worst = std::max(worst, std::abs(res.levels[n].energy - (2.0 * n + l + 1.5)));
        }
    }
    o.check(worst <= 1e-6, "max error " + num(worst));

    // fixed r0, r_max and crossover: doubling the points halves the step
    const auto error = [](int points) {
        auto p = harmonic_problem(0);
        p.grid = GridSettings{1e-6, 12.0, points, 2.0};
        p.tol.energy = 1e-14;
        return std::abs(find_level(p, 0).level.energy - 1.5);
    };
    const double coarse = error(300);
    const double fine = error(600);
    const double gain = coarse / fine;
    o.check(gain >= 8.0, "halving the step reduced the error only " + num(gain) + "x");
    if (o.pass) {
        o.detail = "max error " + num(worst) + ", step halving gains " + num(gain) + "x";
    }
    return o;
}

// kappa from matching sqrt(r) K_P(kappa r) ~ Gamma(P)(kappa r/2)^-P + Gamma(-P)(kappa r/2)^P
// against cos(theta)(r/L)^{1/2+P} - sin(theta)(r/L)^{1/2-P}
double bessel_k_oracle(double P, double mass, double theta, double L) {
    const double rhs = -std::tgamma(P) / std::tgamma(-P) / std::tan(theta);
    const double kappa = 2.0 / L * std::pow(rhs, 1.0 / (2.0 * P));
    return -kappa * kappa / (2.0 * mass);
}

Outcome sae_pathology() {
    Outcome o;
    const double P = 0.3;
    const double mass = 1.0;
    const double g = (P * P - 0.25) / (2.0 * mass);

    RadialProblem dir;
    dir.mass = mass;
    dir.potential = InverseSquare{g};
    dir.window = EnergyWindow{-1e6, -1e-6};
    bool bracket = false;
    try {
        find_level(dir, 0);
    } catch (const BracketError&) {
        bracket = true;
    }
    o.check(bracket, "Dirichlet found a bound state");

    RadialProblem sae = dir;
    sae.window.reset();
    sae.policy = MixedSAE{kPi / 4.0, 1.0};
    const auto res = spectrum(sae, 3);
    o.check(res.levels.size() == 1, std::to_string(res.levels.size()) + " SAE levels instead of 1");
    double rel = 1.0;
    if (!res.levels.empty()) {
        const double oracle = bessel_k_oracle(P, mass, kPi / 4.0, 1.0);
        rel = std::abs(res.levels[0].energy / oracle - 1.0);
        o.check(rel <= 1e-3, "E = " + num(res.levels[0].energy) + " vs oracle " + num(oracle));
    }
    if (o.pass) {
        o.detail = "Dirichlet unbound over [-1e6, -1e-6]; one SAE level, relative deviation " + num(rel);
    }
    return o;
}

Outcome kg_coulomb() {
    Outcome o;
    const double Z = 0.2;
    RadialProblem p;
    p.potential = Coulomb{Z};
    p.relativistic = true;
    double worst = 0.0;
    for (int n = 0; n <= 1; ++n) {
        const double d = n + 0.5 + std::sqrt(0.25 - Z * Z);
        const double exact = 1.0 / std::sqrt(1.0 + Z * Z / (d * d));
        const double E = find_level(p, n).level.energy;
        worst = std::max(worst, std::abs(E / exact - 1.0));
    }
    o.check(worst <= 1e-5, "relative error " + num(worst));
    for (double strong : {0.6, 0.9}) {
        RadialProblem q = p;
        q.potential = Coulomb{strong};
        bool rejected = false;
        try {
            find_level(q, 0);
        } catch (const FallToCenterError& e) {
            rejected = std::string(e.what()).find("fall to the center") != std::string::npos;
        }
        o.check(rejected, "Z=" + num(strong) + " not rejected as fall to the center");
    }
    if (o.pass) {
        o.detail = "relative error " + num(worst) + "; Z = 0.6, 0.9 rejected";
    }
    return o;
}

Outcome policy_agreement() {
    Outcome o;
    double worst = 0.0;
    for (auto p : {coulomb_problem(), harmonic_problem(0), harmonic_problem(1)}) {
        const auto a = spectrum(p, 3);
        p.policy = MixedSAE{0.0, 1.0};
        const auto b = spectrum(p, 3);
        o.check(a.levels.size() == b.levels.size(), "level counts differ");
        for (std::size_t n = 0; n < std::min(a.levels.size(), b.levels.size()); ++n) {
            worst = std::max(worst, std::abs(a.levels[n].energy - b.levels[n].energy));
        }
    }
    o.check(worst <= 1e-9, "max difference " + num(worst));
    if (o.pass) {
        o.detail = "max difference " + num(worst);
    }
    return o;
}

struct Proc {
    int code;
    std::string out;
};

Proc shell(const std::string& cmd) {
    Proc p{-1, {}};
    FILE* f = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!f) {
        return p;
    }
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), f)) > 0) {
        p.out.append(buf.data(), n);
    }
    const int status = pclose(f);
    p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return p;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<double> csv_energies(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::vector<double> out;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream row(line);
        std::string field;
        for (int k = 0; k < 3; ++k) {
            std::getline(row, field, ',');
        }
        out.push_back(std::stod(field));
    }
    return out;
}

Outcome cli_contract(const std::string& exe) {
    Outcome o;
    if (exe.empty()) {
        o.check(false, "no executable given");
        return o;
    }
    const std::string q = "'" + exe + "'";

    const auto c = shell(q + " spectrum --potential coulomb:Z=1 --mass 1 --l 0 --levels 3 --bc dirichlet --format csv");
    o.check(c.code == 0, "coulomb example exit " + std::to_string(c.code));
    if (c.code == 0) {
        const auto E = csv_energies(c.out);
        o.check(E.size() == 3, "coulomb example row count");
        for (std::size_t n = 0; n < E.size(); ++n) {
            o.check(std::abs(E[n] + 0.5 / ((n + 1.0) * (n + 1.0))) < 1e-6, "coulomb level " + std::to_string(n));
        }
    }

    const auto s = shell(q + " spectrum --potential invsq:g=-0.09 --mass 0.5 --l 0 --bc sae:theta=0.7854,L=1 --format csv");
    o.check(s.code == 0, "sae example exit " + std::to_string(s.code));
    if (s.code == 0) {
        const auto E = csv_energies(s.out);
        // P^2 = 1/4 + 2 m g
        const double oracle = bessel_k_oracle(std::sqrt(0.25 - 0.09), 0.5, 0.7854, 1.0);
        o.check(E.size() == 1 && std::abs(E[0] / oracle - 1.0) < 1e-3, "sae example energy");
    }

    const auto k = shell(q + " spectrum --kg --potential coulomb:Z=0.2 --format csv");
    o.check(k.code == 0, "kg example exit " + std::to_string(k.code));
    if (k.code == 0) {
        const auto E = csv_energies(k.out);
        const double d = 0.5 + std::sqrt(0.25 - 0.04);
        o.check(!E.empty() && std::abs(E[0] * std::sqrt(1.0 + 0.04 / (d * d)) - 1.0) < 1e-5, "kg example energy");
    }

    o.check(shell(q + " indicial --l 0 --two-m-v0 abc").code == 2, "malformed number is not exit 2");
    o.check(shell(q + " spectrum --potential power:coeff=1,p=3").code == 3, "strongly singular is not exit 3");
    o.check(shell(q + " spectrum --potential invsq:g=0.15625 --bc sae:theta=0.5,L=1").code == 3,
            "P >= 1/2 with theta != 0 is not exit 3");
    const auto dir = std::filesystem::temp_directory_path() / "radialbc_acceptance";
    std::filesystem::create_directories(dir);
    const auto first = dir / "first.json";
    const auto second = dir / "second.json";
    const auto a = shell(q + " spectrum --potential coulomb:Z=1+invsq:g=0.05 --l 0..2 --levels 2 --output '" +
                         first.string() + "'");
    const auto b = shell(q + " spectrum --config '" + first.string() + "' --output '" + second.string() + "'");
    o.check(a.code == 0 && b.code == 0, "round-trip runs failed");
    const auto ja = slurp(first);
    o.check(!ja.empty() && ja == slurp(second), "JSON round-trip is not bit-exact");
    if (o.pass) {
        o.detail = "three spectrum examples exit 0 with oracle values; exit codes 2/3 on bad input; JSON replay identical";
    }
    return o;
}

} // namespace

int main(int argc, char** argv) {
    const std::string exe = argc > 1 ? argv[1] : "";
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"indicial bands", indicial_bands},
        {"regular-case exponents", regular_exponents},
        {"delta-source strength", delta_strength},
        {"Coulomb spectrum", coulomb_spectrum},
        {"harmonic spectrum", harmonic_spectrum},
        {"inverse-square extension", sae_pathology},
        {"Klein-Gordon Coulomb", kg_coulomb},
        {"policy agreement", policy_agreement},
        {"CLI contract", [&] { return cli_contract(exe); }},
    };
    int failures = 0;
    int index = 1;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("threw: ") + e.what();
        }
        std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name.c_str(), o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
