#include "radialbc/rsolve.hpp"

#include "format.hpp"

#include <cmath>
#include <numbers>

namespace radialbc {

std::optional<double> sae_oracle_energy(double P, double mass, double theta, double length) {
    if (!(P >= 0.0 && P < 0.5)) {
        throw PolicyError("MixedSAE oracle requires 0 <= P < 1/2 (got P = " + detail::fmt17(P) + ")");
    }
    if (!(mass > 0.0) || !(length > 0.0) || !(theta >= 0.0 && theta < std::numbers::pi)) {
        throw DomainError("MixedSAE oracle requires mass > 0, L > 0, theta in [0, pi)");
    }
    if (theta == 0.0) {
        return std::nullopt;
    }
    const double cot = std::cos(theta) / std::sin(theta);
    double kappa;
    if (P == 0.0) {
        // K_0(z) ~ -log(z/2) - gamma
        kappa = 2.0 / length * std::exp(cot - std::numbers::egamma);
    } else {
        // K_P(z) ~ [Gamma(P) (z/2)^-P + Gamma(-P) (z/2)^P] / 2
        const double ratio = cot * std::tgamma(P) / -std::tgamma(-P);
        if (!(ratio > 0.0)) {
            return std::nullopt;
        }
        kappa = 2.0 / length * std::pow(ratio, 1.0 / (2.0 * P));
    }
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        return std::nullopt;
    }
    return -kappa * kappa / (2.0 * mass);
}

std::optional<SaeState> sae_bound_state(double g, int l, double mass, double theta,
                                        double length) {
    RadialProblem p;
    p.mass = mass;
    p.l = l;
    p.potential = InverseSquare{g};
    p.policy = MixedSAE{theta, length};
    const auto a = analyze(p);
    if (theta == 0.0) {
        return std::nullopt;
    }
    const auto oracle = sae_oracle_energy(*a.indicial.P, mass, theta, length);
    try {
        auto sol = find_level(p, 0);
        const double E = sol.level.energy;
        return SaeState{E, oracle, std::move(sol)};
    } catch (const BracketError&) {
        return std::nullopt;
    }
}

} // namespace radialbc
