#pragma once

#include "radialbc/errors.hpp"
#include "radialbc/grid.hpp"
#include "radialbc/indicial.hpp"
#include "radialbc/potential.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace radialbc {

/// u(0) = 0: only the r^{1/2+P} branch.
struct DirichletOrigin {
    friend bool operator==(DirichletOrigin, DirichletOrigin) = default;
};

/// Square integrability only. As a prescription it coincides with theta = 0;
/// it exists so reports can label levels the weaker criterion leaves ambiguous.
struct L2Only {
    friend bool operator==(L2Only, L2Only) = default;
};

/// One-parameter self-adjoint extension, valid for P < 1/2:
///   u ~ cos(theta) (r/L)^{1/2+P} - sin(theta) (r/L)^{1/2-P}
/// and for P = 0:
///   u ~ sqrt(r) (cos(theta) + sin(theta) log(r/L)).
/// theta = 0 is the pure r^{1/2+P} branch.
struct MixedSAE {
    double theta = 0.0;
    double length = 1.0;

    friend bool operator==(const MixedSAE&, const MixedSAE&) = default;
};

using BoundaryPolicy = std::variant<DirichletOrigin, L2Only, MixedSAE>;

std::string describe(const BoundaryPolicy& policy);

enum class Branch { Plus, Minus, Mixed };
enum class Direction { Outward, Inward };
enum class SeriesOrder { Leading, FirstCorrection };

struct EnergyWindow {
    double lo;
    double hi;

    friend bool operator==(const EnergyWindow&, const EnergyWindow&) = default;
};

struct Tolerances {
    double energy = 1e-9;   ///< absolute, problem energy units
    double match = 1e-9;    ///< relative Wronskian mismatch
    double overflow = 1e150;
    int max_iter = 200;

    friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct RadialProblem {
    double mass = 1.0;
    int l = 0;
    PotentialModel potential;
    BoundaryPolicy policy = DirichletOrigin{};
    GridSettings grid;
    bool relativistic = false; ///< Klein-Gordon radial equation instead of Schroedinger
    std::optional<EnergyWindow> window;
    Tolerances tol;
};

/// Everything the solvers derive from a problem before touching energies.
struct ProblemAnalysis {
    OriginClass origin;
    IndicialReport indicial;
    Branch branch = Branch::Plus;
    double asymptote = 0.0; ///< V(r -> inf)
    double length = 1.0;    ///< natural length of the potential
};

/// Validates a problem and derives its indicial data. Throws
/// ClassificationError (strongly singular), FallToCenterError, PolicyError
/// (MixedSAE with theta != 0 needs P < 1/2) or DomainError (bad parameters).
ProblemAnalysis analyze(const RadialProblem& problem);

struct StartValues {
    double r;
    double u;
    double du;
    /// sum of |c_k r^{sigma_k}| over the retained first-order terms
    double correction;
};

/// Frobenius start-off values at r. Throws StartOffError when the omitted
/// second-order term exceeds 1e-6 relative, or on a log resonance.
StartValues series_start_at(const RadialProblem& problem, double E, Branch branch, double r,
                            SeriesOrder order = SeriesOrder::FirstCorrection);

/// Start-off values at the problem's r0 (resolved automatically if unset).
StartValues series_start(const RadialProblem& problem, double E, Branch branch,
                         SeriesOrder order = SeriesOrder::FirstCorrection);

struct Sweep {
    Direction direction = Direction::Outward;
    std::vector<double> r;
    std::vector<double> u; ///< unnormalized, NaN outside the swept range
    int nodes = 0;         ///< interior sign changes of the swept part
    std::size_t match_index = 0;
    double match_radius = 0.0;
    double log_derivative = 0.0; ///< u'/u at the matching point
    int rescalings = 0;
    GridSettings grid;
};

/// One Numerov sweep at energy E on the grid resolved for E. The matching
/// point is the outermost classical turning point unless match_radius is given.
Sweep numerov_sweep(const RadialProblem& problem, double E, Direction direction,
                    std::optional<double> match_radius = std::nullopt);

struct Level {
    int n_r = 0;
    double energy = 0.0;
    double match_defect = 0.0;
    int node_count = 0;
};

struct LevelSolution {
    Level level;
    std::vector<double> r;
    std::vector<double> u; ///< unit-normalized, u > 0 next to the origin
    GridSettings grid;
    int iterations = 0;
    std::vector<BracketStep> history;
};

/// Level with n_r interior nodes.
LevelSolution find_level(const RadialProblem& problem, int n_r);

struct AbsentLevel {
    int n_r;
    std::string reason;
};

struct EigenResult {
    std::vector<Level> levels;
    std::vector<LevelSolution> solutions; ///< parallel to levels
    std::vector<AbsentLevel> absent;
    std::string policy;
    int iterations = 0;
};

/// Levels n_r = 0 .. n_levels-1. Missing levels are listed in `absent`;
/// only a failure of level 0 propagates.
EigenResult spectrum(const RadialProblem& problem, int n_levels);

/// Q(r; E) = (E - V)^2 - m^2 - l(l+1)/r^2 of the Klein-Gordon radial
/// equation u'' + Q u = 0.
class KgCoefficient {
public:
    KgCoefficient(PotentialModel potential, double mass, int l, double energy);
    double operator()(double r) const;
    double energy() const noexcept { return energy_; }

private:
    PotentialModel potential_;
    double mass_;
    int l_;
    double energy_;
};

/// Requires problem.relativistic; throws FallToCenterError for Z^2 > (l+1/2)^2.
KgCoefficient kg_effective(const RadialProblem& problem, double E);

/// Closed-form energy of the single bound state of u'' - (P^2 - 1/4)/r^2 u = -2mE u
/// under MixedSAE(theta, L), from the small-argument expansion of
/// sqrt(r) K_P(kappa r). Absent when the prescribed ratio admits no kappa > 0.
std::optional<double> sae_oracle_energy(double P, double mass, double theta, double length);

struct SaeState {
    double energy;
    std::optional<double> oracle_energy;
    LevelSolution solution;
};

/// Bound state of V = g/r^2 under MixedSAE(theta, L); absent for theta = 0 and
/// whenever the extension does not bind.
std::optional<SaeState> sae_bound_state(double g, int l, double mass, double theta, double length);

} // namespace radialbc
