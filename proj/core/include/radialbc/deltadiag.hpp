#pragma once

#include "radialbc/potential.hpp"

#include <string>
#include <variant>
#include <vector>

namespace radialbc {

struct LevelSolution;

/// u = c r^a
struct PowerForm {
    double c = 1.0;
    double a = 0.0;
};

/// u = c1 r^a1 + c2 r^a2
struct PowerPairForm {
    double c1 = 1.0;
    double a1 = 0.0;
    double c2 = 0.0;
    double a2 = 0.0;
};

/// u given on an increasing radial mesh. Interpolated with 5-point Lagrange
/// stencils; continued as a power law below the first radius.
struct SampledForm {
    std::vector<double> r;
    std::vector<double> u;
};

/// A radial function u(r) together with the equation it is tested against.
struct CandidateU {
    std::variant<PowerForm, PowerPairForm, SampledForm> form;
    int l = 0;
    double energy = 0.0;
    PotentialModel potential;
    double mass = 1.0;
};

/// Candidate built from a solved level of the given problem data.
CandidateU sampled_candidate(const LevelSolution& solution, int l, double energy,
                             const PotentialModel& potential, double mass);

enum class Verdict { SourceFree, PointSource, Inconclusive };

std::string to_string(Verdict v);

inline constexpr const char* kResidualSignConvention =
    "S(a) is the ball integral of (Laplacian + 2m(E-V) - l(l+1)/r^2) u/r over |r| < a; "
    "a point source u(0+) != 0 gives S -> -4*pi*u(0+)";

struct ResidualReport {
    std::vector<double> radii;    ///< decreasing
    std::vector<double> S_values;
    double S_limit = 0.0;
    double order = 0.0;           ///< observed order in a; NaN for a constant sequence
    double tol_S = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    double strength = 0.0;        ///< S_limit for a point source, 0 otherwise
    std::string sign_convention = kResidualSignConvention;
};

/// S(a) = 4 pi [a u'(a) - u(a)] + int_0^a 4 pi r [2m(E - V) - l(l+1)/r^2] u dr.
/// Throws DivergentVolumeError when the volume integral does not exist and
/// DomainError for invalid candidates or radii.
double sphere_residual(const CandidateU& candidate, double a);

/// S at a_start * ratio^k, k = 0..n_steps-1, extrapolated to a -> 0 from the
/// last three values.
ResidualReport residual_limit(const CandidateU& candidate, double a_start, double ratio = 0.5,
                              int n_steps = 8);

} // namespace radialbc
