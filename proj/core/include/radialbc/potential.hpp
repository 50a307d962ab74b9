#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace radialbc {

class PotentialModel;

/// V = -Z / r
struct Coulomb {
    double Z = 1.0;
};

/// V = m omega^2 r^2 / 2. The mass is part of the model because the
/// potential itself depends on it.
struct Harmonic {
    double omega = 1.0;
    double mass = 1.0;
};

/// V = g / r^2
struct InverseSquare {
    double g = 0.0;
};

/// V = -depth for r < radius, 0 beyond.
struct SphericalWell {
    double depth = 0.0;
    double radius = 1.0;
};

/// V = coeff * r^{-exponent}
struct PowerLaw {
    double coeff = 0.0;
    double exponent = 0.0;
};

/// One term c * r^{-p} of a small-r expansion.
struct PowerTerm {
    double coeff;
    double p;
};

/// Tabulated V(r), interpolated linearly in log r. Below the first radius the
/// model continues with the power law fitted over the smallest decade; above
/// the last radius it decays with the power fitted to the last two samples
/// (or stays constant when those do not decay).
class Tabulated {
public:
    /// Relative tolerance on the fitted slope of log|r^2 V| vs log r that
    /// separates a constant limit from a power trend.
    static constexpr double kConstantSlopeTol = 0.02;
    /// Slopes between kConstantSlopeTol and kTrendSlopeTol are ambiguous.
    static constexpr double kTrendSlopeTol = 0.1;

    Tabulated(std::vector<double> radii, std::vector<double> values);

    const std::vector<double>& radii() const noexcept { return radii_; }
    const std::vector<double>& values() const noexcept { return values_; }

    double evaluate(double r) const;
    double asymptotic_value() const noexcept;

    /// Leading small-r term, or a ClassificationError when the trend is ambiguous.
    PowerTerm origin_term() const;

    /// Slope of log|r^2 V| vs log r over the smallest decade (NaN if not fitted).
    double fitted_slope() const noexcept { return fit_.slope; }

private:
    struct OriginFit {
        bool all_zero = false;
        bool sign_change = false;
        int points = 0;
        double slope = 0.0;
        double log_amplitude = 0.0;
        double sign = 1.0;
        double mean_r2v = 0.0;
    };
    struct TailFit {
        bool decays = false;
        double power = 0.0;
    };

    std::vector<double> radii_;
    std::vector<double> values_;
    OriginFit fit_;
    TailFit tail_;
};

struct Sum {
    std::vector<PotentialModel> parts;
};

/// Immutable description of a central potential V(r), r > 0.
class PotentialModel {
public:
    using Variant = std::variant<Coulomb, Harmonic, InverseSquare, SphericalWell, PowerLaw,
                                 Tabulated, Sum>;

    PotentialModel(); // V = 0 (empty Sum)
    PotentialModel(Coulomb v);
    PotentialModel(Harmonic v);
    PotentialModel(InverseSquare v);
    PotentialModel(SphericalWell v);
    PotentialModel(PowerLaw v);
    PotentialModel(Tabulated v);
    PotentialModel(Sum v);

    const Variant& variant() const noexcept { return *v_; }
    /// Short variant name used in diagnostics ("coulomb", "sum", ...).
    std::string kind() const;

private:
    // shared so copies of large tabulated models stay cheap; never mutated
    std::shared_ptr<const Variant> v_;
};

struct OriginClass {
    enum class Kind { Regular, TransitiveSingular, StronglySingular };
    Kind kind = Kind::Regular;
    /// V0 = -lim r^2 V(r); meaningful for TransitiveSingular only.
    double V0 = 0.0;

    friend bool operator==(const OriginClass&, const OriginClass&) = default;
};

std::string to_string(OriginClass::Kind kind);

/// V(r) for r > 0. Throws DomainError when the value is not finite.
double evaluate(const PotentialModel& model, double r);

/// Classifies lim r^2 V(r) symbolically for analytic variants and by a
/// least-squares fit for tabulated data.
OriginClass origin_class(const PotentialModel& model);

/// Small-r expansion V ~ sum c_k r^{-p_k}, merged by exponent, zero terms
/// dropped, sorted by decreasing p.
std::vector<PowerTerm> origin_terms(const PotentialModel& model);

/// lim_{r -> inf} V(r); may be +inf or -inf.
double asymptotic_value(const PotentialModel& model);

/// Length scale of the model (Bohr radius, oscillator length, well radius...).
double natural_length(const PotentialModel& model, double mass);

/// Human-readable descriptor, e.g. "coulomb:Z=1+invsq:g=0.1".
std::string describe(const PotentialModel& model);

} // namespace radialbc
