#include "radialbc/potential.hpp"

#include "radialbc/errors.hpp"
#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace radialbc {

namespace {

constexpr double kExponentEps = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw DomainError(std::string("potential parameter '") + what + "' must be finite");
    }
}

using detail::fmt17;
constexpr auto fmt = fmt17;

} // namespace

// --- Tabulated -------------------------------------------------------------

Tabulated::Tabulated(std::vector<double> radii, std::vector<double> values)
    : radii_(std::move(radii)), values_(std::move(values)) {
    if (radii_.size() != values_.size()) {
        throw DomainError("tabulated potential: radii and values differ in length");
    }
    if (radii_.size() < 2) {
        throw DomainError("tabulated potential: need at least two samples");
    }
    for (std::size_t i = 0; i < radii_.size(); ++i) {
        require_finite(radii_[i], "radius");
        require_finite(values_[i], "value");
        if (radii_[i] <= 0.0) {
            throw DomainError("tabulated potential: radii must be > 0");
        }
        if (i > 0 && radii_[i] <= radii_[i - 1]) {
            throw DomainError("tabulated potential: radii must be strictly increasing");
        }
    }

    // smallest decade: r <= 10 r_first
    const double r_cut = 10.0 * radii_.front();
    std::vector<double> lx, ly;
    double sign = 0.0;
    double sum_r2v = 0.0;
    bool any_nonzero = false;
    for (std::size_t i = 0; i < radii_.size() && radii_[i] <= r_cut * (1 + 1e-12); ++i) {
        const double r2v = radii_[i] * radii_[i] * values_[i];
        sum_r2v += r2v;
        ++fit_.points;
        if (r2v == 0.0) {
            continue;
        }
        any_nonzero = true;
        const double s = r2v > 0 ? 1.0 : -1.0;
        if (sign != 0.0 && s != sign) {
            fit_.sign_change = true;
        }
        sign = s;
        lx.push_back(std::log(radii_[i]));
        ly.push_back(std::log(std::abs(r2v)));
    }
    fit_.all_zero = !any_nonzero;
    fit_.sign = sign == 0.0 ? 1.0 : sign;
    fit_.mean_r2v = fit_.points > 0 ? sum_r2v / fit_.points : 0.0;
    if (lx.size() >= 2 && !fit_.sign_change) {
        const double n = static_cast<double>(lx.size());
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i];
            my += ly[i];
        }
        mx /= n;
        my /= n;
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxx += (lx[i] - mx) * (lx[i] - mx);
            sxy += (lx[i] - mx) * (ly[i] - my);
        }
        fit_.slope = sxy / sxx;
        fit_.log_amplitude = my - fit_.slope * mx;
    } else {
        fit_.slope = std::numeric_limits<double>::quiet_NaN();
    }

    const std::size_t n = values_.size();
    const double v1 = values_[n - 2];
    const double v2 = values_[n - 1];
    if (v1 != 0.0 && v2 != 0.0 && (v1 > 0) == (v2 > 0) && std::abs(v2) < std::abs(v1)) {
        tail_.decays = true;
        tail_.power = std::log(v1 / v2) / std::log(radii_[n - 1] / radii_[n - 2]);
    } else if (v2 == 0.0) {
        tail_.decays = true;
        tail_.power = 0.0;
    }
}

PowerTerm Tabulated::origin_term() const {
    if (fit_.all_zero) {
        return {0.0, 0.0};
    }
    std::ostringstream why;
    if (fit_.points < 3 || fit_.sign_change || !std::isfinite(fit_.slope)) {
        why << "tabulated potential: ambiguous small-r trend (" << fit_.points
            << " samples in the smallest decade"
            << (fit_.sign_change ? ", r^2 V changes sign" : "") << ")";
        throw ClassificationError(why.str());
    }
    const double s = fit_.slope;
    if (std::abs(s) <= kConstantSlopeTol) {
        return {fit_.mean_r2v, 2.0};
    }
    if (std::abs(s) >= kTrendSlopeTol) {
        return {fit_.sign * std::exp(fit_.log_amplitude), 2.0 - s};
    }
    why << "tabulated potential: ambiguous small-r trend, fitted slope of log|r^2 V| = " << s
        << " lies between tolerances " << kConstantSlopeTol << " and " << kTrendSlopeTol;
    throw ClassificationError(why.str());
}

double Tabulated::evaluate(double r) const {
    if (r < radii_.front()) {
        const PowerTerm t = origin_term();
        return t.coeff * std::pow(r, -t.p);
    }
    if (r > radii_.back()) {
        const double v = values_.back();
        if (tail_.decays && v != 0.0) {
            return v * std::pow(radii_.back() / r, tail_.power);
        }
        return v;
    }
    const auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
    std::size_t i = static_cast<std::size_t>(it - radii_.begin());
    if (i >= radii_.size()) {
        return values_.back();
    }
    if (i == 0) {
        return values_.front();
    }
    --i;
    const double t = std::log(r / radii_[i]) / std::log(radii_[i + 1] / radii_[i]);
    return values_[i] + t * (values_[i + 1] - values_[i]);
}

double Tabulated::asymptotic_value() const noexcept {
    if (tail_.decays && tail_.power > 0.0) {
        return 0.0;
    }
    return values_.back();
}

// --- PotentialModel -----------------------------------------------------------

PotentialModel::PotentialModel() : v_(std::make_shared<const Variant>(Sum{})) {}

PotentialModel::PotentialModel(Coulomb v) {
    require_finite(v.Z, "Z");
    v_ = std::make_shared<const Variant>(v);
}

PotentialModel::PotentialModel(Harmonic v) {
    require_finite(v.omega, "omega");
    require_finite(v.mass, "mass");
    if (v.mass <= 0.0) {
        throw DomainError("harmonic potential: mass must be > 0");
    }
    v_ = std::make_shared<const Variant>(v);
}

PotentialModel::PotentialModel(InverseSquare v) {
    require_finite(v.g, "g");
    v_ = std::make_shared<const Variant>(v);
}

PotentialModel::PotentialModel(SphericalWell v) {
    require_finite(v.depth, "depth");
    require_finite(v.radius, "radius");
    if (v.radius <= 0.0) {
        throw DomainError("spherical well: radius must be > 0");
    }
    v_ = std::make_shared<const Variant>(v);
}

PotentialModel::PotentialModel(PowerLaw v) {
    require_finite(v.coeff, "coeff");
    require_finite(v.exponent, "exponent");
    v_ = std::make_shared<const Variant>(v);
}

PotentialModel::PotentialModel(Tabulated v) : v_(std::make_shared<const Variant>(std::move(v))) {}

PotentialModel::PotentialModel(Sum v) : v_(std::make_shared<const Variant>(std::move(v))) {}

std::string PotentialModel::kind() const {
    return std::visit(overloaded{
                          [](const Coulomb&) { return std::string("coulomb"); },
                          [](const Harmonic&) { return std::string("harmonic"); },
                          [](const InverseSquare&) { return std::string("invsq"); },
                          [](const SphericalWell&) { return std::string("well"); },
                          [](const PowerLaw&) { return std::string("power"); },
                          [](const Tabulated&) { return std::string("tabulated"); },
                          [](const Sum&) { return std::string("sum"); },
                      },
                      variant());
}

std::string to_string(OriginClass::Kind kind) {
    switch (kind) {
    case OriginClass::Kind::Regular:
        return "regular";
    case OriginClass::Kind::TransitiveSingular:
        return "transitive-singular";
    case OriginClass::Kind::StronglySingular:
        return "strongly-singular";
    }
    return "unknown";
}

namespace {

double evaluate_raw(const PotentialModel& model, double r) {
    return std::visit(overloaded{
                          [r](const Coulomb& c) { return -c.Z / r; },
                          [r](const Harmonic& h) { return 0.5 * h.mass * h.omega * h.omega * r * r; },
                          [r](const InverseSquare& s) { return s.g / (r * r); },
                          [r](const SphericalWell& w) { return r < w.radius ? -w.depth : 0.0; },
                          [r](const PowerLaw& p) { return p.coeff * std::pow(r, -p.exponent); },
                          [r](const Tabulated& t) { return t.evaluate(r); },
                          [r](const Sum& s) {
                              double acc = 0.0;
                              for (const auto& part : s.parts) {
                                  acc += evaluate_raw(part, r);
                              }
                              return acc;
                          },
                      },
                      model.variant());
}

void collect_terms(const PotentialModel& model, std::vector<PowerTerm>& out) {
    std::visit(overloaded{
                   [&](const Coulomb& c) { out.push_back({-c.Z, 1.0}); },
                   [&](const Harmonic& h) {
                       out.push_back({0.5 * h.mass * h.omega * h.omega, -2.0});
                   },
                   [&](const InverseSquare& s) { out.push_back({s.g, 2.0}); },
                   [&](const SphericalWell& w) { out.push_back({-w.depth, 0.0}); },
                   [&](const PowerLaw& p) { out.push_back({p.coeff, p.exponent}); },
                   [&](const Tabulated& t) { out.push_back(t.origin_term()); },
                   [&](const Sum& s) {
                       for (const auto& part : s.parts) {
                           collect_terms(part, out);
                       }
                   },
               },
               model.variant());
}

} // namespace

double evaluate(const PotentialModel& model, double r) {
    if (!(r > 0.0)) {
        throw DomainError("potential evaluated at r = " + fmt(r) + " (requires r > 0)");
    }
    const double v = evaluate_raw(model, r);
    if (!std::isfinite(v)) {
        throw DomainError("potential '" + model.kind() + "' is not finite at r = " + fmt(r));
    }
    return v;
}

std::vector<PowerTerm> origin_terms(const PotentialModel& model) {
    std::vector<PowerTerm> raw;
    collect_terms(model, raw);
    std::sort(raw.begin(), raw.end(),
              [](const PowerTerm& a, const PowerTerm& b) { return a.p > b.p; });
    std::vector<PowerTerm> merged;
    for (const auto& t : raw) {
        if (!merged.empty() && std::abs(merged.back().p - t.p) <= kExponentEps) {
            merged.back().coeff += t.coeff;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const PowerTerm& t) { return t.coeff == 0.0; });
    return merged;
}

OriginClass origin_class(const PotentialModel& model) {
    const auto terms = origin_terms(model);
    if (terms.empty()) {
        return {};
    }
    const PowerTerm& lead = terms.front();
    if (lead.p > 2.0 + kExponentEps) {
        return {OriginClass::Kind::StronglySingular, 0.0};
    }
    if (std::abs(lead.p - 2.0) <= kExponentEps) {
        return {OriginClass::Kind::TransitiveSingular, -lead.coeff};
    }
    return {};
}

double asymptotic_value(const PotentialModel& model) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(overloaded{
                          [](const Coulomb&) { return 0.0; },
                          [](const Harmonic& h) { return h.omega == 0.0 ? 0.0 : inf; },
                          [](const InverseSquare&) { return 0.0; },
                          [](const SphericalWell&) { return 0.0; },
                          [](const PowerLaw& p) {
                              if (p.coeff == 0.0 || p.exponent > 0.0) {
                                  return 0.0;
                              }
                              if (p.exponent == 0.0) {
                                  return p.coeff;
                              }
                              return p.coeff > 0.0 ? inf : -inf;
                          },
                          [](const Tabulated& t) { return t.asymptotic_value(); },
                          [](const Sum& s) {
                              double acc = 0.0;
                              for (const auto& part : s.parts) {
                                  acc += asymptotic_value(part);
                              }
                              return acc;
                          },
                      },
                      model.variant());
}

double natural_length(const PotentialModel& model, double mass) {
    return std::visit(overloaded{
                          [mass](const Coulomb& c) {
                              return c.Z == 0.0 ? 1.0 : 1.0 / (mass * std::abs(c.Z));
                          },
                          [mass](const Harmonic& h) {
                              return h.omega == 0.0 ? 1.0 : 1.0 / std::sqrt(mass * std::abs(h.omega));
                          },
                          [](const InverseSquare&) { return 1.0; },
                          [](const SphericalWell& w) { return w.radius; },
                          [mass](const PowerLaw& p) {
                              if (p.coeff == 0.0 || std::abs(p.exponent - 2.0) < 1e-9) {
                                  return 1.0;
                              }
                              return std::pow(std::abs(2.0 * mass * p.coeff), 1.0 / (p.exponent - 2.0));
                          },
                          [](const Tabulated& t) { return t.radii().back(); },
                          [mass](const Sum& s) {
                              double len = 0.0;
                              for (const auto& part : s.parts) {
                                  len = std::max(len, natural_length(part, mass));
                              }
                              return len > 0.0 ? len : 1.0;
                          },
                      },
                      model.variant());
}

std::string describe(const PotentialModel& model) {
    return std::visit(
        overloaded{
            [](const Coulomb& c) { return "coulomb:Z=" + fmt(c.Z); },
            [](const Harmonic& h) { return "harmonic:omega=" + fmt(h.omega) + ",mass=" + fmt(h.mass); },
            [](const InverseSquare& s) { return "invsq:g=" + fmt(s.g); },
            [](const SphericalWell& w) {
                return "well:depth=" + fmt(w.depth) + ",radius=" + fmt(w.radius);
            },
            [](const PowerLaw& p) { return "power:coeff=" + fmt(p.coeff) + ",p=" + fmt(p.exponent); },
            [](const Tabulated& t) {
                return "tabulated:n=" + std::to_string(t.radii().size()) + ",r=[" +
                       fmt(t.radii().front()) + "," + fmt(t.radii().back()) + "]";
            },
            [](const Sum& s) {
                if (s.parts.empty()) {
                    return std::string("zero");
                }
                std::string out;
                for (std::size_t i = 0; i < s.parts.size(); ++i) {
                    if (i > 0) {
                        out += "+";
                    }
                    out += describe(s.parts[i]);
                }
                return out;
            },
        },
        model.variant());
}

} // namespace radialbc
