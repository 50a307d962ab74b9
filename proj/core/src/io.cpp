#include "radialbc/io.hpp"

#include "format.hpp"

#include <cmath>

namespace radialbc {

using detail::fmt17;
using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

json to_json(const IndicialReport& row) {
    json j{{"l", row.l},
           {"two_m_V0", row.two_m_V0},
           {"P", row.P ? json(*row.P) : json(nullptr)},
           {"a_plus", number_or_null(row.a_plus)},
           {"a_minus", number_or_null(row.a_minus)},
           {"plus_l2", row.plus_l2},
           {"minus_l2", row.minus_l2},
           {"plus_bc", row.plus_bc},
           {"minus_bc", row.minus_bc},
           {"degenerate", row.degenerate},
           {"regime", to_string(row.regime)}};
    return j;
}

json to_json(std::span<const IndicialReport> rows) {
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back(to_json(r));
    }
    return out;
}

json to_json(const EigenResult& result) {
    json levels = json::array();
    for (std::size_t i = 0; i < result.levels.size(); ++i) {
        const auto& lv = result.levels[i];
        json row{{"n_r", lv.n_r},
                 {"E", lv.energy},
                 {"match_defect", lv.match_defect},
                 {"node_count", lv.node_count}};
        if (i < result.solutions.size()) {
            const auto& g = result.solutions[i].grid;
            row["grid"] = {{"r0", g.r0}, {"r_max", g.r_max}, {"n_points", g.n_points}, {"scale", g.scale}};
            row["iterations"] = result.solutions[i].iterations;
        }
        levels.push_back(std::move(row));
    }
    json absent = json::array();
    for (const auto& a : result.absent) {
        absent.push_back({{"n_r", a.n_r}, {"reason", a.reason}});
    }
    return {{"policy", result.policy},
            {"levels", std::move(levels)},
            {"absent", std::move(absent)},
            {"iterations", result.iterations}};
}

std::string eigen_csv(const EigenResult& result) {
    std::string out = "n_r,E,match_defect,node_count\n";
    for (const auto& lv : result.levels) {
        out += std::to_string(lv.n_r) + ',' + fmt17(lv.energy) + ',' + fmt17(lv.match_defect) +
               ',' + std::to_string(lv.node_count) + '\n';
    }
    return out;
}

std::string wavefunction_csv(const LevelSolution& solution) {
    std::string out = "r,u\n";
    out.reserve(out.size() + solution.r.size() * 50);
    for (std::size_t i = 0; i < solution.r.size(); ++i) {
        out += fmt17(solution.r[i]) + ',' + fmt17(solution.u[i]) + '\n';
    }
    return out;
}

json to_json(const ResidualReport& report) {
    return {{"radii", report.radii},
            {"S_values", report.S_values},
            {"S_limit", number_or_null(report.S_limit)},
            {"order", number_or_null(report.order)},
            {"tol_S", report.tol_S},
            {"verdict", to_string(report.verdict)},
            {"strength", report.strength},
            {"sign_convention", report.sign_convention}};
}

std::string residual_csv(const ResidualReport& report) {
    std::string out = "a,S\n";
    for (std::size_t i = 0; i < report.radii.size(); ++i) {
        out += fmt17(report.radii[i]) + ',' + fmt17(report.S_values[i]) + '\n';
    }
    return out;
}

} // namespace radialbc
