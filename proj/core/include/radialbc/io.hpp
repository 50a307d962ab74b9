#pragma once

#include "radialbc/deltadiag.hpp"
#include "radialbc/indicial.hpp"
#include "radialbc/rsolve.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>

namespace radialbc {

nlohmann::json to_json(const IndicialReport& row);
nlohmann::json to_json(std::span<const IndicialReport> rows);

/// Levels, absent levels and solver metadata; wavefunctions are not included.
nlohmann::json to_json(const EigenResult& result);
/// Header n_r,E,match_defect,node_count.
std::string eigen_csv(const EigenResult& result);
/// Header r,u.
std::string wavefunction_csv(const LevelSolution& solution);

nlohmann::json to_json(const ResidualReport& report);
/// Header a,S.
std::string residual_csv(const ResidualReport& report);

} // namespace radialbc
