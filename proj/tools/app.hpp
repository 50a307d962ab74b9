#pragma once

#include "run_config.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>

namespace radialbc::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kConfigError = 2,
    kDomainError = 3,
    kNotConverged = 4,
};

/// Runs a parsed configuration and returns the document it writes
/// (JSON text or CSV).
std::string execute(const RunConfig& config);

/// Full command line: parsing, dispatch, output and exit-code mapping.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace radialbc::cli
