#pragma once

#include "radialbc/deltadiag.hpp"
#include "radialbc/rsolve.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace radialbc::cli {

/// Raw key -> value settings, as written in a config file or on the command line.
using Settings = std::map<std::string, std::string>;

enum class Command { Indicial, Spectrum, Diagnose, Compare };
enum class Format { Json, Csv };

std::string to_string(Command c);
Command parse_command(const std::string& name);

struct CandidateSpec {
    enum class Kind { Power, Pair, Eigen } kind = Kind::Eigen;
    PowerForm power;
    PowerPairForm pair;
    int level = 0; ///< n_r of the eigenfunction for Kind::Eigen
};

struct RunConfig {
    Command command = Command::Spectrum;
    Settings echo; ///< normalized settings echoed into every output

    PotentialModel potential;
    BoundaryPolicy policy = DirichletOrigin{};
    bool kg = false;
    double mass = 1.0;
    int l_min = 0;
    int l_max = 0;
    int levels = 1;
    std::optional<EnergyWindow> window;
    GridSettings grid;
    std::string emit_dir;
    Format format = Format::Json;

    std::vector<double> V0; ///< indicial grid of V0 values (with mass)

    CandidateSpec candidate;
    double energy = 0.0;
    double a_start = 1e-2;
    double ratio = 0.5;
    int steps = 8;

    std::vector<double> thetas;
    double length = 1.0;

    std::string output; ///< empty: standard output
    int verbosity = 0;

    RadialProblem problem(int l) const;
};

/// Keys accepted by a command (flags without the leading dashes).
const std::vector<std::string>& known_keys(Command c);

/// Reads `key = value` lines (# comments) or a JSON document previously
/// emitted by this tool, whose "config" object is replayed.
Settings read_config_file(const std::string& path);

/// Validates and converts settings. Throws ConfigError naming the field.
RunConfig build_config(Command command, const Settings& settings);

// Parsers shared with the tests.
double parse_number(const std::string& field, const std::string& text);
std::vector<double> parse_list(const std::string& field, const std::string& text);
PotentialModel parse_potential(const std::string& text, double mass);
BoundaryPolicy parse_policy(const std::string& text);

} // namespace radialbc::cli
