#include "run_config.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace radialbc::cli {

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        out.push_back(trim(cur));
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

int parse_int(const std::string& field, const std::string& text) {
    const auto t = trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError("field '" + field + "': '" + text + "' is not an integer");
    }
    return v;
}

bool parse_bool(const std::string& field, const std::string& text) {
    const auto t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") {
        return true;
    }
    if (t == "false" || t == "0" || t == "no" || t == "off") {
        return false;
    }
    throw ConfigError("field '" + field + "': '" + text + "' is not a boolean");
}

// "name:k1=v1,k2=v2" -> name and parameter map
std::pair<std::string, std::map<std::string, std::string>> parse_descriptor(const std::string& field,
                                                                      const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = trim(text.substr(0, colon));
    std::map<std::string, std::string> params;
    if (colon != std::string::npos) {
        for (const auto& kv : split(text.substr(colon + 1), ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("field '" + field + "': parameter '" + kv + "' in '" + text +
                                  "' is not key=value");
            }
            params[trim(kv.substr(0, eq))] = trim(kv.substr(eq + 1));
        }
    }
    return {name, params};
}

double take(const std::string& field, std::map<std::string, std::string>& params,
            const std::string& key, std::optional<double> fallback = std::nullopt) {
    const auto it = params.find(key);
    if (it == params.end()) {
        if (fallback) {
            return *fallback;
        }
        throw ConfigError("field '" + field + "': missing parameter '" + key + "'");
    }
    const double v = parse_number(field + "." + key, it->second);
    params.erase(it);
    return v;
}

void no_leftovers(const std::string& field, const std::map<std::string, std::string>& params) {
    if (!params.empty()) {
        throw ConfigError("field '" + field + "': unknown parameter '" + params.begin()->first + "'");
    }
}

Tabulated load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("field 'potential': cannot open tabulated file '" + path + "'");
    }
    std::vector<double> r, v;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::string a, b;
        if (!(ls >> a >> b)) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected two columns 'r V'");
        }
        r.push_back(parse_number(path + ":" + std::to_string(lineno), a));
        v.push_back(parse_number(path + ":" + std::to_string(lineno), b));
    }
    try {
        return Tabulated(std::move(r), std::move(v));
    } catch (const DomainError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

PotentialModel parse_term(const std::string& text, double mass) {
    const std::string field = "potential";
    auto [name, params] = parse_descriptor(field, text);
    try {
        if (name == "coulomb") {
            const double Z = take(field, params, "Z");
            no_leftovers(field, params);
            return Coulomb{Z};
        }
        if (name == "harmonic") {
            const double omega = take(field, params, "omega");
            const double m = take(field, params, "mass", mass);
            no_leftovers(field, params);
            return Harmonic{omega, m};
        }
        if (name == "invsq") {
            const double g = take(field, params, "g");
            no_leftovers(field, params);
            return InverseSquare{g};
        }
        if (name == "well") {
            const double depth = take(field, params, "depth");
            const double radius = take(field, params, "radius", 1.0);
            no_leftovers(field, params);
            return SphericalWell{depth, radius};
        }
        if (name == "power") {
            const double c = take(field, params, "coeff");
            const double p = take(field, params, "p");
            no_leftovers(field, params);
            return PowerLaw{c, p};
        }
        if (name == "zero") {
            no_leftovers(field, params);
            return PotentialModel{};
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const DomainError& e) {
        throw ConfigError("field 'potential': " + std::string(e.what()));
    }
    if (name == "tabulated") {
        const auto it = params.find("file");
        if (it == params.end()) {
            throw ConfigError("field 'potential': tabulated needs file=PATH");
        }
        return load_table(it->second);
    }
    throw ConfigError("field 'potential': unknown potential kind '" + name +
                      "' (coulomb, harmonic, invsq, well, power, tabulated, zero)");
}

double pi_expression(const std::string& t) {
    // [k*]pi[/d]
    double coef = 1.0, den = 1.0;
    const auto pi = t.find("pi");
    const std::string head = t.substr(0, pi);
    const std::string tail = t.substr(pi + 2);
    if (!head.empty()) {
        if (head.back() != '*') {
            throw std::invalid_argument(t);
        }
        coef = std::stod(head.substr(0, head.size() - 1));
    }
    if (!tail.empty()) {
        if (tail.front() != '/') {
            throw std::invalid_argument(t);
        }
        std::size_t used = 0;
        den = std::stod(tail.substr(1), &used);
        if (used != tail.size() - 1) {
            throw std::invalid_argument(t);
        }
    }
    return coef * std::numbers::pi / den;
}

} // namespace

std::string to_string(Command c) {
    switch (c) {
    case Command::Indicial:
        return "indicial";
    case Command::Spectrum:
        return "spectrum";
    case Command::Diagnose:
        return "diagnose";
    case Command::Compare:
        return "compare";
    }
    return "unknown";
}

Command parse_command(const std::string& name) {
    for (const auto c : {Command::Indicial, Command::Spectrum, Command::Diagnose, Command::Compare}) {
        if (to_string(c) == name) {
            return c;
        }
    }
    throw ConfigError("unknown command '" + name + "'");
}

double parse_number(const std::string& field, const std::string& text) {
    const auto t = trim(text);
    double v = 0.0;
    if (t.find("pi") != std::string::npos) {
        try {
            return pi_expression(t);
        } catch (const std::exception&) {
            throw ConfigError("field '" + field + "': '" + text + "' is not a number");
        }
    }
    const char* first = t.data();
    if (!t.empty() && t.front() == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw ConfigError("field '" + field + "': '" + text + "' is not a number");
    }
    return v;
}

std::vector<double> parse_list(const std::string& field, const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) {
        out.push_back(parse_number(field, item));
    }
    if (out.empty()) {
        throw ConfigError("field '" + field + "': empty list");
    }
    return out;
}

PotentialModel parse_potential(const std::string& text, double mass) {
    // '+' joins terms only when a potential name follows (1e+5 stays a number)
    std::vector<std::string> terms;
    std::string cur;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '+' && i + 1 < text.size() && std::isalpha(static_cast<unsigned char>(text[i + 1]))) {
            terms.push_back(trim(cur));
            cur.clear();
        } else {
            cur += text[i];
        }
    }
    terms.push_back(trim(cur));
    if (terms.size() == 1) {
        if (terms.front().empty()) {
            throw ConfigError("field 'potential': empty potential");
        }
        return parse_term(terms.front(), mass);
    }
    Sum sum;
    for (const auto& t : terms) {
        if (t.empty()) {
            throw ConfigError("field 'potential': empty term in '" + text + "'");
        }
        sum.parts.push_back(parse_term(t, mass));
    }
    return sum;
}

BoundaryPolicy parse_policy(const std::string& text) {
    auto [name, params] = parse_descriptor("bc", text);
    if (name == "dirichlet" && params.empty()) {
        return DirichletOrigin{};
    }
    if (name == "l2" && params.empty()) {
        return L2Only{};
    }
    if (name == "sae") {
        MixedSAE s;
        s.theta = take("bc", params, "theta");
        s.length = take("bc", params, "L", 1.0);
        no_leftovers("bc", params);
        return s;
    }
    throw ConfigError("field 'bc': '" + text + "' is not one of dirichlet, l2, sae:theta=..,L=..");
}

const std::vector<std::string>& known_keys(Command c) {
    static const std::vector<std::string> indicial{"l", "two-m-v0", "v0", "mass", "format"};
    static const std::vector<std::string> spectrum{
        "potential", "bc", "kg", "l", "levels", "mass", "window", "r0", "rmax", "points",
        "emit-wavefunctions", "format"};
    static const std::vector<std::string> diagnose{
        "potential", "bc", "l", "mass", "window", "r0", "rmax", "points", "format",
        "candidate", "energy", "a-start", "ratio", "steps"};
    static const std::vector<std::string> compare{
        "potential", "l", "levels", "mass", "window", "r0", "rmax", "points", "format",
        "thetas", "L"};
    switch (c) {
    case Command::Indicial:
        return indicial;
    case Command::Spectrum:
        return spectrum;
    case Command::Diagnose:
        return diagnose;
    case Command::Compare:
        return compare;
    }
    return spectrum;
}

Settings read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config file '" + path + "' cannot be opened");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    Settings out;
    if (const auto first = text.find_first_not_of(" \t\r\n"); first != std::string::npos && text[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config file '" + path + "': invalid JSON: " + e.what());
        }
        if (!doc.contains("config") || !doc["config"].is_object()) {
            throw ConfigError("config file '" + path + "': JSON has no \"config\" object");
        }
        for (const auto& [k, v] : doc["config"].items()) {
            if (!v.is_string()) {
                throw ConfigError("config file '" + path + "': config." + k + " is not a string");
            }
            out[k] = v.get<std::string>();
        }
        return out;
    }
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        if (key.empty()) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        }
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

RadialProblem RunConfig::problem(int l) const {
    RadialProblem p;
    p.mass = mass;
    p.l = l;
    p.potential = potential;
    p.policy = policy;
    p.grid = grid;
    p.relativistic = kg;
    p.window = window;
    return p;
}

RunConfig build_config(Command command, const Settings& settings) {
    RunConfig cfg;
    cfg.command = command;
    const auto& keys = known_keys(command);
    for (const auto& [k, v] : settings) {
        if (k == "command") {
            if (v != to_string(command)) {
                throw ConfigError("config was written by '" + v + "', not '" + to_string(command) + "'");
            }
            continue;
        }
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
            throw ConfigError("unknown key '" + k + "' for command " + to_string(command));
        }
    }
    cfg.echo = settings;
    cfg.echo["command"] = to_string(command);

    const auto get = [&](const std::string& k) -> std::optional<std::string> {
        const auto it = settings.find(k);
        return it == settings.end() ? std::nullopt : std::optional<std::string>(it->second);
    };

    if (auto v = get("format")) {
        if (*v == "json") {
            cfg.format = Format::Json;
        } else if (*v == "csv") {
            cfg.format = Format::Csv;
        } else {
            throw ConfigError("field 'format': '" + *v + "' is not json or csv");
        }
    }
    if (auto v = get("l")) {
        const auto dots = v->find("..");
        if (dots == std::string::npos) {
            cfg.l_min = cfg.l_max = parse_int("l", *v);
        } else {
            cfg.l_min = parse_int("l", v->substr(0, dots));
            cfg.l_max = parse_int("l", v->substr(dots + 2));
        }
        if (cfg.l_min < 0 || cfg.l_max < cfg.l_min) {
            throw ConfigError("field 'l': '" + *v + "' is not a valid l or range lo..hi with 0 <= lo <= hi");
        }
    }

    if (command == Command::Indicial) {
        const auto two_m = get("two-m-v0");
        const auto v0 = get("v0");
        if (two_m && v0) {
            throw ConfigError("fields 'two-m-v0' and 'v0' are mutually exclusive");
        }
        if (two_m) {
            if (get("mass")) {
                throw ConfigError("field 'mass': not used with 'two-m-v0' (which fixes 2m = 1)");
            }
            cfg.mass = 0.5;
            cfg.V0 = parse_list("two-m-v0", *two_m);
        } else if (v0) {
            if (auto m = get("mass")) {
                cfg.mass = parse_number("mass", *m);
            }
            cfg.V0 = parse_list("v0", *v0);
        } else {
            throw ConfigError("indicial needs 'two-m-v0' or 'v0'");
        }
        if (!(cfg.mass > 0.0)) {
            throw ConfigError("field 'mass': must be > 0");
        }
        return cfg;
    }

    if (auto v = get("mass")) {
        cfg.mass = parse_number("mass", *v);
        if (!(cfg.mass > 0.0)) {
            throw ConfigError("field 'mass': must be > 0");
        }
    }
    if (auto v = get("potential")) {
        cfg.potential = parse_potential(*v, cfg.mass);
    } else if (command != Command::Diagnose) {
        throw ConfigError("field 'potential' is required for " + to_string(command));
    }
    if (auto v = get("bc")) {
        cfg.policy = parse_policy(*v);
    }
    if (auto v = get("kg")) {
        cfg.kg = parse_bool("kg", *v);
    }
    if (auto v = get("levels")) {
        cfg.levels = parse_int("levels", *v);
        if (cfg.levels < 1) {
            throw ConfigError("field 'levels': must be >= 1");
        }
    }
    if (auto v = get("window")) {
        const auto w = parse_list("window", *v);
        if (w.size() != 2 || !(w[0] < w[1])) {
            throw ConfigError("field 'window': expected lo,hi with lo < hi");
        }
        cfg.window = EnergyWindow{w[0], w[1]};
    }
    if (auto v = get("r0")) {
        cfg.grid.r0 = parse_number("r0", *v);
    }
    if (auto v = get("rmax")) {
        cfg.grid.r_max = parse_number("rmax", *v);
    }
    if (auto v = get("points")) {
        cfg.grid.n_points = parse_int("points", *v);
    }
    if (cfg.grid.r0 < 0.0 || cfg.grid.r_max < 0.0 ||
        (cfg.grid.r0 > 0.0 && cfg.grid.r_max > 0.0 && cfg.grid.r0 >= cfg.grid.r_max)) {
        throw ConfigError("fields 'r0'/'rmax': need 0 < r0 < rmax");
    }
    if (cfg.grid.n_points < RadialGrid::kMinPoints) {
        throw ConfigError("field 'points': need at least " + std::to_string(RadialGrid::kMinPoints));
    }
    if (auto v = get("emit-wavefunctions")) {
        cfg.emit_dir = *v;
    }

    if (command == Command::Diagnose) {
        const std::string text = get("candidate").value_or("eigen");
        auto [name, params] = parse_descriptor("candidate", text);
        if (name == "power") {
            cfg.candidate.kind = CandidateSpec::Kind::Power;
            cfg.candidate.power = {take("candidate", params, "c", 1.0), take("candidate", params, "a")};
        } else if (name == "pair") {
            cfg.candidate.kind = CandidateSpec::Kind::Pair;
            cfg.candidate.pair = {take("candidate", params, "c1"), take("candidate", params, "a1"),
                                  take("candidate", params, "c2"), take("candidate", params, "a2")};
        } else if (name == "eigen") {
            cfg.candidate.kind = CandidateSpec::Kind::Eigen;
            cfg.candidate.level = static_cast<int>(take("candidate", params, "n", 0.0));
            if (!get("potential")) {
                throw ConfigError("field 'potential' is required for an eigen candidate");
            }
        } else {
            throw ConfigError("field 'candidate': '" + text + "' is not power:c=..,a=.. / pair:c1=..,a1=..,c2=..,a2=.. / eigen[:n=..]");
        }
        no_leftovers("candidate", params);
        if (auto v = get("energy")) {
            cfg.energy = parse_number("energy", *v);
        }
        if (auto v = get("a-start")) {
            cfg.a_start = parse_number("a-start", *v);
        }
        if (auto v = get("ratio")) {
            cfg.ratio = parse_number("ratio", *v);
        }
        if (auto v = get("steps")) {
            cfg.steps = parse_int("steps", *v);
        }
        if (!(cfg.a_start > 0.0) || !(cfg.ratio > 0.0 && cfg.ratio < 1.0) || cfg.steps < 4) {
            throw ConfigError("fields 'a-start'/'ratio'/'steps': need a-start > 0, 0 < ratio < 1, steps >= 4");
        }
    }

    if (command == Command::Compare) {
        cfg.thetas = parse_list("thetas", get("thetas").value_or("0"));
        if (auto v = get("L")) {
            cfg.length = parse_number("L", *v);
        }
        if (!(cfg.length > 0.0)) {
            throw ConfigError("field 'L': must be > 0");
        }
    }
    return cfg;
}

} // namespace radialbc::cli
