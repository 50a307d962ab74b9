#include "app.hpp"

#include "radialbc/io.hpp"

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>

namespace radialbc::cli {

using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (const char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

json envelope(const RunConfig& cfg, json results, json diagnostics) {
    json config = json::object();
    for (const auto& [k, v] : cfg.echo) {
        config[k] = v;
    }
    return {{"config", std::move(config)},
            {"results", std::move(results)},
            {"diagnostics", std::move(diagnostics)}};
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

void log(const RunConfig& cfg, const std::string& msg) {
    if (cfg.verbosity > 0) {
        std::cerr << "radialbc: " << msg << "\n";
    }
}

// ---- indicial --------------------------------------------------------------

std::string run_indicial(const RunConfig& cfg) {
    const auto rows = admissibility_table(cfg.l_min, cfg.l_max, cfg.mass, cfg.V0);
    if (cfg.format == Format::Csv) {
        return admissibility_csv(rows);
    }
    int falls = 0;
    for (const auto& r : rows) {
        falls += r.fall_to_center() ? 1 : 0;
    }
    return dump(envelope(cfg, {{"rows", to_json(rows)}},
                         {{"rows", rows.size()}, {"fall_to_center_rows", falls}}));
}

// ---- spectrum --------------------------------------------------------------

std::vector<EigenResult> solve_all_l(const RunConfig& cfg) {
    std::vector<std::future<EigenResult>> jobs;
    for (int l = cfg.l_min; l <= cfg.l_max; ++l) {
        jobs.push_back(std::async(std::launch::async, [&cfg, l] { return spectrum(cfg.problem(l), cfg.levels); }));
    }
    std::vector<EigenResult> out;
    for (auto& j : jobs) {
        out.push_back(j.get());
    }
    return out;
}

std::string run_spectrum(const RunConfig& cfg) {
    log(cfg, "solving l = " + std::to_string(cfg.l_min) + ".." + std::to_string(cfg.l_max));
    const auto results = solve_all_l(cfg);

    json files = json::array();
    if (!cfg.emit_dir.empty()) {
        std::filesystem::create_directories(cfg.emit_dir);
        for (std::size_t k = 0; k < results.size(); ++k) {
            const int l = cfg.l_min + static_cast<int>(k);
            for (const auto& sol : results[k].solutions) {
                const auto path = std::filesystem::path(cfg.emit_dir) /
                                  ("l" + std::to_string(l) + "_n" + std::to_string(sol.level.n_r) + ".csv");
                std::ofstream f(path);
                if (!f) {
                    throw ConfigError("cannot write wavefunction file '" + path.string() + "'");
                }
                f << wavefunction_csv(sol);
                files.push_back(path.string());
            }
        }
    }

    if (cfg.format == Format::Csv) {
        std::string out = "l,n_r,E,match_defect,node_count\n";
        for (std::size_t k = 0; k < results.size(); ++k) {
            for (const auto& lv : results[k].levels) {
                out += std::to_string(cfg.l_min + static_cast<int>(k)) + ',' + std::to_string(lv.n_r) +
                       ',' + num(lv.energy) + ',' + num(lv.match_defect) + ',' +
                       std::to_string(lv.node_count) + '\n';
            }
        }
        return out;
    }

    json res = json::array();
    json notes = json::array();
    for (std::size_t k = 0; k < results.size(); ++k) {
        const int l = cfg.l_min + static_cast<int>(k);
        json entry = to_json(results[k]);
        entry["l"] = l;
        res.push_back(std::move(entry));
        const auto a = analyze(cfg.problem(l));
        if (std::holds_alternative<L2Only>(cfg.policy) && a.indicial.minus_l2) {
            notes.push_back("l=" + std::to_string(l) +
                            ": both small-r branches are square integrable (P = " + num(*a.indicial.P) +
                            " < 1); square integrability alone does not fix these levels");
        }
    }
    return dump(envelope(cfg, res, {{"notes", notes}, {"wavefunction_files", files}}));
}

// ---- diagnose --------------------------------------------------------------

std::string run_diagnose(const RunConfig& cfg) {
    CandidateU cand;
    cand.l = cfg.l_min;
    cand.energy = cfg.energy;
    cand.potential = cfg.potential;
    cand.mass = cfg.mass;
    json describe_candidate;
    switch (cfg.candidate.kind) {
    case CandidateSpec::Kind::Power:
        cand.form = cfg.candidate.power;
        describe_candidate = {{"form", "power"}, {"c", cfg.candidate.power.c}, {"a", cfg.candidate.power.a}};
        break;
    case CandidateSpec::Kind::Pair:
        cand.form = cfg.candidate.pair;
        describe_candidate = {{"form", "pair"},
                              {"c1", cfg.candidate.pair.c1},
                              {"a1", cfg.candidate.pair.a1},
                              {"c2", cfg.candidate.pair.c2},
                              {"a2", cfg.candidate.pair.a2}};
        break;
    case CandidateSpec::Kind::Eigen: {
        const auto sol = find_level(cfg.problem(cfg.l_min), cfg.candidate.level);
        cand = sampled_candidate(sol, cfg.l_min, sol.level.energy, cfg.potential, cfg.mass);
        describe_candidate = {{"form", "eigen"}, {"n_r", sol.level.n_r}, {"E", sol.level.energy}};
        break;
    }
    }
    const auto rep = residual_limit(cand, cfg.a_start, cfg.ratio, cfg.steps);
    if (cfg.format == Format::Csv) {
        return residual_csv(rep);
    }
    json res = to_json(rep);
    res["candidate"] = describe_candidate;
    return dump(envelope(cfg, res, {{"steps", rep.radii.size()}}));
}

// ---- compare ---------------------------------------------------------------

struct Column {
    std::string name;
    bool sae_nonzero = false;
    bool admissible = true;
    std::optional<EigenResult> result; // empty: no level at all
    std::string reason;
};

Column solve_column(const RunConfig& cfg, int l, BoundaryPolicy policy) {
    Column col;
    col.name = describe(policy);
    const auto* sae = std::get_if<MixedSAE>(&policy);
    col.sae_nonzero = sae != nullptr && sae->theta != 0.0;
    auto p = cfg.problem(l);
    p.policy = policy;
    if (col.sae_nonzero) {
        RadialProblem probe = p;
        probe.policy = DirichletOrigin{};
        if (analyze(probe).origin.kind == OriginClass::Kind::Regular) {
            col.admissible = false;
            col.reason = "regular potential: no admissible admixture";
            return col;
        }
    }
    try {
        col.result = spectrum(p, cfg.levels);
    } catch (const BracketError& e) {
        col.reason = e.what();
    }
    return col;
}

std::string run_compare(const RunConfig& cfg) {
    std::vector<BoundaryPolicy> policies{DirichletOrigin{}};
    for (const double t : cfg.thetas) {
        policies.push_back(MixedSAE{t, cfg.length});
    }
    // validate every policy before spending time on solves
    for (int l = cfg.l_min; l <= cfg.l_max; ++l) {
        for (const auto& pol : policies) {
            auto p = cfg.problem(l);
            p.policy = pol;
            RadialProblem probe = p;
            probe.policy = DirichletOrigin{};
            if (analyze(probe).origin.kind != OriginClass::Kind::Regular) {
                analyze(p);
            }
        }
    }

    std::vector<std::vector<std::future<Column>>> jobs;
    for (int l = cfg.l_min; l <= cfg.l_max; ++l) {
        auto& row = jobs.emplace_back();
        for (const auto& pol : policies) {
            row.push_back(std::async(std::launch::async, [&cfg, l, pol] { return solve_column(cfg, l, pol); }));
        }
    }
    std::vector<std::vector<Column>> cols;
    for (auto& row : jobs) {
        auto& out = cols.emplace_back();
        for (auto& j : row) {
            out.push_back(j.get());
        }
    }

    const auto energy_of = [](const Column& c, int n_r) -> std::optional<double> {
        if (!c.result) {
            return std::nullopt;
        }
        for (const auto& lv : c.result->levels) {
            if (lv.n_r == n_r) {
                return lv.energy;
            }
        }
        return std::nullopt;
    };

    int sae_only = 0;
    json rows = json::array();
    std::string csv = "l,n_r";
    for (const auto& pol : policies) {
        csv += ',' + csv_quote(describe(pol));
    }
    csv += '\n';
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const int l = cfg.l_min + static_cast<int>(k);
        for (int n = 0; n < cfg.levels; ++n) {
            json energies = json::array();
            bool any = false;
            std::string line = std::to_string(l) + ',' + std::to_string(n);
            const bool in_dirichlet = energy_of(cols[k][0], n).has_value();
            json only = json::array();
            for (const auto& c : cols[k]) {
                const auto E = energy_of(c, n);
                any = any || E.has_value();
                energies.push_back(E ? json(*E) : json(nullptr));
                line += ',' + (E ? num(*E) : std::string());
                if (E && c.sae_nonzero && !in_dirichlet) {
                    ++sae_only;
                    only.push_back(c.name);
                }
            }
            if (!any) {
                continue;
            }
            rows.push_back({{"l", l}, {"n_r", n}, {"E", energies}, {"sae_only", only}});
            csv += line + '\n';
        }
    }
    if (cfg.format == Format::Csv) {
        return csv + "# sae-only levels: " + std::to_string(sae_only) + "\n";
    }

    json names = json::array();
    for (const auto& pol : policies) {
        names.push_back(describe(pol));
    }
    json absent = json::array();
    for (std::size_t k = 0; k < cols.size(); ++k) {
        for (const auto& c : cols[k]) {
            if (!c.reason.empty()) {
                absent.push_back({{"l", cfg.l_min + static_cast<int>(k)}, {"policy", c.name}, {"reason", c.reason}});
            }
            if (c.result) {
                for (const auto& a : c.result->absent) {
                    absent.push_back({{"l", cfg.l_min + static_cast<int>(k)},
                                      {"policy", c.name},
                                      {"n_r", a.n_r},
                                      {"reason", a.reason}});
                }
            }
        }
    }
    const std::string summary = "SAE-only levels: " + std::to_string(sae_only);
    return dump(envelope(cfg, {{"policies", names}, {"rows", rows}, {"sae_only", sae_only}},
                         {{"summary", summary}, {"absent", absent}}));
}

constexpr const char* kCsvHelp =
    "CSV layouts (numbers with 17 significant digits):\n"
    "  indicial  l,two_m_V0,P,a_plus,a_minus,minus_l2,minus_bc,regime\n"
    "  spectrum  l,n_r,E,match_defect,node_count\n"
    "  wavefunction files  r,u\n"
    "  diagnose  a,S\n"
    "  compare   l,n_r,<one column per policy>, then '# sae-only levels: N'\n"
    "Exit codes: 0 ok, 1 usage error, 2 config error, 3 domain/physics rejection, 4 no convergence.";

} // namespace

std::string execute(const RunConfig& cfg) {
    switch (cfg.command) {
    case Command::Indicial:
        return run_indicial(cfg);
    case Command::Spectrum:
        return run_spectrum(cfg);
    case Command::Diagnose:
        return run_diagnose(cfg);
    case Command::Compare:
        return run_compare(cfg);
    }
    throw ConfigError("no command");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Radial Schroedinger / Klein-Gordon bound states with explicit origin boundary policies"};
    app.require_subcommand(1);
    app.footer(kCsvHelp);

    struct Sub {
        Command command;
        CLI::App* app;
        std::map<std::string, std::string> values;
        std::map<std::string, CLI::Option*> options;
        std::string config_file;
        std::string output;
        int verbosity = 0;
        bool kg = false;
    };
    std::vector<std::unique_ptr<Sub>> subs;
    const std::map<Command, std::string> blurb{
        {Command::Indicial, "indicial exponents and admissibility bands over an l x V0 grid"},
        {Command::Spectrum, "bound-state levels for a potential and boundary policy"},
        {Command::Diagnose, "small-sphere point-source residual of a candidate u(r)"},
        {Command::Compare, "Dirichlet spectrum next to MixedSAE spectra over a theta grid"}};
    const std::map<std::string, std::string> help{
        {"potential", "coulomb:Z=.. | harmonic:omega=.. | invsq:g=.. | well:depth=..,radius=.. | "
                      "power:coeff=..,p=.. | tabulated:file=.. | zero; join terms with '+'"},
        {"bc", "dirichlet | l2 | sae:theta=..,L=.."},
        {"l", "angular momentum, single value or range lo..hi"},
        {"levels", "number of levels n_r = 0..levels-1"},
        {"mass", "particle mass"},
        {"window", "energy window lo,hi"},
        {"r0", "series start-off radius (default automatic)"},
        {"rmax", "outer radius (default automatic)"},
        {"points", "grid points"},
        {"emit-wavefunctions", "directory for per-level r,u CSV files"},
        {"format", "json | csv"},
        {"two-m-v0", "comma-separated 2mV0 values (mass fixed to 1/2)"},
        {"v0", "comma-separated V0 values, used with --mass"},
        {"candidate", "power:c=..,a=.. | pair:c1=..,a1=..,c2=..,a2=.. | eigen[:n=..]"},
        {"energy", "energy of power candidates"},
        {"a-start", "largest sphere radius"},
        {"ratio", "radius ratio between steps, in (0,1)"},
        {"steps", "number of radii (>= 4)"},
        {"thetas", "comma-separated MixedSAE angles (pi, pi/4, 3*pi/4 accepted)"},
        {"L", "MixedSAE length for compare"}};

    for (const auto c : {Command::Indicial, Command::Spectrum, Command::Diagnose, Command::Compare}) {
        auto s = std::make_unique<Sub>();
        s->command = c;
        s->app = app.add_subcommand(to_string(c), blurb.at(c));
        s->app->footer(kCsvHelp);
        for (const auto& key : known_keys(c)) {
            if (key == "kg") {
                s->options[key] = s->app->add_flag("--kg", s->kg, "Klein-Gordon radial equation");
                continue;
            }
            s->options[key] = s->app->add_option("--" + key, s->values[key], help.at(key));
        }
        s->app->add_option("--config", s->config_file, "key = value file, or JSON emitted earlier (replay)");
        s->app->add_option("-o,--output", s->output, "output file (default standard output)");
        s->app->add_flag("-v,--verbose", s->verbosity, "progress on standard error");
        subs.push_back(std::move(s));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        for (const auto& s : subs) {
            if (!s->app->parsed()) {
                continue;
            }
            Settings settings;
            if (!s->config_file.empty()) {
                settings = read_config_file(s->config_file);
            }
            for (const auto& [key, opt] : s->options) {
                if (opt->count() > 0) {
                    settings[key] = key == "kg" ? std::string(s->kg ? "true" : "false") : s->values[key];
                }
            }
            auto cfg = build_config(s->command, settings);
            cfg.output = s->output;
            cfg.verbosity = s->verbosity;
            const std::string doc = execute(cfg);
            if (cfg.output.empty()) {
                out << doc;
            } else {
                std::ofstream f(cfg.output, std::ios::binary);
                if (!f) {
                    throw ConfigError("cannot open output file '" + cfg.output + "'");
                }
                f << doc;
            }
            return kOk;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        err << "rejected: " << e.what() << "\n";
        return kDomainError;
    } catch (const ConvergenceError& e) {
        err << "not converged: " << e.what() << "\n";
        return kNotConverged;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    return kUsage;
}

} // namespace radialbc::cli
