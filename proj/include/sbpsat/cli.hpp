#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sbpsat/dissipation.hpp"
#include "sbpsat/error.hpp"
#include "sbpsat/experiments.hpp"
#include "sbpsat/timestep.hpp"

namespace sbpsat::cli {

enum class DissipationChoice { none, accurate, upwind };

struct RunConfig {
    int experiment = 1;
    Scheme scheme = Scheme::sbp2;
    std::optional<DissipationChoice> dissipation; ///< unset: the scheme's default
    int nx = 100, ny = 100;                       ///< mesh intervals
    double cfl = 0.45;
    std::optional<double> t_final;                ///< unset: the experiment's default
    Integrator integrator = Integrator::rk2;
    std::string out_dir = ".";
    int dump_every = 0;
    bool study = false;
    double theta = 1.0;
    std::optional<int> rotations;

    ExperimentSpec spec() const { return sbpsat::experiment(experiment); }

    double final_time() const { return t_final ? *t_final : spec().t_final; }

    SchemeConfig scheme_config() const {
        SchemeConfig sc = sbpsat::scheme_config(scheme, spec());
        sc.theta = theta;
        if (dissipation) {
            if (*dissipation == DissipationChoice::none)
                sc.dissipation.reset();
            else
                sc.dissipation = *dissipation == DissipationChoice::accurate ? DissipationScaling::accurate
                                                                             : DissipationScaling::upwind;
        }
        return sc;
    }

    IntegratorConfig integrator_config() const {
        IntegratorConfig c;
        c.method = integrator;
        c.cfl = cfl;
        c.t_final = final_time();
        c.hook_every = dump_every;
        return c;
    }
};

/// Bad command line; `what()` is the message for the user.
class UsageError : public Error {
public:
    using Error::Error;
};

/// --help was given; `what()` is the help text.
class HelpRequested : public Error {
public:
    using Error::Error;
};

inline void build_app(CLI::App& app, RunConfig& c, std::string& scheme, std::string& integrator,
                      std::string& dissipation) {
    app.description("SBP-SAT finite difference solver for the 2D magnetic induction equations");
    app.add_option("--experiment", c.experiment, "Test problem")->check(CLI::IsMember({1, 2, 3}));
    app.add_option("--scheme", scheme, "sbp2/sbp4 plain; sbp1/sbp3 with upwind-scaled dissipation")
        ->check(CLI::IsMember({"sbp1", "sbp2", "sbp3", "sbp4"}));
    app.add_option("--nx", c.nx, "Mesh intervals along x")->check(CLI::PositiveNumber);
    app.add_option("--ny", c.ny, "Mesh intervals along y (default: nx)")->check(CLI::PositiveNumber);
    app.add_option("--cfl", c.cfl, "CFL number")->default_val(0.45);
    app.add_option("--tfinal", c.t_final, "Final time (default per experiment)");
    app.add_option("--integrator", integrator, "Runge-Kutta method")->check(CLI::IsMember({"rk2", "rk4"}));
    app.add_option("--dissipation", dissipation, "Artificial dissipation (default per scheme)")
        ->check(CLI::IsMember({"none", "accurate", "upwind"}));
    app.add_option("--out", c.out_dir, "Output directory");
    app.add_option("--dump-every", c.dump_every, "Write a field dump every N steps (0: final only)")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--study", c.study, "Run the convergence study over the experiment's grid list");
    app.add_option("--theta", c.theta, "SAT penalty strength (>= 0.5)")->default_val(1.0);
    app.add_option("--rotations", c.rotations, "Long-time run: error after each of N full rotations")
        ->check(CLI::NonNegativeNumber);
    app.footer("Examples:\n"
               "  sbpsat --experiment 1 --scheme sbp4 --nx 160 --ny 160\n"
               "  sbpsat --experiment 1 --scheme sbp2 --study --out results\n"
               "  sbpsat --experiment 1 --scheme sbp4 --nx 100 --rotations 5\n"
               "  sbpsat --experiment 3 --scheme sbp1 --nx 100\n"
               "  sbpsat --experiment 3 --scheme sbp2 --dissipation accurate\n");
}

/// Parses argv (argv[0] is the program name).
inline RunConfig parse_args(const std::vector<std::string>& argv) {
    RunConfig c;
    std::string scheme = "sbp2", integrator = "rk2", dissipation;
    CLI::App app;
    app.name(argv.empty() ? "sbpsat" : argv.front());
    build_app(app, c, scheme, integrator, dissipation);
    std::vector<std::string> args(argv.rbegin(), argv.rend());
    if (!args.empty()) args.pop_back();
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(std::string(e.what()) + "\nRun with --help for usage.");
    }

    c.scheme = *parse_scheme(scheme);
    c.integrator = integrator == "rk4" ? Integrator::rk4 : Integrator::rk2;
    if (app.count("--ny") == 0) c.ny = c.nx;
    if (!dissipation.empty())
        c.dissipation = dissipation == "none"       ? DissipationChoice::none
                        : dissipation == "accurate" ? DissipationChoice::accurate
                                                    : DissipationChoice::upwind;

    const bool upwind_scheme = c.scheme == Scheme::sbp1 || c.scheme == Scheme::sbp3;
    if (upwind_scheme && c.dissipation && *c.dissipation != DissipationChoice::upwind)
        throw UsageError(std::string("--scheme ") + to_string(c.scheme) +
                         " is defined by upwind dissipation; use sbp2/sbp4 for other dissipation modes");
    if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw UsageError("--cfl must lie in (0, 1]");
    if (c.t_final && !(*c.t_final >= 0.0)) throw UsageError("--tfinal must be non-negative");
    if (!(c.theta >= 0.5)) throw UsageError("--theta must be >= 0.5 for a stable SAT");
    if (c.rotations && c.experiment == 3) throw UsageError("--rotations needs a rotating experiment (1 or 2)");
    if (c.rotations && c.study) throw UsageError("--rotations and --study are exclusive");
    const int nmin = min_points(c.scheme == Scheme::sbp1 || c.scheme == Scheme::sbp2 ? 2 : 4) - 1;
    if (c.nx < nmin || c.ny < nmin)
        throw UsageError("--nx/--ny must be at least " + std::to_string(nmin) + " for " + to_string(c.scheme));
    return c;
}

inline RunConfig parse_args(int argc, const char* const* argv) {
    return parse_args(std::vector<std::string>(argv, argv + argc));
}

} // namespace sbpsat::cli
