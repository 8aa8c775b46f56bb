// Command-line driver: single runs, convergence studies and long-time runs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "sbpsat/cli.hpp"
#include "sbpsat/sbpsat.hpp"

namespace {

using namespace sbpsat;

std::string path_in(const cli::RunConfig& c, const std::string& name) {
    return (std::filesystem::path(c.out_dir) / name).string();
}

void dump(const cli::RunConfig& c, const InductionScheme& s, const MagneticField& v, double t, const std::string& name) {
    write_field_dump(v, s.grid, discrete_divergence(v, s.op_x, s.op_y), t, path_in(c, name),
                     DumpMetadata{c.experiment, to_string(c.scheme)});
}

void print_rows(const std::string& csv) { std::cout << csv; }

int run_single(const cli::RunConfig& c) {
    const ExperimentSpec spec = c.spec();
    const SchemeConfig sc = c.scheme_config();
    const IntegratorConfig cfg = c.integrator_config();
    const Grid2D grid = spec.grid(c.nx, c.ny);
    const InductionScheme s = make_scheme(spec, sc, grid);

    auto hook = [&](long step, double t, const MagneticField& v) {
        if (c.dump_every > 0 && step % c.dump_every == 0) dump(c, s, v, t, "field_" + std::to_string(step) + ".csv");
    };
    try {
        auto res = integrate(s, MagneticField::sample(grid, spec.initial), 0.0, cfg, hook);
        dump(c, s, res.state, res.time, "field_final.csv");
        ErrorRecord r = detail::make_record(spec, s, res.state, res.time);
        write_error_table({r}, path_in(c, "errors.csv"));
        std::cout << "experiment " << c.experiment << ", " << sc.label << ", grid " << r.grid << ", "
                  << res.steps << " steps to t=" << res.time << "\n";
        print_rows(format_error_table({r}));
        return 0;
    } catch (const InstabilityError& e) {
        MagneticField last(grid, e.last_state());
        dump(c, s, last, e.time(), "field_unstable.csv");
        std::cerr << e.what() << "; last finite state written to field_unstable.csv\n";
        return 2;
    }
}

int run_study(const cli::RunConfig& c) {
    const ExperimentSpec spec = c.spec();
    IntegratorConfig cfg = c.integrator_config();
    cfg.hook_every = 0;
    const auto tables = run_convergence_study(spec, {c.scheme_config()}, spec.grids, c.final_time(), cfg);
    int status = 0;
    for (const auto& t : tables) {
        const std::string name = "study_exp" + std::to_string(c.experiment) + "_" + t.scheme + ".csv";
        write_error_table(t.rows, path_in(c, name));
        std::cout << "# " << t.scheme << " -> " << name << "\n";
        print_rows(format_error_table(t.rows));
        for (const auto& r : t.rows)
            if (r.failed) status = 2;
    }
    return status;
}

int run_rotations(const cli::RunConfig& c) {
    const ExperimentSpec spec = c.spec();
    IntegratorConfig cfg = c.integrator_config();
    cfg.hook_every = 0;
    const auto rows = run_long_time(spec, c.scheme_config(), c.nx, *c.rotations, cfg);
    const std::string name = "longtime_exp" + std::to_string(c.experiment) + "_" + to_string(c.scheme) + ".csv";
    std::ofstream out(path_in(c, name), std::ios::binary);
    if (!out) throw Error("cannot open " + path_in(c, name) + " for writing");
    std::string text = "rotation,time,error_percent,div_l2,energy\n";
    int status = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        char line[256];
        if (r.failed) {
            std::snprintf(line, sizeof line, "%zu,%.6g,,,\n", k, r.time);
            status = 2;
        } else {
            std::snprintf(line, sizeof line, "%zu,%.6g,%.6g,%.6g,%.6g\n", k, r.time, r.error_percent, r.div_l2,
                          r.energy);
        }
        text += line;
    }
    out << text;
    std::cout << text;
    return status;
}

} // namespace

int main(int argc, char** argv) {
    sbpsat::cli::RunConfig cfg;
    try {
        cfg = sbpsat::cli::parse_args(argc, argv);
    } catch (const sbpsat::cli::HelpRequested& h) {
        std::cout << h.what();
        return 0;
    } catch (const sbpsat::cli::UsageError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    try {
        std::filesystem::create_directories(cfg.out_dir);
        if (cfg.study) return run_study(cfg);
        if (cfg.rotations) return run_rotations(cfg);
        return run_single(cfg);
    } catch (const sbpsat::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
