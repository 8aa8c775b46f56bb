#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbpsat/diagnostics.hpp"
#include "sbpsat/dissipation.hpp"
#include "sbpsat/error.hpp"
#include "sbpsat/grid.hpp"
#include "sbpsat/induction.hpp"
#include "sbpsat/timestep.hpp"

namespace sbpsat {

enum class BoundaryMode { zero, exact };

/// A test problem: domain, velocity, initial data and exact solution.
struct ExperimentSpec {
    int id = 0;
    std::string name;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    VectorField velocity;
    VectorField initial;
    VectorFieldT exact;
    BoundaryMode boundary = BoundaryMode::zero;
    double t_final = 0.0;
    std::vector<int> grids;          ///< mesh intervals per axis, refined by 2
    bool dissipation_by_default = false;

    Grid2D grid(int nx, int ny) const { return Grid2D::with_cells(xmin, xmax, ymin, ymax, nx, ny); }
    Grid2D grid(int n) const { return grid(n, n); }

    BoundaryData boundary_data() const {
        return boundary == BoundaryMode::zero ? BoundaryData::zero() : BoundaryData::exact(exact);
    }
};

namespace detail {
inline Vec2 rotating_hump(double x, double y) {
    const double e = 4.0 * std::exp(-20.0 * ((x - 0.5) * (x - 0.5) + y * y));
    return {-y * e, (x - 0.5) * e};
}

/// R(t) B0(R(-t) x): the hump rotated about the origin by angle t.
inline Vec2 rotated_hump(double x, double y, double t) {
    const double c = std::cos(t), s = std::sin(t);
    const Vec2 b = rotating_hump(c * x + s * y, -s * x + c * y);
    return {c * b[0] - s * b[1], s * b[0] + c * b[1]};
}

inline Vec2 diagonal_step(double x, double y) {
    return x > y ? Vec2{2.0, 2.0} : Vec2{0.0, 0.0};
}
} // namespace detail

/// Rotating Gaussian hump on [-1,1]^2, u = (-y, x), zero far-field data.
inline ExperimentSpec experiment1() {
    ExperimentSpec e;
    e.id = 1;
    e.name = "rotating hump, far-field boundary";
    e.xmin = -1.0, e.xmax = 1.0, e.ymin = -1.0, e.ymax = 1.0;
    e.velocity = [](double x, double y) { return Vec2{-y, x}; };
    e.initial = detail::rotating_hump;
    e.exact = detail::rotated_hump;
    e.boundary = BoundaryMode::zero;
    e.t_final = 2.0 * std::numbers::pi;
    e.grids = {40, 80, 160, 320, 640};
    return e;
}

/// The same hump on [0,1]^2, so it leaves and re-enters; exact boundary data.
inline ExperimentSpec experiment2() {
    ExperimentSpec e = experiment1();
    e.id = 2;
    e.name = "rotating hump crossing the boundary";
    e.xmin = 0.0, e.xmax = 1.0, e.ymin = 0.0, e.ymax = 1.0;
    e.boundary = BoundaryMode::exact;
    e.grids = {10, 20, 40, 80, 160};
    return e;
}

/// Discontinuous data translated by u = (1, 2) on [0,1]^2; B = (2,2) where
/// x > y, else 0 (the line x = y itself takes 0).
inline ExperimentSpec experiment3() {
    ExperimentSpec e;
    e.id = 3;
    e.name = "translating discontinuity";
    e.xmin = 0.0, e.xmax = 1.0, e.ymin = 0.0, e.ymax = 1.0;
    e.velocity = [](double, double) { return Vec2{1.0, 2.0}; };
    e.initial = detail::diagonal_step;
    e.exact = [](double x, double y, double t) { return detail::diagonal_step(x - t, y - 2.0 * t); };
    e.boundary = BoundaryMode::exact;
    e.t_final = 0.5;
    e.grids = {100};
    e.dissipation_by_default = true;
    return e;
}

inline ExperimentSpec experiment(int id) {
    switch (id) {
    case 1: return experiment1();
    case 2: return experiment2();
    case 3: return experiment3();
    default: throw ConfigError("unknown experiment " + std::to_string(id) + " (expected 1, 2 or 3)");
    }
}

/// Named schemes: sbp2/sbp4 are the plain SBP-SAT schemes, sbp1/sbp3 add
/// upwind-scaled dissipation to the order-2/order-4 operators.
enum class Scheme { sbp1, sbp2, sbp3, sbp4 };

inline const char* to_string(Scheme s) {
    switch (s) {
    case Scheme::sbp1: return "sbp1";
    case Scheme::sbp2: return "sbp2";
    case Scheme::sbp3: return "sbp3";
    case Scheme::sbp4: return "sbp4";
    }
    return "?";
}

inline std::optional<Scheme> parse_scheme(const std::string& s) {
    if (s == "sbp1") return Scheme::sbp1;
    if (s == "sbp2") return Scheme::sbp2;
    if (s == "sbp3") return Scheme::sbp3;
    if (s == "sbp4") return Scheme::sbp4;
    return std::nullopt;
}

struct SchemeConfig {
    std::string label;
    int order = 2;
    std::optional<DissipationScaling> dissipation;
    std::optional<double> alpha; ///< default: max over nodes of |u1| + |u2|
    double theta = 1.0;
};

/// Scheme with its default dissipation for the given experiment.
inline SchemeConfig scheme_config(Scheme s, const ExperimentSpec& e) {
    SchemeConfig c;
    c.label = to_string(s);
    switch (s) {
    case Scheme::sbp1: c.order = 2, c.dissipation = DissipationScaling::upwind; break;
    case Scheme::sbp3: c.order = 4, c.dissipation = DissipationScaling::upwind; break;
    case Scheme::sbp2: c.order = 2; break;
    case Scheme::sbp4: c.order = 4; break;
    }
    if (!c.dissipation && e.dissipation_by_default) c.dissipation = DissipationScaling::accurate;
    return c;
}

inline InductionScheme make_scheme(const ExperimentSpec& e, const SchemeConfig& sc, const Grid2D& grid) {
    return make_scheme(grid, sc.order, e.velocity, e.boundary_data(), sc.theta, sc.dissipation, sc.alpha);
}

struct EnergySample {
    double time;
    double energy;
};

struct RunResult {
    MagneticField field;
    ErrorRecord record;
    std::vector<EnergySample> energy; ///< P-energy at t0, every sampled step, and the end
    long steps = 0;
};

namespace detail {
inline ErrorRecord make_record(const ExperimentSpec& e, const InductionScheme& s, const MagneticField& v, double t) {
    ErrorRecord r;
    r.nx = s.grid.npx() - 1;
    r.ny = s.grid.npy() - 1;
    r.grid = s.grid.label();
    r.error_percent = rel_percent_error(v, e.exact, t);
    r.div_l2 = l2_norm(s.grid, discrete_divergence(v, s.op_x, s.op_y));
    r.energy = p_energy(v, s.op_x, s.op_y);
    r.time = t;
    return r;
}
} // namespace detail

/// Runs one experiment from its initial data to cfg.t_final. The hook, if
/// given, is called as hook(step, t, field) per cfg.hook_every.
template <class Hook>
RunResult run_experiment(const ExperimentSpec& e, const SchemeConfig& sc, int nx, int ny, const IntegratorConfig& cfg,
                         Hook&& hook) {
    const Grid2D grid = e.grid(nx, ny);
    const InductionScheme s = make_scheme(e, sc, grid);
    MagneticField v0 = MagneticField::sample(grid, e.initial);
    std::vector<EnergySample> energy{{0.0, p_energy(v0, s.op_x, s.op_y)}};
    auto rec = [&](long step, double t, const MagneticField& v) {
        energy.push_back({t, p_energy(v, s.op_x, s.op_y)});
        hook(step, t, v);
    };
    auto res = integrate(s, std::move(v0), 0.0, cfg, rec);
    ErrorRecord r = detail::make_record(e, s, res.state, res.time);
    return RunResult{std::move(res.state), std::move(r), std::move(energy), res.steps};
}

inline RunResult run_experiment(const ExperimentSpec& e, const SchemeConfig& sc, int nx, int ny,
                                const IntegratorConfig& cfg) {
    return run_experiment(e, sc, nx, ny, cfg, [](long, double, const MagneticField&) {});
}

/// Errors for one scheme over a grid sequence.
struct StudyTable {
    std::string scheme;
    std::vector<ErrorRecord> rows;

    std::vector<std::optional<double>> error_rates() const { return rates(&ErrorRecord::error_percent); }
    std::vector<std::optional<double>> div_rates() const { return rates(&ErrorRecord::div_l2); }

private:
    std::vector<std::optional<double>> rates(double ErrorRecord::*field) const {
        std::vector<double> e;
        for (const auto& r : rows) e.push_back(r.failed ? 0.0 : r.*field);
        return convergence_rate(e);
    }
};

/// Runs every scheme on every grid (square, `n` intervals per axis) up to
/// t_final. An unstable run becomes a failed row; the study carries on.
inline std::vector<StudyTable> run_convergence_study(const ExperimentSpec& e, const std::vector<SchemeConfig>& schemes,
                                                     const std::vector<int>& grids, double t_final,
                                                     IntegratorConfig cfg = {}) {
    for (std::size_t k = 1; k < grids.size(); ++k)
        if (grids[k] != 2 * grids[k - 1]) throw ConfigError("convergence study grids must refine by a factor of 2");
    cfg.t_final = t_final;
    std::vector<StudyTable> out;
    for (const auto& sc : schemes) {
        StudyTable table{sc.label, {}};
        for (int n : grids) {
            try {
                table.rows.push_back(run_experiment(e, sc, n, n, cfg).record);
            } catch (const InstabilityError& err) {
                ErrorRecord r;
                r.nx = r.ny = n;
                r.grid = std::to_string(n) + "x" + std::to_string(n);
                r.time = err.time();
                r.failed = true;
                table.rows.push_back(r);
            }
        }
        out.push_back(std::move(table));
    }
    return out;
}

/// Error after each full rotation (t = 2 pi k, k = 0..rotations) on an n x n
/// mesh. Only meaningful for the rotating experiments.
inline std::vector<ErrorRecord> run_long_time(const ExperimentSpec& e, const SchemeConfig& sc, int n, int rotations,
                                              IntegratorConfig cfg = {}) {
    if (e.id != 1 && e.id != 2) throw ConfigError("long-time runs need a rotating experiment (1 or 2)");
    if (rotations < 0) throw ConfigError("rotations must be non-negative");
    const Grid2D grid = e.grid(n);
    const InductionScheme s = make_scheme(e, sc, grid);
    MagneticField v = MagneticField::sample(grid, e.initial);
    std::vector<ErrorRecord> out{detail::make_record(e, s, v, 0.0)};
    const double period = 2.0 * std::numbers::pi;
    double t = 0.0;
    for (int k = 1; k <= rotations; ++k) {
        cfg.t_final = k * period;
        try {
            auto res = integrate(s, std::move(v), t, cfg);
            v = std::move(res.state);
            t = res.time;
            out.push_back(detail::make_record(e, s, v, t));
        } catch (const InstabilityError& err) {
            ErrorRecord r;
            r.nx = r.ny = n;
            r.grid = grid.label();
            r.time = err.time();
            r.failed = true;
            out.push_back(r);
            break;
        }
    }
    return out;
}

} // namespace sbpsat
