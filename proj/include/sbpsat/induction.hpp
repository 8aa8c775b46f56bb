#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sbpsat/dissipation.hpp"
#include "sbpsat/error.hpp"
#include "sbpsat/grid.hpp"
#include "sbpsat/sbp_operator.hpp"

namespace sbpsat {

using Vec2 = std::array<double, 2>;
/// Steady vector field u(x, y).
using VectorField = std::function<Vec2(double x, double y)>;
/// Time-dependent vector field B(x, y, t).
using VectorFieldT = std::function<Vec2(double x, double y, double t)>;

/// Two-component nodal field (B1 then B2), each in grid storage order.
class MagneticField {
public:
    explicit MagneticField(const Grid2D& grid) : grid_(grid), data_(2 * grid.size(), 0.0) {}

    MagneticField(const Grid2D& grid, std::vector<double> data) : grid_(grid), data_(std::move(data)) {
        if (data_.size() != 2 * grid_.size())
            throw DimensionError("MagneticField: expected " + std::to_string(2 * grid_.size()) +
                                 " values, got " + std::to_string(data_.size()));
    }

    template <class F>
    static MagneticField sample(const Grid2D& grid, F&& f) {
        MagneticField v(grid);
        for (int i = 0; i < grid.npx(); ++i)
            for (int j = 0; j < grid.npy(); ++j) {
                const Vec2 b = f(grid.x(i), grid.y(j));
                v.b1()[grid.index(i, j)] = b[0];
                v.b2()[grid.index(i, j)] = b[1];
            }
        return v;
    }

    const Grid2D& grid() const { return grid_; }
    std::size_t size() const { return data_.size(); }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }
    std::span<double> component(int c) { return std::span<double>(data_).subspan(c * grid_.size(), grid_.size()); }
    std::span<const double> component(int c) const {
        return std::span<const double>(data_).subspan(c * grid_.size(), grid_.size());
    }
    std::span<double> b1() { return component(0); }
    std::span<double> b2() { return component(1); }
    std::span<const double> b1() const { return component(0); }
    std::span<const double> b2() const { return component(1); }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
    }

private:
    Grid2D grid_;
    std::vector<double> data_;
};

/// Sampled velocity and its SBP derivatives, the data behind the Lambda and C
/// matrices of the scheme.
struct VelocityCoeffs {
    Grid2D grid;
    std::vector<double> lam_x, lam_y; ///< u1, u2 at the nodes
    std::vector<double> du1dx, du1dy, du2dx, du2dy;
    VectorField velocity;

    double max_abs_u1() const { return max_abs(lam_x); }
    double max_abs_u2() const { return max_abs(lam_y); }
    /// max over nodes of |u1| + |u2|.
    double max_speed_sum() const {
        double m = 0.0;
        for (std::size_t k = 0; k < lam_x.size(); ++k) m = std::max(m, std::abs(lam_x[k]) + std::abs(lam_y[k]));
        return m;
    }

private:
    static double max_abs(const std::vector<double>& v) {
        double m = 0.0;
        for (double a : v) m = std::max(m, std::abs(a));
        return m;
    }
};

inline VelocityCoeffs sample_velocity(const VectorField& velocity, const Grid2D& grid, const SbpOperator1D& op_x,
                                      const SbpOperator1D& op_y) {
    VelocityCoeffs c{grid, {}, {}, {}, {}, {}, {}, velocity};
    c.lam_x.resize(grid.size());
    c.lam_y.resize(grid.size());
    for (int i = 0; i < grid.npx(); ++i)
        for (int j = 0; j < grid.npy(); ++j) {
            const Vec2 u = velocity(grid.x(i), grid.y(j));
            if (!std::isfinite(u[0]) || !std::isfinite(u[1]))
                throw NonFiniteError("sample_velocity: non-finite velocity at node (" + std::to_string(i) + ", " +
                                     std::to_string(j) + "), x=" + std::to_string(grid.x(i)) +
                                     " y=" + std::to_string(grid.y(j)));
            c.lam_x[grid.index(i, j)] = u[0];
            c.lam_y[grid.index(i, j)] = u[1];
        }
    c.du1dx = apply_dx(op_x, c.lam_x, grid);
    c.du2dx = apply_dx(op_x, c.lam_y, grid);
    c.du1dy = apply_dy(op_y, c.lam_x, grid);
    c.du2dy = apply_dy(op_y, c.lam_y, grid);
    return c;
}

/// Penalty coefficient at one boundary node.
///
/// `u_normal_axis` is the Cartesian velocity component along the side's
/// normal axis (u1 on x-sides, u2 on y-sides). Data enters where that
/// component points into the domain; there sigma = -theta*|u|, elsewhere 0.
/// theta >= 1/2 is the energy-stability bound.
inline double sat_sigma(Side side, double u_normal_axis, double theta) {
    if (!(theta >= 0.5))
        throw ConfigError("SAT strength theta must be >= 1/2 for stability, got " + std::to_string(theta));
    const bool lower = side == Side::xmin || side == Side::ymin;
    const bool inflow = lower ? u_normal_axis > 0.0 : u_normal_axis < 0.0;
    return inflow ? -theta * std::abs(u_normal_axis) : 0.0;
}

/// Per-side, per-node penalty coefficients, frozen at the boundary velocity.
struct SatConfig {
    double theta = 1.0;
    std::array<std::vector<double>, 4> sigma;

    const std::vector<double>& on(Side s) const { return sigma[static_cast<int>(s)]; }

    /// SAT terms switched off entirely. Only useful for tests and diagnostics.
    static SatConfig disabled(const Grid2D& grid) {
        SatConfig s;
        s.theta = 0.0;
        for (Side side : all_sides) s.sigma[static_cast<int>(side)].assign(grid.side_points(side), 0.0);
        return s;
    }

    /// True if every sigma satisfies sigma <= -|u_n|/2 at inflow and is 0 at outflow.
    bool satisfies_bound(const VelocityCoeffs& coeffs) const {
        const Grid2D& g = coeffs.grid;
        for (Side side : all_sides) {
            const auto& sg = on(side);
            for (int k = 0; k < g.side_points(side); ++k) {
                const std::size_t idx = g.side_index(side, k);
                const double u = (side == Side::xmin || side == Side::xmax) ? coeffs.lam_x[idx] : coeffs.lam_y[idx];
                const bool lower = side == Side::xmin || side == Side::ymin;
                const bool inflow = lower ? u > 0.0 : u < 0.0;
                if (inflow ? !(sg[k] <= -0.5 * std::abs(u)) : sg[k] != 0.0) return false;
            }
        }
        return true;
    }
};

inline SatConfig make_sat(const VelocityCoeffs& coeffs, double theta = 1.0) {
    SatConfig s;
    s.theta = theta;
    const Grid2D& g = coeffs.grid;
    for (Side side : all_sides) {
        auto& sg = s.sigma[static_cast<int>(side)];
        sg.resize(g.side_points(side));
        const bool x_side = side == Side::xmin || side == Side::xmax;
        for (int k = 0; k < g.side_points(side); ++k) {
            const std::size_t idx = g.side_index(side, k);
            sg[k] = sat_sigma(side, x_side ? coeffs.lam_x[idx] : coeffs.lam_y[idx], theta);
        }
    }
    return s;
}

/// Dirichlet data g on the four sides.
class BoundaryData {
public:
    enum class Mode { zero, exact, table };

    /// g = 0 everywhere (far-field boundary).
    static BoundaryData zero() { return BoundaryData(Mode::zero); }

    /// g = trace of a known solution B(x, y, t).
    static BoundaryData exact(VectorFieldT solution) {
        BoundaryData b(Mode::exact);
        b.solution_ = std::move(solution);
        return b;
    }

    /// Tabulated traces: values[side][time index][node], linearly
    /// interpolated in time between `times` (strictly increasing).
    static BoundaryData table(std::vector<double> times, std::array<std::vector<std::vector<Vec2>>, 4> values) {
        if (times.empty()) throw ConfigError("BoundaryData::table: no time levels");
        for (std::size_t k = 1; k < times.size(); ++k)
            if (!(times[k] > times[k - 1])) throw ConfigError("BoundaryData::table: times must increase");
        for (const auto& side : values)
            if (side.size() != times.size())
                throw DimensionError("BoundaryData::table: one trace per time level expected on every side");
        BoundaryData b(Mode::table);
        b.times_ = std::move(times);
        b.table_ = std::move(values);
        return b;
    }

    Mode mode() const { return mode_; }

    /// (g1, g2) at every node of `side` at time t.
    std::vector<Vec2> trace(const Grid2D& grid, Side side, double t) const {
        const int n = grid.side_points(side);
        std::vector<Vec2> out(n, Vec2{0.0, 0.0});
        switch (mode_) {
        case Mode::zero:
            break;
        case Mode::exact:
            for (int k = 0; k < n; ++k) {
                const auto [x, y] = node(grid, side, k);
                out[k] = solution_(x, y, t);
            }
            break;
        case Mode::table: {
            if (t < times_.front() || t > times_.back())
                throw ConfigError("BoundaryData: t=" + std::to_string(t) + " outside tabulated interval [" +
                                  std::to_string(times_.front()) + ", " + std::to_string(times_.back()) + "]");
            const auto& levels = table_[static_cast<int>(side)];
            std::size_t hi = std::upper_bound(times_.begin(), times_.end(), t) - times_.begin();
            if (hi == times_.size()) hi = times_.size() - 1;
            const std::size_t lo = hi == 0 ? 0 : hi - 1;
            const double w = hi == lo ? 0.0 : (t - times_[lo]) / (times_[hi] - times_[lo]);
            if (levels[lo].size() != static_cast<std::size_t>(n) || levels[hi].size() != static_cast<std::size_t>(n))
                throw DimensionError(std::string("BoundaryData: table trace length mismatch on side ") + to_string(side));
            for (int k = 0; k < n; ++k)
                for (int c = 0; c < 2; ++c) out[k][c] = (1.0 - w) * levels[lo][k][c] + w * levels[hi][k][c];
            break;
        }
        }
        return out;
    }

private:
    explicit BoundaryData(Mode m) : mode_(m) {}

    static std::pair<double, double> node(const Grid2D& g, Side side, int k) {
        switch (side) {
        case Side::xmin: return {g.xmin(), g.y(k)};
        case Side::xmax: return {g.xmax(), g.y(k)};
        case Side::ymin: return {g.x(k), g.ymin()};
        case Side::ymax: return {g.x(k), g.ymax()};
        }
        return {0.0, 0.0};
    }

    Mode mode_;
    VectorFieldT solution_;
    std::vector<double> times_;
    std::array<std::vector<std::vector<Vec2>>, 4> table_;
};

inline std::vector<Vec2> boundary_trace(const BoundaryData& g, const Grid2D& grid, Side side, double t) {
    return g.trace(grid, side, t);
}

/// Artificial dissipation along x and y, applied to both components.
struct DissipationPair {
    DissipationOperator1D x;
    DissipationOperator1D y;
};

/// Everything the semi-discrete right-hand side depends on besides the state.
struct InductionScheme {
    Grid2D grid;
    SbpOperator1D op_x, op_y;
    VelocityCoeffs coeffs;
    BoundaryData boundary;
    SatConfig sat;
    std::optional<DissipationPair> dissipation;
};

namespace detail {
inline void check_scheme_shapes(const InductionScheme& s, const MagneticField& v) {
    const Grid2D& g = s.grid;
    if (v.grid().npx() != g.npx() || v.grid().npy() != g.npy())
        throw DimensionError("compute_rhs: field grid " + v.grid().label() + " does not match scheme grid " + g.label());
    if (s.coeffs.lam_x.size() != g.size() || s.coeffs.lam_y.size() != g.size())
        throw DimensionError("compute_rhs: velocity samples do not match the grid");
    for (Side side : all_sides)
        if (s.sat.on(side).size() != static_cast<std::size_t>(g.side_points(side)))
            throw DimensionError(std::string("compute_rhs: SAT coefficients missing on side ") + to_string(side));
}
} // namespace detail

/// dV/dt of the SBP-SAT scheme:
///
///   -u1 Dx V - u2 Dy V + M V + SAT + dissipation
///
/// with the lower-order coupling (discrete derivatives of u)
///   M V = (-du2dy V1 + du1dy V2,  du2dx V1 - du1dx V2)
/// and, at every boundary node with sigma != 0, sigma / p_boundary * (V - g)
/// added to both components. Corner nodes collect both sides' terms.
inline void compute_rhs(const InductionScheme& s, const MagneticField& v, double t, MagneticField& out) {
    detail::check_scheme_shapes(s, v);
    if (out.size() != v.size()) throw DimensionError("compute_rhs: output field has the wrong size");
    if (!v.all_finite()) throw NonFiniteError("compute_rhs: non-finite value in state at t=" + std::to_string(t));

    const Grid2D& g = s.grid;
    const std::size_t n = g.size();
    const VelocityCoeffs& c = s.coeffs;
    std::vector<double> dy(n);

    for (int comp = 0; comp < 2; ++comp) {
        auto vin = v.component(comp);
        auto o = out.component(comp);
        apply_dx(s.op_x, vin, g, o);
        apply_dy(s.op_y, vin, g, dy);
        for (std::size_t k = 0; k < n; ++k) o[k] = -c.lam_x[k] * o[k] - c.lam_y[k] * dy[k];
        if (s.dissipation) {
            s.dissipation->x.apply_axis(Axis::x, g, vin, o, true);
            s.dissipation->y.apply_axis(Axis::y, g, vin, o, true);
        }
    }

    auto b1 = v.b1();
    auto b2 = v.b2();
    auto o1 = out.b1();
    auto o2 = out.b2();
    for (std::size_t k = 0; k < n; ++k) {
        o1[k] += -c.du2dy[k] * b1[k] + c.du1dy[k] * b2[k];
        o2[k] += c.du2dx[k] * b1[k] - c.du1dx[k] * b2[k];
    }

    for (Side side : all_sides) {
        const auto& sigma = s.sat.on(side);
        if (std::all_of(sigma.begin(), sigma.end(), [](double x) { return x == 0.0; })) continue;
        double pb = 0.0;
        switch (side) {
        case Side::xmin: pb = s.op_x.norm(0); break;
        case Side::xmax: pb = s.op_x.norm(s.op_x.size() - 1); break;
        case Side::ymin: pb = s.op_y.norm(0); break;
        case Side::ymax: pb = s.op_y.norm(s.op_y.size() - 1); break;
        }
        const std::vector<Vec2> data = s.boundary.trace(g, side, t);
        for (int k = 0; k < g.side_points(side); ++k) {
            if (sigma[k] == 0.0) continue;
            const std::size_t idx = g.side_index(side, k);
            const double a = sigma[k] / pb;
            o1[idx] += a * (b1[idx] - data[k][0]);
            o2[idx] += a * (b2[idx] - data[k][1]);
        }
    }
}

inline MagneticField compute_rhs(const InductionScheme& s, const MagneticField& v, double t) {
    MagneticField out(v.grid());
    compute_rhs(s, v, t, out);
    return out;
}

/// Assembles a scheme from its parts; sigma values use the boundary velocity.
inline InductionScheme make_scheme(const Grid2D& grid, int order, const VectorField& velocity, BoundaryData boundary,
                                   double theta = 1.0, std::optional<DissipationScaling> dissipation = std::nullopt,
                                   std::optional<double> alpha = std::nullopt) {
    SbpOperator1D ox = build_sbp(order, grid, Axis::x);
    SbpOperator1D oy = build_sbp(order, grid, Axis::y);
    VelocityCoeffs coeffs = sample_velocity(velocity, grid, ox, oy);
    SatConfig sat = make_sat(coeffs, theta);
    std::optional<DissipationPair> diss;
    if (dissipation) {
        const double a = alpha ? *alpha : coeffs.max_speed_sum();
        diss = DissipationPair{build_dissipation(order, *dissipation, a, grid, Axis::x),
                               build_dissipation(order, *dissipation, a, grid, Axis::y)};
    }
    return InductionScheme{grid, std::move(ox), std::move(oy), std::move(coeffs), std::move(boundary), std::move(sat),
                           std::move(diss)};
}

} // namespace sbpsat
