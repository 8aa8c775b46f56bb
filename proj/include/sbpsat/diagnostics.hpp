#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sbpsat/error.hpp"
#include "sbpsat/grid.hpp"
#include "sbpsat/induction.hpp"
#include "sbpsat/sbp_operator.hpp"

namespace sbpsat {

/// Pairwise (cascade) summation; the result depends only on the input order.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// V^T (I_2 (x) Px (x) Py) V.
inline double p_energy(const MagneticField& v, const SbpOperator1D& op_x, const SbpOperator1D& op_y) {
    const Grid2D& g = v.grid();
    if (op_x.size() != g.npx() || op_y.size() != g.npy())
        throw DimensionError("p_energy: operators do not match the field grid");
    std::vector<double> terms(v.size());
    for (int c = 0; c < 2; ++c) {
        auto b = v.component(c);
        for (int i = 0; i < g.npx(); ++i)
            for (int j = 0; j < g.npy(); ++j) {
                const std::size_t k = g.index(i, j);
                terms[c * g.size() + k] = op_x.norm(i) * op_y.norm(j) * b[k] * b[k];
            }
    }
    return pairwise_sum(terms);
}

/// sqrt(dx*dy*sum f^2), the uniform discrete l2 norm.
inline double l2_norm(const Grid2D& g, std::span<const double> f) {
    g.check_scalar(f, "l2_norm");
    std::vector<double> sq(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) sq[k] = f[k] * f[k];
    return std::sqrt(g.dx() * g.dy() * pairwise_sum(sq));
}

/// div_P V = (Dx (x) I) V1 + (I (x) Dy) V2.
inline std::vector<double> discrete_divergence(const MagneticField& v, const SbpOperator1D& op_x,
                                               const SbpOperator1D& op_y) {
    const Grid2D& g = v.grid();
    std::vector<double> div = apply_dx(op_x, v.b1(), g);
    const std::vector<double> d2 = apply_dy(op_y, v.b2(), g);
    for (std::size_t k = 0; k < div.size(); ++k) div[k] += d2[k];
    return div;
}

/// |B| at every node.
inline std::vector<double> magnitude(const MagneticField& v) {
    std::vector<double> m(v.grid().size());
    auto b1 = v.b1();
    auto b2 = v.b2();
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = std::hypot(b1[k], b2[k]);
    return m;
}

/// 100 * || |B_num| - |B_exact| ||_l2 / || |B_exact| ||_l2.
inline double rel_percent_error(const MagneticField& v, const VectorFieldT& exact, double t) {
    const Grid2D& g = v.grid();
    const MagneticField ex = MagneticField::sample(g, [&](double x, double y) { return exact(x, y, t); });
    const std::vector<double> num = magnitude(v);
    const std::vector<double> ref = magnitude(ex);
    std::vector<double> diff(num.size());
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = num[k] - ref[k];
    const double denom = l2_norm(g, ref);
    if (!(denom > 0.0)) throw Error("rel_percent_error: exact solution vanishes on the grid");
    return 100.0 * l2_norm(g, diff) / denom;
}

/// rate_k = log2(e_{k-1} / e_k) for a sequence of grids refined by 2.
/// Entry 0 is always empty; a pair containing a non-positive or non-finite
/// error has no rate.
inline std::vector<std::optional<double>> convergence_rate(std::span<const double> errors) {
    std::vector<std::optional<double>> rates(errors.size());
    for (std::size_t k = 1; k < errors.size(); ++k) {
        const double a = errors[k - 1], b = errors[k];
        if (a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b)) rates[k] = std::log2(a / b);
    }
    return rates;
}

/// One row of an error table.
struct ErrorRecord {
    std::string grid;  ///< "NxM" in mesh intervals
    int nx = 0, ny = 0;
    double error_percent = 0.0;
    double div_l2 = 0.0;
    double energy = 0.0;
    double time = 0.0;
    bool failed = false; ///< the run went unstable; numbers are meaningless
};

} // namespace sbpsat
