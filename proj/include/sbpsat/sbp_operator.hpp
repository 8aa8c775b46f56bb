#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "sbpsat/banded.hpp"
#include "sbpsat/error.hpp"
#include "sbpsat/grid.hpp"

namespace sbpsat {

/// Diagonal-norm SBP first-derivative operator D = P^-1 Q on n equidistant
/// points with spacing h.
///
/// The derivative is held as h*D (a ClosureBandedMatrix, reflected with a
/// sign flip) and the norm as P = h*diag(w), where w has closure weights at
/// both ends and ones in the interior.
class SbpOperator1D {
public:
    SbpOperator1D(int order, double h, std::vector<double> closure_weights, ClosureBandedMatrix hd)
        : order_(order), h_(h), closure_weights_(std::move(closure_weights)), hd_(std::move(hd)) {
        if (!(h_ > 0.0)) throw ConfigError("SbpOperator1D: spacing must be positive");
        if (static_cast<int>(closure_weights_.size()) * 2 > hd_.size())
            throw ConfigError("SbpOperator1D: norm closure larger than the grid");
    }

    int order() const { return order_; }
    int size() const { return hd_.size(); }
    double spacing() const { return h_; }

    /// p_i / h.
    double weight(int i) const {
        const int nb = static_cast<int>(closure_weights_.size());
        if (i < nb) return closure_weights_[i];
        if (i >= size() - nb) return closure_weights_[size() - 1 - i];
        return 1.0;
    }
    /// p_i, the diagonal of P.
    double norm(int i) const { return h_ * weight(i); }

    /// h*D; multiply by 1/h to get the derivative.
    const ClosureBandedMatrix& scaled_derivative() const { return hd_; }

    double d(int i, int k) const { return hd_(i, k) / h_; }
    /// Q = P D; independent of h.
    double q(int i, int k) const { return weight(i) * hd_(i, k); }

    std::vector<double> weights() const {
        std::vector<double> w(size());
        for (int i = 0; i < size(); ++i) w[i] = weight(i);
        return w;
    }

    /// out = D in, for a 1D vector of length n.
    void apply(std::span<const double> in, std::span<double> out) const { hd_.apply(1.0 / h_, in, out); }

    /// Degree up to which D is exact at the closure rows and in the interior.
    int boundary_exact_degree() const { return order_ / 2; }
    int interior_exact_degree() const { return order_; }

private:
    int order_;
    double h_;
    std::vector<double> closure_weights_;
    ClosureBandedMatrix hd_;
};

/// Smallest point count supported for an SBP order.
inline int min_points(int order) {
    switch (order) {
    case 2: return 3;
    case 4: return 8;
    default: throw ConfigError("unsupported SBP order " + std::to_string(order) + " (expected 2 or 4)");
    }
}

/// Classical diagonal-norm SBP operators of interior order 2 and 4.
inline SbpOperator1D build_sbp(int order, int n, double h) {
    const int nmin = min_points(order);
    if (n < nmin)
        throw ConfigError("build_sbp: order " + std::to_string(order) + " needs at least " +
                          std::to_string(nmin) + " points, got " + std::to_string(n));
    if (order == 2) {
        return SbpOperator1D(2, h, {0.5},
                             ClosureBandedMatrix(n, 1, 2, {-1.0, 1.0}, {-0.5, 0.0, 0.5}, -1.0));
    }
    // clang-format off
    std::vector<double> block = {
        -24.0 / 17.0,  59.0 / 34.0,  -4.0 / 17.0,  -3.0 / 34.0,  0.0,          0.0,
        -1.0 / 2.0,    0.0,           1.0 / 2.0,    0.0,         0.0,          0.0,
         4.0 / 43.0,  -59.0 / 86.0,   0.0,         59.0 / 86.0, -4.0 / 43.0,   0.0,
         3.0 / 98.0,   0.0,         -59.0 / 98.0,   0.0,         32.0 / 49.0, -4.0 / 49.0,
    };
    // clang-format on
    return SbpOperator1D(4, h, {17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0},
                         ClosureBandedMatrix(n, 4, 6, std::move(block),
                                             {1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0}, -1.0));
}

/// Operator on the unit interval, h = 1/(n-1).
inline SbpOperator1D build_sbp(int order, int n) { return build_sbp(order, n, 1.0 / (n - 1)); }

/// Operator matching one axis of a grid.
inline SbpOperator1D build_sbp(int order, const Grid2D& grid, Axis axis) {
    return build_sbp(order, grid.points(axis), grid.spacing(axis));
}

namespace detail {
inline void check_axis(const SbpOperator1D& op, const Grid2D& grid, Axis axis) {
    if (op.size() != grid.points(axis))
        throw DimensionError(std::string("SBP operator has ") + std::to_string(op.size()) +
                             " points but grid axis " + (axis == Axis::x ? "x" : "y") + " has " +
                             std::to_string(grid.points(axis)));
    const double h = grid.spacing(axis);
    if (std::abs(op.spacing() - h) > 1e-12 * h)
        throw DimensionError("SBP operator spacing does not match grid spacing");
}
} // namespace detail

/// (D_x (x) I_y) f, matrix-free.
inline void apply_dx(const SbpOperator1D& op, std::span<const double> f, const Grid2D& grid,
                     std::span<double> out) {
    detail::check_axis(op, grid, Axis::x);
    op.scaled_derivative().apply_axis(1.0 / op.spacing(), Axis::x, grid, f, out);
}

inline std::vector<double> apply_dx(const SbpOperator1D& op, std::span<const double> f, const Grid2D& grid) {
    std::vector<double> out(grid.size());
    apply_dx(op, f, grid, out);
    return out;
}

/// (I_x (x) D_y) f, matrix-free.
inline void apply_dy(const SbpOperator1D& op, std::span<const double> f, const Grid2D& grid,
                     std::span<double> out) {
    detail::check_axis(op, grid, Axis::y);
    op.scaled_derivative().apply_axis(1.0 / op.spacing(), Axis::y, grid, f, out);
}

inline std::vector<double> apply_dy(const SbpOperator1D& op, std::span<const double> f, const Grid2D& grid) {
    std::vector<double> out(grid.size());
    apply_dy(op, f, grid, out);
    return out;
}

/// Residuals of the defining SBP properties.
struct SbpReport {
    double q_symmetry_residual = 0.0; ///< max |(Q + Q^T - B)_ij|
    double min_weight = 0.0;          ///< min p_i / h
    /// boundary_exactness[d]: max |D x^d - d x^(d-1)| over closure rows, for
    /// d = 0..boundary degree; interior_exactness likewise over interior rows.
    std::vector<double> boundary_exactness;
    std::vector<double> interior_exactness;

    double max_exactness_residual() const {
        double m = 0.0;
        for (double r : boundary_exactness) m = std::max(m, r);
        for (double r : interior_exactness) m = std::max(m, r);
        return m;
    }
    bool passes(double q_tol, double exact_tol) const {
        return q_symmetry_residual <= q_tol && max_exactness_residual() <= exact_tol && min_weight > 0.0;
    }
};

inline SbpReport verify_sbp(const SbpOperator1D& op) {
    SbpReport rep;
    const int n = op.size();
    const auto& hd = op.scaled_derivative();
    const int nb = hd.closure_rows();

    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            double b = 0.0;
            if (i == k && i == 0) b = -1.0;
            if (i == k && i == n - 1) b += 1.0;
            rep.q_symmetry_residual = std::max(rep.q_symmetry_residual, std::abs(op.q(i, k) + op.q(k, i) - b));
        }
    }

    rep.min_weight = op.weight(0);
    for (int i = 1; i < n; ++i) rep.min_weight = std::min(rep.min_weight, op.weight(i));

    // Polynomials on [0, 1] scaled to the operator's own coordinates x_i = i*h.
    const double len = (n - 1) * op.spacing();
    std::vector<double> f(n), df(n);
    auto residual = [&](int degree, bool closure_rows) {
        for (int i = 0; i < n; ++i) f[i] = std::pow(i * op.spacing() / len, degree);
        op.apply(f, df);
        double r = 0.0;
        for (int i = 0; i < n; ++i) {
            const bool is_closure = i < nb || i >= n - nb;
            if (is_closure != closure_rows) continue;
            const double xi = i * op.spacing() / len;
            const double exact = degree == 0 ? 0.0 : degree * std::pow(xi, degree - 1) / len;
            r = std::max(r, std::abs(df[i] - exact));
        }
        return r;
    };
    for (int d = 0; d <= op.boundary_exact_degree(); ++d) rep.boundary_exactness.push_back(residual(d, true));
    if (n > 2 * nb)
        for (int d = 0; d <= op.interior_exact_degree(); ++d) rep.interior_exactness.push_back(residual(d, false));
    return rep;
}

/// Debug dump of the nonzero entries of D as `row,col,value` lines.
inline void write_operator_csv(const SbpOperator1D& op, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "row,col,value\n";
    out.precision(17);
    for (int i = 0; i < op.size(); ++i)
        op.scaled_derivative().for_each_in_row(i, [&](int k, double c) {
            out << i << ',' << k << ',' << c / op.spacing() << '\n';
        });
    if (!out) throw Error("failed writing " + path);
}

} // namespace sbpsat
