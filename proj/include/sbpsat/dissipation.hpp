#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "sbpsat/banded.hpp"
#include "sbpsat/error.hpp"
#include "sbpsat/grid.hpp"
#include "sbpsat/sbp_operator.hpp"

namespace sbpsat {

/// `accurate` keeps the interior order of the derivative (2 or 4); `upwind`
/// divides by one more power of h and drops it by one (1 or 3).
enum class DissipationScaling { accurate, upwind };

inline const char* to_string(DissipationScaling s) { return s == DissipationScaling::accurate ? "accurate" : "upwind"; }

/// A = -alpha * c_p * s(h) * P^-1 * Dp^T * Dp
///
/// Dp is the undivided p-th difference (p = order/2), P the norm of the SBP
/// operator of the same order, c_1 = 1/2, c_2 = 1/12, and s(h) = h for
/// `accurate`, 1 for `upwind`. Since P*A = -alpha*c_p*s(h)*Dp^T*Dp, the
/// operator is negative semidefinite in the P inner product and annihilates
/// constants.
class DissipationOperator1D {
public:
    DissipationOperator1D(int order, DissipationScaling scaling, double alpha, double h, ClosureBandedMatrix m)
        : order_(order), scaling_(scaling), alpha_(alpha), h_(h), m_(std::move(m)) {}

    int order() const { return order_; }
    DissipationScaling scaling() const { return scaling_; }
    double alpha() const { return alpha_; }
    double spacing() const { return h_; }
    int size() const { return m_.size(); }

    /// W^-1 Dp^T Dp with P = h W; dimensionless.
    const ClosureBandedMatrix& unscaled() const { return m_; }

    /// Factor turning unscaled() into A.
    double factor() const {
        const double cp = order_ == 2 ? 0.5 : 1.0 / 12.0;
        const double s = scaling_ == DissipationScaling::accurate ? h_ : 1.0;
        return -alpha_ * cp * s / h_;
    }

    double operator()(int i, int k) const { return factor() * m_(i, k); }

    void apply(std::span<const double> in, std::span<double> out) const { m_.apply(factor(), in, out); }

    /// out (+)= (A (x) I_y) f or (I_x (x) A) f.
    void apply_axis(Axis axis, const Grid2D& grid, std::span<const double> f, std::span<double> out,
                    bool accumulate) const {
        m_.apply_axis(factor(), axis, grid, f, out, accumulate);
    }

private:
    int order_;
    DissipationScaling scaling_;
    double alpha_;
    double h_;
    ClosureBandedMatrix m_;
};

namespace detail {
/// Entry (i, k) of Dp^T Dp for the undivided difference on a half-infinite
/// line starting at index 0.
inline double difference_gram(int p, int i, int k) {
    auto coeff = [p](int offset) {
        // (Dp w)_m = sum_r (-1)^(p-r) C(p,r) w_{m+r}
        if (offset < 0 || offset > p) return 0.0;
        double c = 1.0;
        for (int r = 0; r < offset; ++r) c = c * (p - r) / (r + 1);
        return ((p - offset) % 2 == 0) ? c : -c;
    };
    double s = 0.0;
    for (int m = std::max(0, std::max(i, k) - p); m <= std::min(i, k); ++m) s += coeff(i - m) * coeff(k - m);
    return s;
}
} // namespace detail

inline DissipationOperator1D build_dissipation(int order, DissipationScaling scaling, double alpha, int n,
                                               double h) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw ConfigError("build_dissipation: alpha must be a finite non-negative number");
    const SbpOperator1D sbp = build_sbp(order, n, h); // validates order and n
    const int p = order / 2;
    const int rows = std::max(sbp.scaled_derivative().closure_rows(), 2 * p - 1);
    const int cols = rows + p;
    std::vector<double> block(static_cast<std::size_t>(rows) * cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) block[static_cast<std::size_t>(i) * cols + k] = detail::difference_gram(p, i, k) / sbp.weight(i);
    std::vector<double> stencil(2 * p + 1);
    for (int s = 0; s <= 2 * p; ++s) stencil[s] = detail::difference_gram(p, 2 * p, p + s);
    return DissipationOperator1D(order, scaling, alpha, h,
                                 ClosureBandedMatrix(n, rows, cols, std::move(block), std::move(stencil), 1.0));
}

inline DissipationOperator1D build_dissipation(int order, DissipationScaling scaling, double alpha,
                                               const Grid2D& grid, Axis axis) {
    return build_dissipation(order, scaling, alpha, grid.points(axis), grid.spacing(axis));
}

} // namespace sbpsat
