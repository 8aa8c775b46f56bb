#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sbpsat/error.hpp"
#include "sbpsat/grid.hpp"

namespace sbpsat {

/// An n x n matrix made of an explicit boundary block in the first rows, the
/// same block reflected (row n-1-i, column n-1-k, times `reflect_sign`) in the
/// last rows, and a Toeplitz stencil in between.
///
/// Both the SBP derivative (reflect_sign = -1) and the SBP dissipation
/// operators (reflect_sign = +1) have this shape. Entries are dimensionless;
/// callers supply the grid scaling when applying.
class ClosureBandedMatrix {
public:
    ClosureBandedMatrix() = default;

    ClosureBandedMatrix(int n, int rows, int cols, std::vector<double> block,
                        std::vector<double> stencil, double reflect_sign)
        : n_(n), rows_(rows), cols_(cols), block_(std::move(block)),
          stencil_(std::move(stencil)), reflect_sign_(reflect_sign) {
        if (block_.size() != static_cast<std::size_t>(rows_) * cols_)
            throw DimensionError("ClosureBandedMatrix: block must hold rows*cols entries");
        if (stencil_.size() % 2 != 1)
            throw DimensionError("ClosureBandedMatrix: stencil length must be odd");
        half_ = static_cast<int>(stencil_.size() / 2);
        if (n_ < 2 * rows_ || n_ < cols_ || rows_ < half_)
            throw ConfigError("ClosureBandedMatrix: " + std::to_string(n_) +
                              " points cannot hold a closure of " + std::to_string(rows_) +
                              "x" + std::to_string(cols_));
    }

    int size() const { return n_; }
    int closure_rows() const { return rows_; }
    int closure_cols() const { return cols_; }
    int half_width() const { return half_; }
    double reflect_sign() const { return reflect_sign_; }
    std::span<const double> block() const { return block_; }
    std::span<const double> stencil() const { return stencil_; }

    /// Calls fn(col, value) for every structurally nonzero entry of `row`.
    template <class Fn>
    void for_each_in_row(int row, Fn&& fn) const {
        if (row < rows_) {
            const double* b = block_.data() + static_cast<std::size_t>(row) * cols_;
            for (int k = 0; k < cols_; ++k)
                if (b[k] != 0.0) fn(k, b[k]);
        } else if (row >= n_ - rows_) {
            const double* b = block_.data() + static_cast<std::size_t>(n_ - 1 - row) * cols_;
            for (int k = 0; k < cols_; ++k)
                if (b[k] != 0.0) fn(n_ - 1 - k, reflect_sign_ * b[k]);
        } else {
            for (int s = 0; s <= 2 * half_; ++s)
                if (stencil_[s] != 0.0) fn(row + s - half_, stencil_[s]);
        }
    }

    double operator()(int row, int col) const {
        double v = 0.0;
        for_each_in_row(row, [&](int k, double c) {
            if (k == col) v += c;
        });
        return v;
    }

    /// Row-major dense copy, for tests and small-grid diagnostics.
    std::vector<double> to_dense() const {
        std::vector<double> m(static_cast<std::size_t>(n_) * n_, 0.0);
        for (int i = 0; i < n_; ++i)
            for_each_in_row(i, [&](int k, double c) { m[static_cast<std::size_t>(i) * n_ + k] += c; });
        return m;
    }

    /// out = scale * M * in on a contiguous 1D vector.
    void apply(double scale, std::span<const double> in, std::span<double> out) const {
        if (in.size() != static_cast<std::size_t>(n_) || out.size() != in.size())
            throw DimensionError("ClosureBandedMatrix::apply: length mismatch");
        apply_line(scale, in.data(), out.data(), false);
    }

    /// Applies scale * M along one axis of a nodal grid array, i.e.
    /// (M (x) I_y) for Axis::x and (I_x (x) M) for Axis::y. With
    /// `accumulate` the result is added to `out`.
    void apply_axis(double scale, Axis axis, const Grid2D& grid, std::span<const double> in,
                    std::span<double> out, bool accumulate = false) const {
        grid.check_scalar(in, "apply_axis input");
        grid.check_scalar(out, "apply_axis output");
        if (grid.points(axis) != n_)
            throw DimensionError("apply_axis: operator has " + std::to_string(n_) +
                                 " points, grid axis has " + std::to_string(grid.points(axis)));
        const std::size_t ny = static_cast<std::size_t>(grid.npy());
        if (axis == Axis::x) {
            for (int i = 0; i < n_; ++i) {
                double* o = out.data() + i * ny;
                if (!accumulate)
                    for (std::size_t j = 0; j < ny; ++j) o[j] = 0.0;
                for_each_in_row(i, [&](int k, double c) {
                    const double a = scale * c;
                    const double* r = in.data() + k * ny;
                    for (std::size_t j = 0; j < ny; ++j) o[j] += a * r[j];
                });
            }
        } else {
            for (int i = 0; i < grid.npx(); ++i)
                apply_line(scale, in.data() + i * ny, out.data() + i * ny, accumulate);
        }
    }

private:
    void apply_line(double scale, const double* in, double* out, bool accumulate) const {
        auto emit = [&](int j, double acc) {
            if (accumulate)
                out[j] += scale * acc;
            else
                out[j] = scale * acc;
        };
        auto closure_row = [&](int j) {
            double acc = 0.0;
            for_each_in_row(j, [&](int k, double c) { acc += c * in[k]; });
            emit(j, acc);
        };
        for (int j = 0; j < rows_; ++j) closure_row(j);
        const double* s = stencil_.data();
        for (int j = rows_; j < n_ - rows_; ++j) {
            const double* w = in + (j - half_);
            double acc = 0.0;
            for (int k = 0; k <= 2 * half_; ++k) acc += s[k] * w[k];
            emit(j, acc);
        }
        for (int j = n_ - rows_; j < n_; ++j) closure_row(j);
    }

    int n_ = 0, rows_ = 0, cols_ = 0, half_ = 0;
    std::vector<double> block_;
    std::vector<double> stencil_;
    double reflect_sign_ = 1.0;
};

} // namespace sbpsat
