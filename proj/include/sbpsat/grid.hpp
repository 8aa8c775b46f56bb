#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sbpsat/error.hpp"

namespace sbpsat {

enum class Axis { x, y };

/// The four sides of the rectangle, in the order the SAT terms are listed.
enum class Side { xmin, xmax, ymin, ymax };

inline constexpr Side all_sides[] = {Side::xmin, Side::xmax, Side::ymin, Side::ymax};

inline const char* to_string(Side s) {
    switch (s) {
    case Side::xmin: return "xmin";
    case Side::xmax: return "xmax";
    case Side::ymin: return "ymin";
    case Side::ymax: return "ymax";
    }
    return "?";
}

/// Uniform tensor-product grid over [xmin,xmax] x [ymin,ymax].
///
/// Nodal arrays are stored x-major with y innermost: node (i, j) lives at
/// `i * npy + j`. A two-component field stacks component 1 before component 2.
class Grid2D {
public:
    Grid2D(double xmin, double xmax, double ymin, double ymax, int npx, int npy)
        : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax), npx_(npx), npy_(npy) {
        if (npx < 2 || npy < 2)
            throw ConfigError("Grid2D: need at least 2 points per axis, got " +
                              std::to_string(npx) + "x" + std::to_string(npy));
        if (!(xmax > xmin) || !(ymax > ymin))
            throw ConfigError("Grid2D: empty domain");
    }

    /// Grid with `nx` by `ny` mesh intervals (nx+1 by ny+1 points).
    static Grid2D with_cells(double xmin, double xmax, double ymin, double ymax, int nx, int ny) {
        return Grid2D(xmin, xmax, ymin, ymax, nx + 1, ny + 1);
    }

    double xmin() const { return xmin_; }
    double xmax() const { return xmax_; }
    double ymin() const { return ymin_; }
    double ymax() const { return ymax_; }
    int npx() const { return npx_; }
    int npy() const { return npy_; }
    double dx() const { return (xmax_ - xmin_) / (npx_ - 1); }
    double dy() const { return (ymax_ - ymin_) / (npy_ - 1); }
    double spacing(Axis a) const { return a == Axis::x ? dx() : dy(); }
    int points(Axis a) const { return a == Axis::x ? npx_ : npy_; }

    double x(int i) const { return i == npx_ - 1 ? xmax_ : xmin_ + i * dx(); }
    double y(int j) const { return j == npy_ - 1 ? ymax_ : ymin_ + j * dy(); }

    std::size_t size() const { return static_cast<std::size_t>(npx_) * npy_; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * npy_ + j; }

    /// Number of nodes on a side, and the flat index of the k-th one.
    int side_points(Side s) const { return (s == Side::xmin || s == Side::xmax) ? npy_ : npx_; }
    std::size_t side_index(Side s, int k) const {
        switch (s) {
        case Side::xmin: return index(0, k);
        case Side::xmax: return index(npx_ - 1, k);
        case Side::ymin: return index(k, 0);
        case Side::ymax: return index(k, npy_ - 1);
        }
        return 0;
    }

    std::string label() const {
        return std::to_string(npx_ - 1) + "x" + std::to_string(npy_ - 1);
    }

    void check_scalar(std::span<const double> f, const char* what) const {
        if (f.size() != size())
            throw DimensionError(std::string(what) + ": expected " + std::to_string(size()) +
                                 " nodal values, got " + std::to_string(f.size()));
    }

private:
    double xmin_, xmax_, ymin_, ymax_;
    int npx_, npy_;
};

/// Nodal samples of f(x, y) in storage order.
template <class F>
std::vector<double> sample(const Grid2D& g, F&& f) {
    std::vector<double> out(g.size());
    for (int i = 0; i < g.npx(); ++i)
        for (int j = 0; j < g.npy(); ++j)
            out[g.index(i, j)] = f(g.x(i), g.y(j));
    return out;
}

} // namespace sbpsat
