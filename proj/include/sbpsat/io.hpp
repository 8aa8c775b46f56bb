#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sbpsat/diagnostics.hpp"
#include "sbpsat/error.hpp"
#include "sbpsat/grid.hpp"
#include "sbpsat/induction.hpp"

namespace sbpsat {

namespace detail {
inline std::string fmt_g(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_g(*v, 6) : std::string(); }

inline std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    return out;
}
} // namespace detail

inline constexpr const char* error_table_header = "grid,error_percent,error_rate,div_l2,div_rate,energy,time";

/// CSV error table, rows ordered by grid size; rates against the previous row.
/// Failed (unstable) runs keep their grid label and leave every number empty.
inline std::string format_error_table(std::vector<ErrorRecord> records) {
    if (records.empty()) throw Error("error table needs at least one record");
    std::stable_sort(records.begin(), records.end(), [](const ErrorRecord& a, const ErrorRecord& b) {
        return static_cast<long>(a.nx) * a.ny < static_cast<long>(b.nx) * b.ny;
    });
    std::vector<double> err, div;
    for (const auto& r : records) {
        err.push_back(r.failed ? 0.0 : r.error_percent);
        div.push_back(r.failed ? 0.0 : r.div_l2);
    }
    const auto er = convergence_rate(err);
    const auto dr = convergence_rate(div);
    std::string s = std::string(error_table_header) + "\n";
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        s += r.grid;
        if (r.failed) {
            s += ",,,,,,\n";
            continue;
        }
        s += ',' + detail::fmt_g(r.error_percent, 6) + ',' + detail::fmt_opt(er[k]) + ',' + detail::fmt_g(r.div_l2, 6) +
             ',' + detail::fmt_opt(dr[k]) + ',' + detail::fmt_g(r.energy, 6) + ',' + detail::fmt_g(r.time, 6) + '\n';
    }
    return s;
}

inline void write_error_table(const std::vector<ErrorRecord>& records, const std::string& path) {
    const std::string text = format_error_table(records);
    auto out = detail::open_for_write(path);
    out << text;
    if (!out) throw Error("failed writing " + path);
}

/// Free-form key=value pairs written next to a field dump.
struct DumpMetadata {
    int experiment = 0;
    std::string scheme;
};

/// Nodal CSV `x,y,B1,B2,Bmag,divP`, one row per node in storage order, plus a
/// one-line `#` metadata sidecar at `path + ".meta"`.
inline void write_field_dump(const MagneticField& v, const Grid2D& grid, std::span<const double> divergence, double t,
                             const std::string& path, const DumpMetadata& meta = {}) {
    if (v.grid().npx() != grid.npx() || v.grid().npy() != grid.npy())
        throw DimensionError("write_field_dump: field does not match grid");
    grid.check_scalar(divergence, "write_field_dump divergence");
    {
        auto out = detail::open_for_write(path);
        out << "x,y,B1,B2,Bmag,divP\n";
        auto b1 = v.b1();
        auto b2 = v.b2();
        for (int i = 0; i < grid.npx(); ++i)
            for (int j = 0; j < grid.npy(); ++j) {
                const std::size_t k = grid.index(i, j);
                out << detail::fmt_g(grid.x(i), 10) << ',' << detail::fmt_g(grid.y(j), 10) << ','
                    << detail::fmt_g(b1[k], 10) << ',' << detail::fmt_g(b2[k], 10) << ','
                    << detail::fmt_g(std::hypot(b1[k], b2[k]), 10) << ',' << detail::fmt_g(divergence[k], 10) << '\n';
            }
        if (!out) throw Error("failed writing " + path);
    }
    auto m = detail::open_for_write(path + ".meta");
    m << "# experiment=" << meta.experiment << " scheme=" << (meta.scheme.empty() ? "-" : meta.scheme)
      << " t=" << detail::fmt_g(t, 10) << " grid=" << grid.label() << '\n';
    if (!m) throw Error("failed writing " + path + ".meta");
}

} // namespace sbpsat
