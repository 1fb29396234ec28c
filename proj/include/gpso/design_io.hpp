/**
 * @brief Design CSV files: header `x1,...,xK`, one run per row, reals written
 * with 17 significant digits so that a 64-bit value reads back exactly.
 */
#pragma once

#include "gpso/design.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace gpso {

/// Malformed design file; the message names the file, row and column.
class DesignFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

}  // namespace detail

inline void write_design_csv(std::ostream& os, const DesignMatrix& x) {
    for (Eigen::Index k = 0; k < x.cols(); ++k) os << (k ? "," : "") << 'x' << (k + 1);
    os << '\n';
    os << std::setprecision(17);
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
        for (Eigen::Index k = 0; k < x.cols(); ++k) os << (k ? "," : "") << x(j, k);
        os << '\n';
    }
}

inline void write_design_csv(const std::string& path, const DesignMatrix& x) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_design_csv(os, x);
    if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

/// Parses a design CSV. `source` labels diagnostics.
inline DesignMatrix read_design_csv(std::istream& is, const std::string& source = "<stream>") {
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& what) -> DesignFormatError {
        return DesignFormatError(source + ":" + std::to_string(line_no) + ": " + what);
    };

    std::vector<std::string_view> header;
    while (std::getline(is, line)) {
        ++line_no;
        if (!detail::trim(line).empty()) break;
    }
    if (detail::trim(line).empty()) throw fail("missing header line");
    std::string header_line = line;
    header = detail::split_commas(header_line);
    for (std::size_t k = 0; k < header.size(); ++k)
        if (header[k] != "x" + std::to_string(k + 1))
            throw fail("header column " + std::to_string(k + 1) + " is '" + std::string(header[k]) + "', expected 'x" +
                       std::to_string(k + 1) + "'");
    const std::size_t k_factors = header.size();

    std::vector<double> values;
    int rows = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto cells = detail::split_commas(line);
        if (cells.size() != k_factors)
            throw fail("row " + std::to_string(rows + 1) + " has " + std::to_string(cells.size()) + " columns, expected " +
                       std::to_string(k_factors));
        for (std::size_t k = 0; k < cells.size(); ++k) {
            double v = 0.0;
            const auto* first = cells[k].data();
            const auto* last = first + cells[k].size();
            const auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || ptr != last || cells[k].empty() || !std::isfinite(v))
                throw fail("row " + std::to_string(rows + 1) + " column x" + std::to_string(k + 1) + ": '" +
                           std::string(cells[k]) + "' is not a finite number");
            values.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) throw fail("design has no rows");

    DesignMatrix x(rows, static_cast<Eigen::Index>(k_factors));
    for (int j = 0; j < rows; ++j)
        for (std::size_t k = 0; k < k_factors; ++k) x(j, static_cast<Eigen::Index>(k)) = values[j * k_factors + k];
    return x;
}

inline DesignMatrix read_design_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DesignFormatError("cannot open design file '" + path + "'");
    return read_design_csv(is, path);
}

/// Throws DesignFormatError naming the first coordinate outside `bounds`.
inline void check_design_bounds(const DesignMatrix& x, const Bounds& bounds, const std::string& source) {
    if (bounds.dims() != x.cols())
        throw DesignFormatError(source + ": design has " + std::to_string(x.cols()) + " factors, expected " +
                                std::to_string(bounds.dims()));
    for (Eigen::Index j = 0; j < x.rows(); ++j)
        for (Eigen::Index k = 0; k < x.cols(); ++k)
            if (!(x(j, k) >= bounds.lower[k] && x(j, k) <= bounds.upper[k])) {
                std::ostringstream msg;
                msg << source << ": row " << (j + 1) << " column x" << (k + 1) << " = " << x(j, k) << " outside ["
                    << bounds.lower[k] << ", " << bounds.upper[k] << "]";
                throw DesignFormatError(msg.str());
            }
}

}  // namespace gpso
