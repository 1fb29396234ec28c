/**
 * @brief Independent checks of design scores: rescoring on finer grids (or
 * random samples), auditing design files, and a brute-force SPV oracle that
 * shares no code with the production scoring path.
 */
#pragma once

#include "gpso/design.hpp"
#include "gpso/design_io.hpp"
#include "gpso/rng.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace gpso {

/// Rescores whose fine/coarse discrepancy exceeds this (percent) are suspect.
inline constexpr double kSuspectDiscrepancyPct = 2.0;

struct RescoreReport {
    double coarse_g = std::numeric_limits<double>::infinity();
    double fine_g = std::numeric_limits<double>::infinity();
    int coarse_levels = 5;
    int fine_levels = 0;            ///< 0 in sampling mode
    long long monte_carlo_samples = 0;
    std::optional<DesignPoint> argmax_fine;
    double discrepancy_pct = 0.0;

    bool suspect() const { return discrepancy_pct > kSuspectDiscrepancyPct; }
};

namespace detail {

inline void finish_report(RescoreReport& r) {
    if (std::isinf(r.coarse_g) || std::isinf(r.fine_g))
        r.discrepancy_pct = 0.0;
    else
        r.discrepancy_pct = 100.0 * (r.fine_g - r.coarse_g) / r.coarse_g;
}

}  // namespace detail

/// Scores on the coarse grid and again on a `fine_levels` grid. With
/// fine_levels = 1 mod 4 on symmetric bounds the fine grid contains the
/// 5-level grid.
inline RescoreReport rescore_fine(const DesignMatrix& x, const ModelSpec& spec, int fine_levels, const Bounds& bounds,
                                  int coarse_levels = 5) {
    if (fine_levels < 2) throw std::invalid_argument("rescore_fine: fine grid needs >= 2 levels");
    RescoreReport r;
    r.coarse_levels = coarse_levels;
    r.fine_levels = fine_levels;
    r.coarse_g = g_score(x, make_grid(spec, coarse_levels, bounds)).value;
    const GScore fine = g_score(x, make_grid(spec, fine_levels, bounds));
    r.fine_g = fine.value;
    r.argmax_fine = fine.argmax;
    detail::finish_report(r);
    return r;
}

inline RescoreReport rescore_fine(const DesignMatrix& x, const ModelSpec& spec, int fine_levels = 21) {
    return rescore_fine(x, spec, fine_levels, Bounds::unit_cube(spec.k_factors()));
}

/**
 * Sampling variant for large K: the maximum of SPV over the coarse grid and
 * `samples` uniform random points. The coarse grid is kept in the candidate
 * set so the result never drops below the coarse score.
 */
inline RescoreReport rescore_sampled(const DesignMatrix& x, const ModelSpec& spec, long long samples,
                                     std::uint64_t seed, const Bounds& bounds, int coarse_levels = 5) {
    if (samples < 1) throw std::invalid_argument("rescore_sampled: need at least one sample");
    RescoreReport r;
    r.coarse_levels = coarse_levels;
    r.monte_carlo_samples = samples;
    const GScore coarse = g_score(x, make_grid(spec, coarse_levels, bounds));
    r.coarse_g = coarse.value;
    if (coarse.singular()) {
        detail::finish_report(r);
        return r;
    }
    r.fine_g = coarse.value;
    r.argmax_fine = coarse.argmax;

    validate_design(x, spec);
    const InformationMatrix info(x, spec);
    Rng rng(seed);
    constexpr long long kChunk = 4096;
    const int k = spec.k_factors();
    for (long long done = 0; done < samples; done += kChunk) {
        const long long m = std::min(kChunk, samples - done);
        Eigen::MatrixXd pts(m, k);
        for (Eigen::Index j = 0; j < m; ++j)
            for (int f = 0; f < k; ++f) pts(j, f) = rng.uniform(bounds.lower[f], bounds.upper[f]);
        const Eigen::VectorXd v = info.spv_columns(build_model_matrix(pts, spec).transpose());
        for (Eigen::Index j = 0; j < m; ++j)
            if (v[j] > r.fine_g) {
                r.fine_g = v[j];
                r.argmax_fine = pts.row(j).transpose();
            }
    }
    detail::finish_report(r);
    return r;
}

/// Reads a design CSV, checks it against K and the bounds, and rescores it.
inline RescoreReport audit_design_file(const std::string& path, const ModelSpec& spec, int fine_levels = 21,
                                       const std::optional<Bounds>& bounds = std::nullopt) {
    const DesignMatrix x = read_design_csv(path);
    if (x.cols() != spec.k_factors())
        throw DesignFormatError(path + ": design has " + std::to_string(x.cols()) + " factor columns, expected K=" +
                                std::to_string(spec.k_factors()));
    const Bounds b = bounds ? *bounds : Bounds::unit_cube(spec.k_factors());
    check_design_bounds(x, b, path);
    return rescore_fine(x, spec, fine_levels, b);
}

namespace oracle {

/// Monomial exponents of the quadratic model in K factors, generated by
/// total degree; the order differs from ModelSpec and does not matter here.
inline std::vector<std::vector<int>> quadratic_exponents(int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> e(static_cast<std::size_t>(k), 0);
    out.push_back(e);
    for (int i = 0; i < k; ++i) {
        auto a = e;
        a[static_cast<std::size_t>(i)] = 1;
        out.push_back(a);
    }
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) {
            auto a = e;
            a[static_cast<std::size_t>(i)] += 1;
            a[static_cast<std::size_t>(j)] += 1;
            out.push_back(a);
        }
    return out;
}

inline std::vector<double> monomials(const std::vector<double>& x, const std::vector<std::vector<int>>& exps) {
    std::vector<double> f;
    for (const auto& e : exps) {
        double v = 1.0;
        for (std::size_t i = 0; i < e.size(); ++i)
            for (int d = 0; d < e[i]; ++d) v *= x[i];
        f.push_back(v);
    }
    return f;
}

using Dense = std::vector<std::vector<double>>;

/// Gauss-Jordan inverse with partial pivoting; nullopt when a pivot falls
/// below `rel_tol` times the largest absolute entry.
inline std::optional<Dense> invert(Dense a, double rel_tol) {
    const std::size_t n = a.size();
    double scale = 0.0;
    for (const auto& row : a)
        for (double v : row) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return std::nullopt;
    Dense inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (std::abs(a[piv][c]) <= rel_tol * scale) return std::nullopt;
        std::swap(a[c], a[piv]);
        std::swap(inv[c], inv[piv]);
        const double d = a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0.0) continue;
            const double m = a[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= m * a[c][j];
                inv[r][j] -= m * inv[c][j];
            }
        }
    }
    return inv;
}

}  // namespace oracle

/**
 * Max SPV over the coarse grid through an independent path: monomial
 * expansion by exponent vectors, explicit inverse of F'F by Gauss-Jordan,
 * odometer grid enumeration. Intended for small models (p <= 10) in tests.
 */
inline double brute_force_check(const DesignMatrix& x, int k_factors, int levels = 5) {
    const auto exps = oracle::quadratic_exponents(k_factors);
    const std::size_t p = exps.size();
    const auto n = static_cast<std::size_t>(x.rows());

    oracle::Dense m(p, std::vector<double>(p, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<double> pt(static_cast<std::size_t>(k_factors));
        for (int i = 0; i < k_factors; ++i) pt[static_cast<std::size_t>(i)] = x(static_cast<Eigen::Index>(r), i);
        const auto f = oracle::monomials(pt, exps);
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = 0; b < p; ++b) m[a][b] += f[a] * f[b];
    }
    const auto inv = oracle::invert(m, 1e-12);
    if (!inv) return std::numeric_limits<double>::infinity();

    std::vector<int> odo(static_cast<std::size_t>(k_factors), 0);
    double best = -std::numeric_limits<double>::infinity();
    for (;;) {
        std::vector<double> pt;
        for (int i : odo) pt.push_back(-1.0 + 2.0 * i / (levels - 1));
        const auto f = oracle::monomials(pt, exps);
        double q = 0.0;
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = 0; b < p; ++b) q += f[a] * (*inv)[a][b] * f[b];
        best = std::max(best, static_cast<double>(n) * q);
        std::size_t d = 0;
        while (d < odo.size() && ++odo[d] == levels) odo[d++] = 0;
        if (d == odo.size()) break;
    }
    return best;
}

inline double brute_force_check(const DesignMatrix& x, const ModelSpec& spec) {
    return brute_force_check(x, spec.k_factors());
}

}  // namespace gpso
