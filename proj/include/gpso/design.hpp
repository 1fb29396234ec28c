/**
 * @brief Second-order response-surface design mathematics on the hypercube:
 * model expansion, information matrix, scaled prediction variance (SPV),
 * grid-approximated G-scores and the G-efficiency scale.
 *
 * A design is an N x K matrix of factor settings (one run per row). The
 * G-score of a design is the maximum of SPV over the prediction region; it
 * is approximated here by the maximum over a rectangular grid of points.
 */
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gpso {

using DesignMatrix = Eigen::MatrixXd;  ///< N x K, one design point per row
using DesignPoint = Eigen::VectorXd;   ///< K coordinates

/// Thrown when the information matrix of a design is (numerically) singular.
class SingularInformation : public std::runtime_error {
public:
    SingularInformation() : std::runtime_error("singular information matrix") {}
};

/// Relative pivot threshold below which an information matrix is singular.
inline constexpr double kSingularityTolerance = 1e-10;

/// Number of parameters of the full quadratic model in k factors.
inline int p_count(int k) {
    if (k < 1) throw std::invalid_argument("p_count: factor count must be >= 1, got " + std::to_string(k));
    return (k + 2) * (k + 1) / 2;
}

/// One model term: the product x_first * x_second, with -1 marking an absent
/// factor. The intercept is (-1, -1), a linear term (i, -1).
struct ModelTerm {
    int first = -1;
    int second = -1;

    friend bool operator==(const ModelTerm&, const ModelTerm&) = default;
};

/**
 * Full second-order model in K factors. Term order is fixed: intercept,
 * the K linears, the interactions x_i x_j (i < j, lexicographic), then the
 * K pure quadratics.
 */
class ModelSpec {
public:
    explicit ModelSpec(int k_factors) : k_(k_factors), p_(p_count(k_factors)) {
        terms_.reserve(static_cast<std::size_t>(p_));
        terms_.push_back({-1, -1});
        for (int i = 0; i < k_; ++i) terms_.push_back({i, -1});
        for (int i = 0; i < k_; ++i)
            for (int j = i + 1; j < k_; ++j) terms_.push_back({i, j});
        for (int i = 0; i < k_; ++i) terms_.push_back({i, i});
    }

    int k_factors() const { return k_; }
    int p() const { return p_; }
    const std::vector<ModelTerm>& term_order() const { return terms_; }

    /// Human readable term label, e.g. "1", "x2", "x1*x3", "x2^2".
    std::string term_name(int index) const {
        const ModelTerm& t = terms_.at(static_cast<std::size_t>(index));
        if (t.first < 0) return "1";
        const std::string a = "x" + std::to_string(t.first + 1);
        if (t.second < 0) return a;
        if (t.second == t.first) return a + "^2";
        return a + "*x" + std::to_string(t.second + 1);
    }

private:
    int k_;
    int p_;
    std::vector<ModelTerm> terms_;
};

/// Per-factor rectangular bounds [lower_k, upper_k].
struct Bounds {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    static Bounds unit_cube(int k) {
        return {Eigen::VectorXd::Constant(k, -1.0), Eigen::VectorXd::Constant(k, 1.0)};
    }

    int dims() const { return static_cast<int>(lower.size()); }

    void validate() const {
        if (lower.size() != upper.size() || lower.size() == 0)
            throw std::invalid_argument("bounds: lower/upper must be non-empty and of equal length");
        for (Eigen::Index k = 0; k < lower.size(); ++k)
            if (!std::isfinite(lower[k]) || !std::isfinite(upper[k]) || !(lower[k] < upper[k]))
                throw std::invalid_argument("bounds: factor " + std::to_string(k + 1) +
                                            " needs finite lower < upper");
    }

    bool contains(const DesignMatrix& x) const {
        for (Eigen::Index j = 0; j < x.rows(); ++j)
            for (Eigen::Index k = 0; k < x.cols(); ++k)
                if (!(x(j, k) >= lower[k] && x(j, k) <= upper[k])) return false;
        return true;
    }
};

/// Checks the structural invariants of a design against a model: N >= 1,
/// K columns, finite entries.
inline void validate_design(const DesignMatrix& x, const ModelSpec& spec) {
    if (x.rows() < 1) throw std::invalid_argument("design: needs at least one run");
    if (x.cols() != spec.k_factors())
        throw std::invalid_argument("design: has " + std::to_string(x.cols()) + " factor columns, model expects " +
                                    std::to_string(spec.k_factors()));
    if (!x.allFinite()) throw std::invalid_argument("design: contains non-finite coordinates");
}

namespace detail {

template <class Point, class Out>
void expand_into(const Point& x, const ModelSpec& spec, Out&& out) {
    const int k = spec.k_factors();
    Eigen::Index c = 0;
    out[c++] = 1.0;
    for (int i = 0; i < k; ++i) out[c++] = x[i];
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) out[c++] = x[i] * x[j];
    for (int i = 0; i < k; ++i) out[c++] = x[i] * x[i];
}

}  // namespace detail

/// Model vector f(x) in ModelSpec term order.
inline Eigen::VectorXd model_expand(const DesignPoint& x, const ModelSpec& spec) {
    if (x.size() != spec.k_factors())
        throw std::invalid_argument("model_expand: point has " + std::to_string(x.size()) + " coordinates, model expects " +
                                    std::to_string(spec.k_factors()));
    Eigen::VectorXd f(spec.p());
    detail::expand_into(x, spec, f);
    return f;
}

/// Model matrix F(X): row j is f(x_j)'.
inline Eigen::MatrixXd build_model_matrix(const DesignMatrix& x, const ModelSpec& spec) {
    if (x.cols() != spec.k_factors())
        throw std::invalid_argument("build_model_matrix: design has " + std::to_string(x.cols()) +
                                    " columns, model expects " + std::to_string(spec.k_factors()));
    Eigen::MatrixXd f(x.rows(), spec.p());
    for (Eigen::Index j = 0; j < x.rows(); ++j) detail::expand_into(x.row(j), spec, f.row(j));
    return f;
}

/**
 * M(X) = F'F, handled through a column-pivoted QR factorization of F so that
 * solves are conditioned on F rather than on F'F. `regular` is false when
 * N < p or when the smallest squared pivot |r_pp|^2 (a pivot of M) falls
 * below kSingularityTolerance times the largest.
 */
class InformationMatrix {
public:
    InformationMatrix(const DesignMatrix& x, const ModelSpec& spec) : n_runs_(x.rows()), p_(spec.p()) {
        const Eigen::MatrixXd f = build_model_matrix(x, spec);
        m_.noalias() = f.transpose() * f;
        regular_ = false;
        if (f.rows() < f.cols()) return;
        qr_.compute(f);
        const Eigen::VectorXd pivots = qr_.matrixR().diagonal().head(p_).cwiseAbs2();
        const double largest = pivots.maxCoeff();
        regular_ = largest > 0.0 && pivots.minCoeff() > kSingularityTolerance * largest;
    }

    const Eigen::MatrixXd& matrix() const { return m_; }
    bool regular() const { return regular_; }
    Eigen::Index n_runs() const { return n_runs_; }

    /// N f' M^-1 f for each column f of `model_columns` (p x P).
    Eigen::VectorXd spv_columns(const Eigen::MatrixXd& model_columns) const {
        if (!regular_) throw SingularInformation();
        // M^-1 = P R^-1 R^-T P', so f' M^-1 f = |R^-T P' f|^2
        Eigen::MatrixXd y = qr_.colsPermutation().transpose() * model_columns;
        qr_.matrixR().topLeftCorner(p_, p_).template triangularView<Eigen::Upper>().transpose().solveInPlace(y);
        return static_cast<double>(n_runs_) * y.colwise().squaredNorm().transpose();
    }

private:
    Eigen::Index n_runs_;
    Eigen::Index p_;
    Eigen::MatrixXd m_;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
    bool regular_;
};

/// Scaled prediction variance N f'(x) M^-1(X) f(x). Throws SingularInformation.
inline double spv(const DesignPoint& x, const DesignMatrix& design, const ModelSpec& spec) {
    validate_design(design, spec);
    const InformationMatrix info(design, spec);
    return info.spv_columns(model_expand(x, spec))[0];
}

/**
 * Rectangular scoring grid: the Cartesian product of per-factor levels,
 * enumerated row-major (factor 1 varies slowest). The model expansion of
 * every point is cached column-wise (p x P) for scoring.
 */
class ScoringGrid {
public:
    ScoringGrid(const ModelSpec& spec, std::vector<Eigen::VectorXd> levels) : spec_(spec), levels_(std::move(levels)) {
        if (static_cast<int>(levels_.size()) != spec.k_factors())
            throw std::invalid_argument("grid: need one level vector per factor");
        std::size_t count = 1;
        for (const auto& l : levels_) {
            if (l.size() < 1) throw std::invalid_argument("grid: empty level vector");
            count *= static_cast<std::size_t>(l.size());
        }
        const int k = spec.k_factors();
        points_.resize(static_cast<Eigen::Index>(count), k);
        std::vector<Eigen::Index> idx(static_cast<std::size_t>(k), 0);
        for (Eigen::Index r = 0; r < points_.rows(); ++r) {
            for (int f = 0; f < k; ++f) points_(r, f) = levels_[static_cast<std::size_t>(f)][idx[static_cast<std::size_t>(f)]];
            for (int f = k - 1; f >= 0; --f) {
                auto& i = idx[static_cast<std::size_t>(f)];
                if (++i < levels_[static_cast<std::size_t>(f)].size()) break;
                i = 0;
            }
        }
        model_columns_ = build_model_matrix(points_, spec).transpose();
    }

    const ModelSpec& spec() const { return spec_; }
    const std::vector<Eigen::VectorXd>& levels() const { return levels_; }
    /// P x K, one grid point per row.
    const Eigen::MatrixXd& points() const { return points_; }
    Eigen::Index size() const { return points_.rows(); }
    /// p x P model expansion of the grid points.
    const Eigen::MatrixXd& model_columns() const { return model_columns_; }

private:
    ModelSpec spec_;
    std::vector<Eigen::VectorXd> levels_;
    Eigen::MatrixXd points_;
    Eigen::MatrixXd model_columns_;
};

/// Equally spaced levels spanning [lower, upper] for every factor.
inline ScoringGrid make_grid(const ModelSpec& spec, int levels_per_factor, const Bounds& bounds) {
    if (levels_per_factor < 2)
        throw std::invalid_argument("make_grid: need at least 2 levels per factor, got " +
                                    std::to_string(levels_per_factor));
    bounds.validate();
    if (bounds.dims() != spec.k_factors()) throw std::invalid_argument("make_grid: bounds/model factor count mismatch");
    std::vector<Eigen::VectorXd> levels;
    for (int f = 0; f < spec.k_factors(); ++f) {
        Eigen::VectorXd l(levels_per_factor);
        const double lo = bounds.lower[f];
        const double hi = bounds.upper[f];
        const double last = levels_per_factor - 1;
        for (int i = 0; i < levels_per_factor; ++i) l[i] = lo + (hi - lo) * (i / last);
        l[levels_per_factor - 1] = hi;
        // exact midpoint for odd level counts, so symmetric grids stay symmetric
        if (levels_per_factor % 2 == 1) l[levels_per_factor / 2] = 0.5 * (lo + hi);
        levels.push_back(std::move(l));
    }
    return ScoringGrid(spec, std::move(levels));
}

inline ScoringGrid make_grid(const ModelSpec& spec, int levels_per_factor = 5) {
    return make_grid(spec, levels_per_factor, Bounds::unit_cube(spec.k_factors()));
}

struct GScore {
    double value = std::numeric_limits<double>::infinity();
    std::optional<DesignPoint> argmax;  ///< unset for singular designs
    long long n_spv_evals = 0;

    bool singular() const { return !argmax.has_value(); }
};

/// Maximum SPV over the grid; ties go to the first point in enumeration order.
/// Singular designs score +inf.
inline GScore g_score(const DesignMatrix& design, const ScoringGrid& grid) {
    validate_design(design, grid.spec());
    GScore out;
    const InformationMatrix info(design, grid.spec());
    if (!info.regular()) return out;
    const Eigen::VectorXd values = info.spv_columns(grid.model_columns());
    out.value = values.maxCoeff();
    // ties within rounding noise go to the first grid point
    Eigen::Index best = 0;
    while (values[best] < out.value * (1.0 - 1e-12)) ++best;
    out.argmax = grid.points().row(best).transpose();
    out.n_spv_evals = values.size();
    return out;
}

inline GScore g_score(const DesignMatrix& design, const ScoringGrid& grid, const ModelSpec& spec) {
    if (spec.k_factors() != grid.spec().k_factors()) throw std::invalid_argument("g_score: grid/model mismatch");
    return g_score(design, grid);
}

/// 100 p / g; 0 for g = +inf.
inline double g_efficiency(double g, int p) {
    if (p < 1) throw std::invalid_argument("g_efficiency: p must be >= 1");
    if (std::isnan(g) || g <= 0.0) throw std::invalid_argument("g_efficiency: G-score must be > 0");
    if (std::isinf(g)) return 0.0;
    return 100.0 * p / g;
}

/// 100 eff_a / eff_b.
inline double relative_efficiency(double eff_a, double eff_b) {
    if (std::isnan(eff_b) || eff_b <= 0.0)
        throw std::invalid_argument("relative_efficiency: baseline efficiency must be > 0");
    return 100.0 * eff_a / eff_b;
}

}  // namespace gpso
