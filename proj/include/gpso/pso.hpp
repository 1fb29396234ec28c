/**
 * @brief Matrix-particle swarm search for exact designs on a hyper-rectangle.
 *
 * Each particle is a whole N x K design with an N x K velocity. Particles
 * communicate through a random informant graph (each particle informs itself
 * plus a few uniformly drawn others) that is redrawn whenever an iteration
 * fails to improve the swarm best. Coordinates leaving the region are put
 * back on the boundary and their velocity is halved and reversed.
 *
 * Random draws are consumed in a fixed order so that a run is a pure function
 * of (scenario, params, seed): at initialization, per particle its position
 * (row-major) then its velocity, then the informant graph; per iteration, the
 * graph (when redrawn) and then per particle U1 and U2 (row-major).
 */
#pragma once

#include "gpso/design.hpp"
#include "gpso/pso_params.hpp"
#include "gpso/rng.hpp"
#include "gpso/scenario.hpp"

#include <algorithm>
#include <concepts>
#include <cstring>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace gpso {

template <class F>
concept DesignObjective = std::invocable<F&, const DesignMatrix&> &&
                          std::convertible_to<std::invoke_result_t<F&, const DesignMatrix&>, double>;

struct Particle {
    DesignMatrix position;
    Eigen::MatrixXd velocity;
    DesignMatrix pbest_position;
    double pbest_score = std::numeric_limits<double>::infinity();
};

/// informs[i]: sorted particle indices that particle i shares its best with,
/// always containing i.
struct InformantGraph {
    std::vector<std::vector<int>> informs;

    int size() const { return static_cast<int>(informs.size()); }

    /// informants[i] = { j : i in informs[j] }, sorted ascending.
    std::vector<std::vector<int>> informants() const {
        std::vector<std::vector<int>> in(informs.size());
        for (int j = 0; j < size(); ++j)
            for (int i : informs[static_cast<std::size_t>(j)]) in[static_cast<std::size_t>(i)].push_back(j);
        return in;
    }
};

/// Each particle informs itself plus `expected_informees` uniform draws with
/// replacement (duplicates collapse).
inline InformantGraph gen_neighbors(int swarm_size, int expected_informees, Rng& rng) {
    if (swarm_size < 1) throw std::invalid_argument("gen_neighbors: swarm size must be >= 1");
    InformantGraph g;
    g.informs.resize(static_cast<std::size_t>(swarm_size));
    for (int i = 0; i < swarm_size; ++i) {
        auto& links = g.informs[static_cast<std::size_t>(i)];
        links.push_back(i);
        for (int d = 0; d < expected_informees; ++d) links.push_back(rng.index(swarm_size));
        std::sort(links.begin(), links.end());
        links.erase(std::unique(links.begin(), links.end()), links.end());
    }
    return g;
}

/// Velocity limit per factor: params.vmax, or half the bound width.
inline Eigen::VectorXd resolve_vmax(const PsoParams& params, const Bounds& bounds) {
    if (params.vmax.size() == 0) return (bounds.upper - bounds.lower) / 2.0;
    if (params.vmax.size() != bounds.dims()) throw std::invalid_argument("pso: vmax must have K entries");
    return params.vmax;
}

/// Clamps each column k of `velocity` to [-vmax_k, vmax_k].
inline void clamp_velocity(Eigen::MatrixXd& velocity, const Eigen::VectorXd& vmax) {
    for (Eigen::Index k = 0; k < velocity.cols(); ++k)
        velocity.col(k) = velocity.col(k).cwiseMax(-vmax[k]).cwiseMin(vmax[k]);
}

/// omega V + c1 U1 .* (Pbest - X) + c2 U2 .* (Lbest - X), clamped to vmax.
inline Eigen::MatrixXd velocity_update(const Particle& particle, const DesignMatrix& lbest, const PsoParams& params,
                                       const Eigen::VectorXd& vmax, Rng& rng) {
    const DesignMatrix& x = particle.position;
    const auto same_shape = [&](const Eigen::MatrixXd& m) { return m.rows() == x.rows() && m.cols() == x.cols(); };
    if (!same_shape(particle.velocity) || !same_shape(particle.pbest_position) || !same_shape(lbest) ||
        vmax.size() != x.cols())
        throw std::invalid_argument("velocity_update: shape mismatch");

    auto draw = [&] {
        Eigen::MatrixXd u(x.rows(), x.cols());
        for (Eigen::Index j = 0; j < u.rows(); ++j)
            for (Eigen::Index k = 0; k < u.cols(); ++k) u(j, k) = rng.uniform01();
        return u;
    };
    const Eigen::MatrixXd u1 = draw();
    const Eigen::MatrixXd u2 = draw();

    Eigen::MatrixXd v = params.omega * particle.velocity +
                        params.c1 * u1.cwiseProduct(particle.pbest_position - x) +
                        params.c2 * u2.cwiseProduct(lbest - x);
    clamp_velocity(v, vmax);
    return v;
}

/// Reflecting walls: an out-of-range coordinate is set to the violated bound
/// and its velocity component becomes -v/2.
inline std::pair<DesignMatrix, Eigen::MatrixXd> confine(DesignMatrix position, Eigen::MatrixXd velocity,
                                                        const Bounds& bounds) {
    if (position.rows() != velocity.rows() || position.cols() != velocity.cols() || position.cols() != bounds.dims())
        throw std::invalid_argument("confine: shape mismatch");
    for (Eigen::Index j = 0; j < position.rows(); ++j)
        for (Eigen::Index k = 0; k < position.cols(); ++k) {
            double& x = position(j, k);
            if (x < bounds.lower[k]) {
                x = bounds.lower[k];
                velocity(j, k) = -0.5 * velocity(j, k);
            } else if (x > bounds.upper[k]) {
                x = bounds.upper[k];
                velocity(j, k) = -0.5 * velocity(j, k);
            }
        }
    return {std::move(position), std::move(velocity)};
}

struct SwarmState {
    std::vector<Particle> particles;
    InformantGraph graph;
    std::vector<std::vector<int>> informants;
    std::vector<DesignMatrix> lbest_position;
    std::vector<double> lbest_score;
    DesignMatrix gbest_position;
    double gbest_score = std::numeric_limits<double>::infinity();
    int gbest_index = -1;
    int iteration = 0;
    long long eval_count = 0;
    /// gbest decrease achieved by the latest iteration (0 when unimproved).
    double last_improvement = std::numeric_limits<double>::infinity();
    Bounds bounds;
    Eigen::VectorXd vmax;
    Rng rng;
};

namespace detail {

inline void refresh_lbest(SwarmState& s) {
    const std::size_t n = s.particles.size();
    s.lbest_position.resize(n);
    s.lbest_score.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        int best = -1;
        for (int j : s.informants[i])
            if (best < 0 || s.particles[static_cast<std::size_t>(j)].pbest_score <
                                s.particles[static_cast<std::size_t>(best)].pbest_score)
                best = j;
        const Particle& b = s.particles[static_cast<std::size_t>(best)];
        s.lbest_position[i] = b.pbest_position;
        s.lbest_score[i] = b.pbest_score;
    }
}

inline void regenerate_graph(SwarmState& s, const PsoParams& params) {
    s.graph = gen_neighbors(static_cast<int>(s.particles.size()), params.expected_informees, s.rng);
    s.informants = s.graph.informants();
}

}  // namespace detail

/// Draws S random designs and velocities, scores them once each and sets up
/// personal, local and global bests.
template <DesignObjective Objective>
SwarmState init_swarm(int n_runs, const Bounds& bounds, const PsoParams& params, std::uint64_t seed,
                      Objective&& objective) {
    if (n_runs < 1) throw std::invalid_argument("init_swarm: N must be >= 1");
    bounds.validate();
    params.validate();

    SwarmState s;
    s.bounds = bounds;
    s.vmax = resolve_vmax(params, bounds);
    s.rng = Rng(seed);
    const Eigen::Index k_factors = bounds.dims();

    s.particles.resize(static_cast<std::size_t>(params.swarm_size));
    for (Particle& p : s.particles) {
        p.position.resize(n_runs, k_factors);
        for (Eigen::Index j = 0; j < n_runs; ++j)
            for (Eigen::Index k = 0; k < k_factors; ++k)
                p.position(j, k) = s.rng.uniform(bounds.lower[k], bounds.upper[k]);
        p.velocity.resize(n_runs, k_factors);
        for (Eigen::Index j = 0; j < n_runs; ++j)
            for (Eigen::Index k = 0; k < k_factors; ++k) {
                const double x = p.position(j, k);
                p.velocity(j, k) = s.rng.uniform((bounds.lower[k] - x) / 2.0, (bounds.upper[k] - x) / 2.0);
            }
        clamp_velocity(p.velocity, s.vmax);
        p.pbest_position = p.position;
    }
    detail::regenerate_graph(s, params);

    for (std::size_t i = 0; i < s.particles.size(); ++i) {
        Particle& p = s.particles[i];
        p.pbest_score = static_cast<double>(objective(p.position));
        ++s.eval_count;
        if (s.gbest_index < 0 || p.pbest_score < s.gbest_score) {
            s.gbest_index = static_cast<int>(i);
            s.gbest_score = p.pbest_score;
        }
    }
    s.gbest_position = s.particles[static_cast<std::size_t>(s.gbest_index)].pbest_position;
    detail::refresh_lbest(s);
    return s;
}

/// One swarm iteration, in place.
template <DesignObjective Objective>
void step(SwarmState& s, Objective&& objective, const PsoParams& params) {
    if (s.particles.empty()) throw std::invalid_argument("step: swarm not initialized");
    if (s.iteration > 0 && s.last_improvement == 0.0) {
        detail::regenerate_graph(s, params);
        detail::refresh_lbest(s);
    }

    const double previous = s.gbest_score;
    for (std::size_t i = 0; i < s.particles.size(); ++i) {
        Particle& p = s.particles[i];
        Eigen::MatrixXd v = velocity_update(p, s.lbest_position[i], params, s.vmax, s.rng);
        DesignMatrix moved = p.position + v;
        auto [x, v_confined] = confine(std::move(moved), std::move(v), s.bounds);
        p.position = std::move(x);
        p.velocity = std::move(v_confined);

        const double score = static_cast<double>(objective(p.position));
        ++s.eval_count;
        if (score < p.pbest_score) {
            p.pbest_position = p.position;
            p.pbest_score = score;
            if (score < s.gbest_score) {
                s.gbest_position = p.position;
                s.gbest_score = score;
                s.gbest_index = static_cast<int>(i);
            }
        }
    }
    detail::refresh_lbest(s);

    // inf - inf is NaN: an all-singular swarm has not improved
    const double delta = previous - s.gbest_score;
    s.last_improvement = delta > 0.0 ? delta : 0.0;
    ++s.iteration;
}

enum class StopReason { TinyImprovement, Stagnation, MaxIterations };

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::TinyImprovement: return "tiny_improvement";
        case StopReason::Stagnation: return "stagnation";
        case StopReason::MaxIterations: return "max_iterations";
    }
    return "unknown";
}

struct SwarmOutcome {
    DesignMatrix best_position;
    double best_score = std::numeric_limits<double>::infinity();
    long long eval_count = 0;
    int iterations = 0;
    StopReason stop_reason = StopReason::MaxIterations;
    std::vector<std::pair<int, double>> trace;  ///< (iteration, gbest) when recorded
};

/**
 * Iterates until the first of: an iteration improves gbest by a non-zero
 * amount below params.improvement_epsilon; params.stagnation_limit
 * consecutive iterations without improvement; params.max_iterations.
 */
template <DesignObjective Objective>
SwarmOutcome optimize(int n_runs, const Bounds& bounds, const PsoParams& params, std::uint64_t seed,
                      Objective&& objective) {
    SwarmState s = init_swarm(n_runs, bounds, params, seed, objective);
    SwarmOutcome out;
    if (params.record_trace) out.trace.emplace_back(0, s.gbest_score);
    // gbest after each of the last `improvement_window` iterations, oldest first
    std::deque<double> history{s.gbest_score};
    int stagnant = 0;
    for (;;) {
        step(s, objective, params);
        if (params.record_trace) out.trace.emplace_back(s.iteration, s.gbest_score);
        history.push_back(s.gbest_score);
        if (static_cast<int>(history.size()) > params.improvement_window + 1) history.pop_front();
        const double windowed = history.front() - history.back();
        if (static_cast<int>(history.size()) == params.improvement_window + 1 && windowed > 0.0 &&
            windowed < params.improvement_epsilon) {
            out.stop_reason = StopReason::TinyImprovement;
            break;
        }
        stagnant = s.last_improvement == 0.0 ? stagnant + 1 : 0;
        if (stagnant >= params.stagnation_limit) {
            out.stop_reason = StopReason::Stagnation;
            break;
        }
        if (s.iteration >= params.max_iterations) {
            out.stop_reason = StopReason::MaxIterations;
            break;
        }
    }
    out.best_position = s.gbest_position;
    out.best_score = s.gbest_score;
    out.eval_count = s.eval_count;
    out.iterations = s.iteration;
    return out;
}

/// The swarm objective for a scenario: G-score on its fixed scoring grid.
class GridObjective {
public:
    explicit GridObjective(ScoringGrid grid) : grid_(std::move(grid)) {}
    double operator()(const DesignMatrix& x) const { return g_score(x, grid_).value; }
    const ScoringGrid& grid() const { return grid_; }

private:
    ScoringGrid grid_;
};

inline GridObjective make_objective(const ScenarioConfig& scenario) {
    const ModelSpec spec(scenario.k_factors);
    return GridObjective(make_grid(spec, scenario.grid_levels, scenario.resolved_bounds()));
}

inline SwarmState init_swarm(const ScenarioConfig& scenario, const PsoParams& params, std::uint64_t seed) {
    scenario.validate();
    return init_swarm(scenario.n_runs_design, scenario.resolved_bounds(), params, seed, make_objective(scenario));
}

struct RunResult {
    DesignMatrix best_design;
    double best_g = std::numeric_limits<double>::infinity();
    double best_g_eff = 0.0;
    long long eval_count = 0;
    int iterations = 0;
    std::uint64_t seed = 0;
    StopReason stop_reason = StopReason::MaxIterations;
    std::vector<std::pair<int, double>> trace;

    friend bool operator==(const RunResult& a, const RunResult& b) {
        auto same_bits = [](double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; };
        if (a.best_design.rows() != b.best_design.rows() || a.best_design.cols() != b.best_design.cols()) return false;
        for (Eigen::Index i = 0; i < a.best_design.size(); ++i)
            if (!same_bits(a.best_design.data()[i], b.best_design.data()[i])) return false;
        if (a.trace.size() != b.trace.size()) return false;
        for (std::size_t i = 0; i < a.trace.size(); ++i)
            if (a.trace[i].first != b.trace[i].first || !same_bits(a.trace[i].second, b.trace[i].second))
                return false;
        return same_bits(a.best_g, b.best_g) && same_bits(a.best_g_eff, b.best_g_eff) &&
               a.eval_count == b.eval_count && a.iterations == b.iterations && a.seed == b.seed &&
               a.stop_reason == b.stop_reason;
    }
};

/// One complete G-optimal design search for a scenario.
inline RunResult run(const ScenarioConfig& scenario, const PsoParams& params, std::uint64_t seed) {
    scenario.validate();
    params.validate();
    const GridObjective objective = make_objective(scenario);
    SwarmOutcome o = optimize(scenario.n_runs_design, scenario.resolved_bounds(), params, seed, objective);
    RunResult r;
    r.best_design = std::move(o.best_position);
    r.best_g = o.best_score;
    r.best_g_eff = g_efficiency(r.best_g, p_count(scenario.k_factors));
    r.eval_count = o.eval_count;
    r.iterations = o.iterations;
    r.seed = seed;
    r.stop_reason = o.stop_reason;
    r.trace = std::move(o.trace);
    return r;
}

}  // namespace gpso
