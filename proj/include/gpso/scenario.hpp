/**
 * @brief Search scenarios: a (K, N) design problem plus swarm settings and
 * batch controls, and the table of 29 published benchmark scenarios.
 */
#pragma once

#include "gpso/design.hpp"
#include "gpso/pso_params.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gpso {

struct ScenarioConfig {
    int k_factors = 1;
    int n_runs_design = 3;  ///< N, the number of design points
    std::optional<Bounds> bounds;  ///< unset means [-1, 1] per factor
    int grid_levels = 5;
    PsoParams pso;
    int n_searches = 140;
    std::uint64_t base_seed = 0;
    int parallelism = 1;

    Bounds resolved_bounds() const { return bounds ? *bounds : Bounds::unit_cube(k_factors); }

    /// True when N < p, i.e. every design is singular.
    bool undersized() const { return n_runs_design < p_count(k_factors); }

    void validate() const {
        if (k_factors < 1) throw std::invalid_argument("scenario: K must be >= 1");
        if (n_runs_design < 1) throw std::invalid_argument("scenario: N must be >= 1");
        if (grid_levels < 2) throw std::invalid_argument("scenario: grid levels must be >= 2");
        if (n_searches < 1) throw std::invalid_argument("scenario: number of searches must be >= 1");
        if (parallelism < 1) throw std::invalid_argument("scenario: parallelism must be >= 1");
        const Bounds b = resolved_bounds();
        b.validate();
        if (b.dims() != k_factors) throw std::invalid_argument("scenario: bounds do not match K");
        pso.validate();
        if (pso.vmax.size() != 0 && pso.vmax.size() != k_factors)
            throw std::invalid_argument("scenario: vmax must have K entries");
    }
};

/// A published benchmark scenario. Efficiencies are G-efficiencies (percent)
/// of the previously best published design and of the best swarm design,
/// where reported.
struct BuiltinScenario {
    int k_factors;
    int n_runs_design;
    int n_searches;
    std::optional<double> published_eff;
    std::optional<double> published_pso_eff;
    const char* source;
};

inline const std::vector<BuiltinScenario>& builtin_scenarios() {
    static const std::vector<BuiltinScenario> table = [] {
        std::vector<BuiltinScenario> t;
        for (int n = 3; n <= 9; ++n) t.push_back({1, n, 140, std::nullopt, std::nullopt, "Borkowski (2003) GA"});
        for (int n = 6; n <= 12; ++n) t.push_back({2, n, 140, std::nullopt, std::nullopt, "Borkowski (2003) GA"});
        for (int n = 10; n <= 16; ++n) t.push_back({3, n, 140, std::nullopt, std::nullopt, "Borkowski (2003) GA"});
        t.push_back({4, 15, 210, 48.89, 71.09, "Rodriguez (2010) G-CEXCH"});
        t.push_back({4, 17, 210, 70.14, 73.90, "Hernandez (2018) G(I)-CEXCH"});
        t.push_back({4, 20, 210, 65.11, 80.20, "Rodriguez (2010) G-CEXCH"});
        t.push_back({4, 24, 210, 81.05, 85.95, "Rodriguez (2010) G-CEXCH"});
        t.push_back({5, 21, 210, 38.74, 68.67, "Rodriguez (2010) G-CEXCH"});
        t.push_back({5, 23, 210, 73.02, 73.19, "Hernandez (2018) G(I)-CEXCH"});
        t.push_back({5, 26, 210, 72.47, 75.31, "Rodriguez (2010) G-CEXCH"});
        t.push_back({5, 30, 210, 75.80, 76.16, "Rodriguez (2010) G-CEXCH"});
        return t;
    }();
    return table;
}

inline std::optional<BuiltinScenario> find_builtin_scenario(int k, int n) {
    for (const auto& s : builtin_scenarios())
        if (s.k_factors == k && s.n_runs_design == n) return s;
    return std::nullopt;
}

}  // namespace gpso
