/**
 * @brief On-disk form of a search campaign: catalog JSON (scenario, per-run
 * metadata, best index), summary table CSV, tidy per-run CSV and traces.
 */
#pragma once

#include "gpso/design_io.hpp"
#include "gpso/runner.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>

namespace gpso {

inline nlohmann::json to_json(const ScenarioConfig& s) {
    const Bounds b = s.resolved_bounds();
    const Eigen::VectorXd vmax = s.pso.vmax.size() ? s.pso.vmax : Eigen::VectorXd((b.upper - b.lower) / 2.0);
    auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    return {
        {"k_factors", s.k_factors},
        {"n_runs_design", s.n_runs_design},
        {"p", p_count(s.k_factors)},
        {"lower_bounds", vec(b.lower)},
        {"upper_bounds", vec(b.upper)},
        {"grid_levels", s.grid_levels},
        {"n_searches", s.n_searches},
        {"base_seed", s.base_seed},
        {"pso",
         {{"omega", s.pso.omega},
          {"c1", s.pso.c1},
          {"c2", s.pso.c2},
          {"swarm_size", s.pso.swarm_size},
          {"vmax", vec(vmax)},
          {"expected_informees", s.pso.expected_informees},
          {"improvement_epsilon", s.pso.improvement_epsilon},
          {"improvement_window", s.pso.improvement_window},
          {"max_iterations", s.pso.max_iterations},
          {"stagnation_limit", s.pso.stagnation_limit}}},
    };
}

/// Non-finite G-scores are written as null.
inline nlohmann::json to_json(const Catalog& c) {
    nlohmann::json results = nlohmann::json::array();
    for (std::size_t i = 0; i < c.results.size(); ++i) {
        const RunResult& r = c.results[i];
        nlohmann::json g = std::isfinite(r.best_g) ? nlohmann::json(r.best_g) : nlohmann::json(nullptr);
        results.push_back({{"run", i},
                           {"seed", r.seed},
                           {"best_g", g},
                           {"best_g_eff", r.best_g_eff},
                           {"eval_count", r.eval_count},
                           {"iterations", r.iterations},
                           {"stop_reason", to_string(r.stop_reason)}});
    }
    const long long total = c.total_evals();
    return {{"scenario", to_json(c.scenario)},
            {"results", results},
            {"best_index", c.best_index},
            {"total_evals", total},
            {"log10_evals", total > 0 ? std::log10(static_cast<double>(total)) : 0.0}};
}

inline constexpr const char* kSummaryCsvHeader = "K,N,best_G,best_Geff,min_releff,median_releff,max_releff,log10_evals";

/// One summary table row; releff columns are empty without a baseline.
inline void write_summary_row(std::ostream& os, const BatchSummary& s) {
    auto opt = [&](double v) {
        if (std::isfinite(v)) os << v;
    };
    os << std::setprecision(10) << s.k_factors << ',' << s.n_runs_design << ',' << s.best_g << ',' << s.best_g_eff
       << ',';
    opt(s.min_releff);
    os << ',';
    opt(s.median_releff);
    os << ',';
    opt(s.max_releff);
    os << ',' << s.log10_evals << '\n';
}

/// Writes catalog.json, best_design.csv, summary.csv, runs.csv and, when
/// traces were recorded, trace.csv into `dir`.
inline void write_catalog(const std::filesystem::path& dir, const Catalog& c, const BatchSummary& s) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream os(dir / name);
        if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
        return os;
    };
    {
        auto os = open("catalog.json");
        os << to_json(c).dump(2) << '\n';
    }
    write_design_csv((dir / "best_design.csv").string(), c.best().best_design);
    {
        auto os = open("summary.csv");
        os << kSummaryCsvHeader << '\n';
        write_summary_row(os, s);
    }
    {
        auto os = open("runs.csv");
        os << "run,seed,best_G,best_Geff,releff,eval_count,iterations,stop_reason\n" << std::setprecision(17);
        for (std::size_t i = 0; i < c.results.size(); ++i) {
            const RunResult& r = c.results[i];
            os << i << ',' << r.seed << ',' << r.best_g << ',' << r.best_g_eff << ',';
            if (!s.releffs.empty()) os << s.releffs[i];
            os << ',' << r.eval_count << ',' << r.iterations << ',' << to_string(r.stop_reason) << '\n';
        }
    }
    bool traced = false;
    for (const auto& r : c.results) traced = traced || !r.trace.empty();
    if (traced) {
        auto os = open("trace.csv");
        os << "run,iteration,gbest\n" << std::setprecision(17);
        for (std::size_t i = 0; i < c.results.size(); ++i)
            for (const auto& [it, g] : c.results[i].trace) os << i << ',' << it << ',' << g << '\n';
    }
}

}  // namespace gpso
