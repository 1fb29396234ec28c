/**
 * @brief Seeded multi-run search campaigns, their summaries, and cost
 * accounting in objective evaluations.
 */
#pragma once

#include "gpso/pso.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace gpso {

struct Catalog {
    ScenarioConfig scenario;
    std::vector<RunResult> results;  ///< in run-index order
    int best_index = -1;

    long long total_evals() const {
        long long total = 0;
        for (const auto& r : results) total += r.eval_count;
        return total;
    }
    const RunResult& best() const { return results.at(static_cast<std::size_t>(best_index)); }
};

/// Lowest best_g; ties go to the lowest run index.
inline int best_result_index(const std::vector<RunResult>& results) {
    int best = -1;
    for (std::size_t i = 0; i < results.size(); ++i)
        if (best < 0 || results[i].best_g < results[static_cast<std::size_t>(best)].best_g) best = static_cast<int>(i);
    return best;
}

/// Runs scenario.n_searches independent searches with seeds base_seed + i on
/// up to scenario.parallelism threads. The catalog does not depend on the
/// thread count.
inline Catalog run_batch(const ScenarioConfig& scenario) {
    scenario.validate();
    const auto n = static_cast<std::size_t>(scenario.n_searches);
    Catalog catalog;
    catalog.scenario = scenario;
    catalog.results.resize(n);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                catalog.results[i] = run(scenario, scenario.pso, scenario.base_seed + i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
                return;
            }
        }
    };
    const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(scenario.parallelism), n);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    catalog.best_index = best_result_index(catalog.results);
    return catalog;
}

struct EvalCountEstimate {
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// Scales an observed evaluation total from n_observed runs to n_target runs,
/// with a normal-approximation 95% Poisson interval on the total.
inline EvalCountEstimate scale_eval_count(long long total, long long n_observed, long long n_target) {
    if (total < 0) throw std::invalid_argument("scale_eval_count: total must be >= 0");
    if (n_observed < 1 || n_target < 1) throw std::invalid_argument("scale_eval_count: run counts must be >= 1");
    const double ratio = static_cast<double>(n_target) / static_cast<double>(n_observed);
    const double estimate = static_cast<double>(total) * ratio;
    const double half_width = 1.96 * std::sqrt(static_cast<double>(total)) * ratio;
    return {estimate, estimate - half_width, estimate + half_width};
}

struct CostSummary {
    long long total_evals = 0;
    double log10_evals = 0.0;
    EvalCountEstimate scaled;
    long long target_n_runs = 0;
};

inline CostSummary cost_summary(const Catalog& catalog, long long target_n_runs) {
    CostSummary c;
    c.total_evals = catalog.total_evals();
    c.log10_evals = std::log10(static_cast<double>(c.total_evals));
    c.scaled = scale_eval_count(c.total_evals, static_cast<long long>(catalog.results.size()), target_n_runs);
    c.target_n_runs = target_n_runs;
    return c;
}

struct BatchSummary {
    int k_factors = 0;
    int n_runs_design = 0;
    double best_g = 0.0;
    double best_g_eff = 0.0;
    std::vector<double> g_effs;
    std::optional<double> baseline_eff;
    std::vector<double> releffs;  ///< empty without a baseline
    double min_releff = NAN;
    double median_releff = NAN;
    double max_releff = NAN;
    long long total_evals = 0;
    double log10_evals = 0.0;
};

inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty set");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

/// Per-run G-efficiencies, and efficiencies relative to `baseline_eff` when given.
inline BatchSummary summarize(const Catalog& catalog, std::optional<double> baseline_eff = std::nullopt) {
    if (catalog.results.empty()) throw std::invalid_argument("summarize: empty catalog");
    BatchSummary s;
    s.k_factors = catalog.scenario.k_factors;
    s.n_runs_design = catalog.scenario.n_runs_design;
    const int best = catalog.best_index >= 0 ? catalog.best_index : best_result_index(catalog.results);
    s.best_g = catalog.results[static_cast<std::size_t>(best)].best_g;
    s.best_g_eff = catalog.results[static_cast<std::size_t>(best)].best_g_eff;
    for (const auto& r : catalog.results) s.g_effs.push_back(r.best_g_eff);
    s.baseline_eff = baseline_eff;
    if (baseline_eff) {
        for (double e : s.g_effs) s.releffs.push_back(relative_efficiency(e, *baseline_eff));
        s.min_releff = *std::min_element(s.releffs.begin(), s.releffs.end());
        s.max_releff = *std::max_element(s.releffs.begin(), s.releffs.end());
        s.median_releff = median(s.releffs);
    }
    s.total_evals = catalog.total_evals();
    s.log10_evals = std::log10(static_cast<double>(s.total_evals));
    return s;
}

}  // namespace gpso
