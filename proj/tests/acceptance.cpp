// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Set GPSO_ACCEPTANCE_ONLY=<n>[,<n>...] to run a subset.

#include "gpso/gpso.hpp"
#include "test_util.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>

namespace {

using namespace gpso;
using gpso::testing::random_design;
using gpso::testing::random_regular_design;
using gpso::testing::rel_diff;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

ScenarioConfig scenario(int k, int n, int searches, std::uint64_t seed) {
    ScenarioConfig s;
    s.k_factors = k;
    s.n_runs_design = n;
    s.n_searches = searches;
    s.base_seed = seed;
    s.parallelism = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return s;
}

// 1. K=1, N=3: best of 10 default runs reaches the Kiefer bound p = 3.
Outcome exact_optimum() {
    DesignMatrix analytic(3, 1);
    analytic << -1, 0, 1;
    const double oracle = g_score(analytic, make_grid(ModelSpec(1))).value;
    const Catalog c = run_batch(scenario(1, 3, 10, 1));
    const double g = c.best().best_g;
    const bool pass = std::abs(oracle - 3.0) < 1e-12 && g <= 3.0 + 1e-6 && c.best().best_g_eff >= 99.99997;
    return {pass, "analytic G=" + fmt(oracle, 17) + ", best G=" + fmt(g, 17) + ", G_eff=" + fmt(c.best().best_g_eff, 10)};
}

// 2. Mean SPV over the design rows equals p.
Outcome trace_identity() {
    std::mt19937_64 gen(2002);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 1 + trial % 3;
        const ModelSpec spec(k);
        const DesignMatrix x = random_regular_design(gen, spec.p() + trial % 7, k);
        const Eigen::VectorXd v = InformationMatrix(x, spec).spv_columns(build_model_matrix(x, spec).transpose());
        worst = std::max(worst, rel_diff(v.mean(), spec.p()));
    }
    return {worst <= 1e-9, "200 designs, worst relative error " + fmt(worst, 3)};
}

// 3. Production grid score vs the independent brute-force oracle.
Outcome oracle_equivalence() {
    std::mt19937_64 gen(3003);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 1 + trial % 3;
        const ModelSpec spec(k);
        const DesignMatrix x = random_regular_design(gen, spec.p() + trial % 6, k);
        worst = std::max(worst, rel_diff(g_score(x, make_grid(spec)).value, brute_force_check(x, spec)));
    }
    return {worst <= 1e-9, "100 designs, worst relative difference " + fmt(worst, 3)};
}

// 4. Fine grid never scores below the coarse grid; symmetry invariances.
Outcome monotonicity_and_symmetry() {
    std::mt19937_64 gen(4004);
    int monotone_failures = 0;
    double worst_symmetry = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 1 + trial % 3;
        const ModelSpec spec(k);
        const DesignMatrix x = random_regular_design(gen, spec.p() + 1 + trial % 5, k);
        const RescoreReport r = rescore_fine(x, spec, 21);
        if (!(r.fine_g >= r.coarse_g)) ++monotone_failures;

        const ScoringGrid grid = make_grid(spec);
        const double base = g_score(x, grid).value;
        std::vector<Eigen::Index> rows(static_cast<std::size_t>(x.rows()));
        std::iota(rows.begin(), rows.end(), 0);
        std::shuffle(rows.begin(), rows.end(), gen);
        DesignMatrix permuted(x.rows(), k);
        for (Eigen::Index j = 0; j < x.rows(); ++j) permuted.row(j) = x.row(rows[static_cast<std::size_t>(j)]);
        DesignMatrix swapped = x;
        swapped.col(0).swap(swapped.col(k - 1));
        DesignMatrix flipped = x;
        flipped.col(trial % k) *= -1.0;
        for (const DesignMatrix* m : {&permuted, &swapped, &flipped})
            worst_symmetry = std::max(worst_symmetry, rel_diff(g_score(*m, grid).value, base));
    }
    return {monotone_failures == 0 && worst_symmetry <= 1e-12,
            std::to_string(monotone_failures) + " monotonicity failures, worst symmetry deviation " +
                fmt(worst_symmetry, 3)};
}

// 5. K=2, N=6..12: every run within 90% of the batch best.
Outcome run_consistency() {
    std::ostringstream detail;
    bool pass = true;
    for (int n = 6; n <= 12; ++n) {
        const Catalog c = run_batch(scenario(2, n, 20, 5000 + 100 * n));
        const BatchSummary s = summarize(c, c.best().best_g_eff);
        pass = pass && s.min_releff >= 90.0;
        detail << "N=" << n << " best " << fmt(s.best_g_eff, 5) << " min releff " << fmt(s.min_releff, 5) << "; ";
    }
    return {pass, detail.str()};
}

// 6. K=4, N=15: best of 20 runs within 95% of the published 71.09.
Outcome k4_n15() {
    const Catalog c = run_batch(scenario(4, 15, 20, 6000));
    const BatchSummary s = summarize(c, 71.09);
    const RescoreReport audit = rescore_fine(c.best().best_design, ModelSpec(4), 21);
    return {s.best_g_eff >= 67.5, "best G_eff " + fmt(s.best_g_eff, 6) + " (releff vs 71.09: " +
                                      fmt(s.max_releff, 5) + "), median G_eff " + fmt(median(s.g_effs), 5) +
                                      ", 21^4 rescore discrepancy " + fmt(audit.discrepancy_pct, 3) + "%"};
}

// 7. Evaluation accounting for the K=3 scenarios and Poisson scaling.
Outcome cost_accounting() {
    bool exact = true;
    std::ostringstream detail;
    for (int n = 10; n <= 16; ++n) {
        const Catalog c = run_batch(scenario(3, n, 2, 7000 + n));
        for (const auto& r : c.results)
            exact = exact && r.eval_count == static_cast<long long>(c.scenario.pso.swarm_size) * (1 + r.iterations);
        const CostSummary cost = cost_summary(c, 200);
        detail << "N=" << n << " log10(evals/run)=" << fmt(std::log10(cost.total_evals / 2.0), 4) << "; ";
    }
    const EvalCountEstimate e = scale_eval_count(100, 140, 200);
    const double half = e.ci_high - e.estimate;
    const bool scaled = std::abs(e.estimate - 142.857) <= 1e-3 && std::abs(half - 27.994) <= 1e-3 &&
                        std::abs(e.ci_low - (e.estimate - half)) <= 1e-12;
    return {exact && scaled, std::string(exact ? "eval_count = S(1+iterations) for all runs" : "eval_count mismatch") +
                                 "; (100,140,200) -> " + fmt(e.estimate, 9) + " +/- " + fmt(half, 8) + "; " +
                                 detail.str()};
}

// 8. Bit-identical results, serial vs 7 workers.
Outcome determinism() {
    ScenarioConfig s = scenario(2, 8, 7, 8000);
    s.pso.record_trace = true;
    s.parallelism = 1;
    const Catalog serial = run_batch(s);
    s.parallelism = 7;
    const Catalog parallel = run_batch(s);
    bool same = serial.best_index == parallel.best_index;
    for (std::size_t i = 0; i < serial.results.size(); ++i) same = same && serial.results[i] == parallel.results[i];
    const RunResult again = run(s, s.pso, 8003);
    same = same && again == serial.results[3];
    return {same, same ? "7 runs identical across parallelism 1 and 7 and a standalone rerun" : "results differ"};
}

// 9. Randomized confinement and clamping properties.
Outcome confinement() {
    std::mt19937_64 gen(9009);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int violations = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const int k = 1 + trial % 5;
        const int n = 1 + trial % 7;
        Bounds b{Eigen::VectorXd(k), Eigen::VectorXd(k)};
        for (int f = 0; f < k; ++f) {
            b.lower[f] = -1.0 - u(gen) * 0.5;
            b.upper[f] = b.lower[f] + 0.5 + std::abs(u(gen)) * 2.0;
        }
        const DesignMatrix x = 3.0 * random_design(gen, n, k);
        const Eigen::MatrixXd v = 2.0 * random_design(gen, n, k);
        const auto [cx, cv] = confine(x, v, b);
        for (int j = 0; j < n; ++j)
            for (int f = 0; f < k; ++f) {
                const bool outside = x(j, f) < b.lower[f] || x(j, f) > b.upper[f];
                if (cx(j, f) < b.lower[f] || cx(j, f) > b.upper[f]) ++violations;
                if (outside && (cv(j, f) != -0.5 * v(j, f) || (cx(j, f) != b.lower[f] && cx(j, f) != b.upper[f])))
                    ++violations;
                if (!outside && (cv(j, f) != v(j, f) || cx(j, f) != x(j, f))) ++violations;
            }
        Eigen::VectorXd vmax = (b.upper - b.lower) / 2.0;
        Eigen::MatrixXd clamped = 5.0 * random_design(gen, n, k);
        clamp_velocity(clamped, vmax);
        for (int f = 0; f < k; ++f)
            if (clamped.col(f).cwiseAbs().maxCoeff() > vmax[f]) ++violations;
    }
    return {violations == 0, "2000 random cases, " + std::to_string(violations) + " violations"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"exact optimum recovery K=1 N=3", exact_optimum},
        {"trace identity", trace_identity},
        {"oracle equivalence", oracle_equivalence},
        {"grid monotonicity and symmetry", monotonicity_and_symmetry},
        {"run consistency K=2 N=6..12", run_consistency},
        {"K=4 N=15 best of 20 >= 67.5", k4_n15},
        {"cost accounting K=3", cost_accounting},
        {"determinism across parallelism", determinism},
        {"confinement and clamping", confinement},
    };

    std::set<int> only;
    if (const char* sel = std::getenv("GPSO_ACCEPTANCE_ONLY")) {
        std::istringstream is(sel);
        std::string tok;
        while (std::getline(is, tok, ',')) only.insert(std::stoi(tok));
    }

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && !only.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o{false, ""};
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << criteria[i].first << " (" << fmt(secs, 3)
                  << "s): " << o.detail << std::endl;
    }
    std::cout << (failures ? "acceptance: " + std::to_string(failures) + " criteria failed" : "acceptance: all passed")
              << std::endl;
    return failures ? 1 : 0;
}
