/**
 * @brief The `gpso` command line: search, score, compare, grid-check and
 * scenarios subcommands. Lives in a header so tests can drive it with
 * in-memory streams.
 */
#pragma once

#include "gpso/catalog_io.hpp"
#include "gpso/verification.hpp"

#include "CLI11.hpp"

#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace gpso {

namespace detail {

inline std::string format_point(const std::optional<DesignPoint>& x) {
    if (!x) return "none (singular design)";
    std::ostringstream os;
    os << std::setprecision(6) << '(';
    for (Eigen::Index k = 0; k < x->size(); ++k) os << (k ? ", " : "") << (*x)[k];
    os << ')';
    return os.str();
}

inline DesignMatrix load_design(const std::string& path, std::optional<int> expected_k) {
    DesignMatrix x = read_design_csv(path);
    if (expected_k && x.cols() != *expected_k)
        throw DesignFormatError(path + ": design has " + std::to_string(x.cols()) + " factor columns, expected K=" +
                                std::to_string(*expected_k));
    check_design_bounds(x, Bounds::unit_cube(static_cast<int>(x.cols())), path);
    return x;
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"G-optimal exact response-surface designs by particle swarm search", "gpso"};
    app.require_subcommand(1);

    // search
    ScenarioConfig scenario;
    std::optional<int> search_runs;
    std::string out_dir = "gpso_out";
    std::optional<double> baseline_eff;
    bool no_baseline = false;
    auto* search = app.add_subcommand("search", "run a batch of seeded searches and write a catalog");
    search->add_option("--k", scenario.k_factors, "number of factors K")->required()->check(CLI::Range(1, 10));
    search->add_option("--n", scenario.n_runs_design, "number of design points N")->required()->check(CLI::PositiveNumber);
    search->add_option("--runs", search_runs, "number of independent searches (default: published count or 140)")
        ->check(CLI::PositiveNumber);
    search->add_option("--seed", scenario.base_seed, "base seed; run i uses seed+i");
    search->add_option("--particles", scenario.pso.swarm_size, "swarm size S")->check(CLI::PositiveNumber);
    search->add_option("--grid", scenario.grid_levels, "scoring grid levels per factor")->check(CLI::Range(2, 101));
    search->add_option("--threads", scenario.parallelism, "worker threads")->check(CLI::PositiveNumber);
    search->add_option("--max-iter", scenario.pso.max_iterations, "iteration cap per search")->check(CLI::PositiveNumber);
    search->add_option("--stagnation", scenario.pso.stagnation_limit, "stop after this many unimproved iterations")
        ->check(CLI::PositiveNumber);
    search->add_option("--window", scenario.pso.improvement_window,
                       "iterations over which a tiny gbest improvement ends a search")
        ->check(CLI::PositiveNumber);
    search->add_option("--baseline-eff", baseline_eff, "G-efficiency to report relative efficiencies against")
        ->check(CLI::PositiveNumber);
    search->add_flag("--no-baseline", no_baseline, "do not use the published baseline efficiency");
    search->add_option("--out", out_dir, "output directory");
    search->add_flag("--trace", scenario.pso.record_trace, "record per-iteration gbest traces (trace.csv)");

    // score
    std::string design_path;
    int grid_levels = 5;
    std::optional<int> expected_k;
    auto* score = app.add_subcommand("score", "score a design CSV on a grid");
    score->add_option("--design", design_path, "design CSV")->required();
    score->add_option("--grid", grid_levels, "grid levels per factor")->check(CLI::Range(2, 101));
    score->add_option("--k", expected_k, "expected number of factors")->check(CLI::PositiveNumber);

    // compare
    std::string path_a, path_b;
    auto* compare = app.add_subcommand("compare", "relative G-efficiency of design A to design B");
    compare->add_option("--a", path_a, "design CSV A")->required();
    compare->add_option("--b", path_b, "design CSV B (reference)")->required();
    compare->add_option("--grid", grid_levels, "grid levels per factor")->check(CLI::Range(2, 101));
    compare->add_option("--k", expected_k, "expected number of factors")->check(CLI::PositiveNumber);

    // grid-check
    int fine_levels = 21;
    long long samples = 0;
    std::uint64_t sample_seed = 0;
    bool as_json = false;
    auto* check = app.add_subcommand("grid-check", "rescore a design on a finer grid or by random sampling");
    check->add_option("--design", design_path, "design CSV")->required();
    check->add_option("--grid", grid_levels, "coarse grid levels per factor")->check(CLI::Range(2, 101));
    check->add_option("--fine-grid", fine_levels, "fine grid levels per factor")->check(CLI::Range(2, 1001));
    check->add_option("--samples", samples, "use this many uniform random points instead of a fine grid")
        ->check(CLI::PositiveNumber);
    check->add_option("--seed", sample_seed, "seed for --samples");
    check->add_option("--k", expected_k, "expected number of factors")->check(CLI::PositiveNumber);
    check->add_flag("--json", as_json, "print the report as JSON");

    auto* scenarios = app.add_subcommand("scenarios", "list the built-in published scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*search) {
            const auto builtin = find_builtin_scenario(scenario.k_factors, scenario.n_runs_design);
            scenario.n_searches = search_runs ? *search_runs : (builtin ? builtin->n_searches : 140);
            if (!baseline_eff && !no_baseline && builtin && builtin->published_eff) baseline_eff = builtin->published_eff;
            scenario.validate();
            if (scenario.undersized())
                err << "warning: N=" << scenario.n_runs_design << " < p=" << p_count(scenario.k_factors)
                    << ", every design is singular\n";
            const Catalog catalog = run_batch(scenario);
            const BatchSummary summary = summarize(catalog, baseline_eff);
            write_catalog(out_dir, catalog, summary);
            const RunResult& best = catalog.best();
            out << std::setprecision(10) << "K=" << scenario.k_factors << " N=" << scenario.n_runs_design
                << " p=" << p_count(scenario.k_factors) << " searches=" << scenario.n_searches << '\n'
                << "best run " << catalog.best_index << " (seed " << best.seed << "): G=" << best.best_g
                << " G_eff=" << best.best_g_eff << '\n';
            if (baseline_eff)
                out << "releff vs " << *baseline_eff << ": min=" << summary.min_releff
                    << " median=" << summary.median_releff << " max=" << summary.max_releff << '\n';
            out << "evaluations: " << summary.total_evals << " (log10 " << summary.log10_evals << ")\n"
                << "wrote " << out_dir << "/{catalog.json,best_design.csv,summary.csv,runs.csv}\n";
            return 0;
        }
        if (*score) {
            const DesignMatrix x = detail::load_design(design_path, expected_k);
            const ModelSpec spec(static_cast<int>(x.cols()));
            const GScore g = g_score(x, make_grid(spec, grid_levels));
            out << std::setprecision(12) << "K=" << spec.k_factors() << " N=" << x.rows() << " p=" << spec.p()
                << " grid=" << grid_levels << '^' << spec.k_factors() << '\n'
                << "G=" << g.value << '\n'
                << "G_eff=" << g_efficiency(g.value, spec.p()) << '\n'
                << "argmax=" << detail::format_point(g.argmax) << '\n';
            return 0;
        }
        if (*compare) {
            const DesignMatrix a = detail::load_design(path_a, expected_k);
            const DesignMatrix b = detail::load_design(path_b, static_cast<int>(a.cols()));
            const ModelSpec spec(static_cast<int>(a.cols()));
            const ScoringGrid grid = make_grid(spec, grid_levels);
            const double eff_a = g_efficiency(g_score(a, grid).value, spec.p());
            const double eff_b = g_efficiency(g_score(b, grid).value, spec.p());
            out << std::setprecision(12) << "G_eff(a)=" << eff_a << '\n' << "G_eff(b)=" << eff_b << '\n';
            if (eff_b <= 0.0) {
                err << "error: " << path_b << " is singular; relative efficiency undefined\n";
                return 1;
            }
            out << "releff=" << relative_efficiency(eff_a, eff_b) << '\n';
            return 0;
        }
        if (*check) {
            const DesignMatrix x = detail::load_design(design_path, expected_k);
            const ModelSpec spec(static_cast<int>(x.cols()));
            const Bounds bounds = Bounds::unit_cube(spec.k_factors());
            const RescoreReport r = samples > 0 ? rescore_sampled(x, spec, samples, sample_seed, bounds, grid_levels)
                                                : rescore_fine(x, spec, fine_levels, bounds, grid_levels);
            if (as_json) {
                nlohmann::json j = {
                    {"coarse_levels", r.coarse_levels},
                    {"fine_levels", r.fine_levels},
                    {"monte_carlo_samples", r.monte_carlo_samples},
                    {"coarse_g", std::isfinite(r.coarse_g) ? nlohmann::json(r.coarse_g) : nlohmann::json(nullptr)},
                    {"fine_g", std::isfinite(r.fine_g) ? nlohmann::json(r.fine_g) : nlohmann::json(nullptr)},
                    {"discrepancy_pct", r.discrepancy_pct},
                    {"suspect", r.suspect()},
                };
                if (r.argmax_fine)
                    j["argmax_fine"] = std::vector<double>(r.argmax_fine->data(), r.argmax_fine->data() + r.argmax_fine->size());
                out << j.dump(2) << '\n';
            } else {
                const std::string fine_label = r.monte_carlo_samples > 0
                                                   ? std::to_string(r.monte_carlo_samples) + " samples"
                                                   : std::to_string(r.fine_levels) + "^" + std::to_string(spec.k_factors());
                out << std::setprecision(12) << std::left << std::setw(18) << "coarse grid" << r.coarse_levels << '^'
                    << spec.k_factors() << '\n'
                    << std::setw(18) << "fine grid" << fine_label << '\n'
                    << std::setw(18) << "coarse G" << r.coarse_g << '\n'
                    << std::setw(18) << "fine G" << r.fine_g << '\n'
                    << std::setw(18) << "coarse G_eff" << g_efficiency(r.coarse_g, spec.p()) << '\n'
                    << std::setw(18) << "fine G_eff" << g_efficiency(r.fine_g, spec.p()) << '\n'
                    << std::setw(18) << "fine argmax" << detail::format_point(r.argmax_fine) << '\n'
                    << std::setw(18) << "discrepancy %" << r.discrepancy_pct << (r.suspect() ? "  SUSPECT" : "") << '\n';
            }
            return 0;
        }
        if (*scenarios) {
            out << "K,N,p,n_searches,published_Geff,published_pso_Geff,source\n";
            for (const auto& s : builtin_scenarios()) {
                out << s.k_factors << ',' << s.n_runs_design << ',' << p_count(s.k_factors) << ',' << s.n_searches << ',';
                if (s.published_eff) out << *s.published_eff;
                out << ',';
                if (s.published_pso_eff) out << *s.published_pso_eff;
                out << ',' << s.source << '\n';
            }
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace gpso
