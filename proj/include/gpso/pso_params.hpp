#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gpso {

/// Swarm tuning constants and stopping limits.
struct PsoParams {
    double omega = 0.72984;  ///< inertia weight
    double c1 = 1.496172;    ///< cognitive weight, 2.05 * omega
    double c2 = 1.496172;    ///< social weight, 2.05 * omega
    int swarm_size = 150;
    /// Per-factor velocity limit. Empty means half the bound width per factor;
    /// entries may be +inf to disable clamping.
    Eigen::VectorXd vmax;
    int expected_informees = 3;
    /// A non-zero gbest improvement smaller than this, measured over the last
    /// `improvement_window` iterations, stops the run.
    double improvement_epsilon = std::sqrt(std::numeric_limits<double>::epsilon());
    /// 1 compares consecutive iterations only, which stops the local-topology
    /// swarm as soon as the gbest neighbourhood starts converging.
    int improvement_window = 500;
    int max_iterations = 10000;
    /// Consecutive iterations without any gbest improvement before stopping.
    int stagnation_limit = 500;
    bool record_trace = false;

    void validate() const {
        if (!(omega > 0.0 && omega < 1.0)) throw std::invalid_argument("pso: omega must lie in (0, 1)");
        if (!(c1 >= 0.0) || !(c2 >= 0.0)) throw std::invalid_argument("pso: c1 and c2 must be non-negative");
        if (swarm_size < 1) throw std::invalid_argument("pso: swarm size must be >= 1");
        if (expected_informees < 0) throw std::invalid_argument("pso: expected informees must be >= 0");
        if (!(improvement_epsilon >= 0.0)) throw std::invalid_argument("pso: improvement epsilon must be >= 0");
        if (improvement_window < 1) throw std::invalid_argument("pso: improvement window must be >= 1");
        if (max_iterations < 1) throw std::invalid_argument("pso: max iterations must be >= 1");
        if (stagnation_limit < 1) throw std::invalid_argument("pso: stagnation limit must be >= 1");
        for (Eigen::Index k = 0; k < vmax.size(); ++k)
            if (!(vmax[k] > 0.0)) throw std::invalid_argument("pso: vmax entries must be > 0");
    }
};

}  // namespace gpso
