#pragma once

#include "gpso/design.hpp"

#include <cmath>
#include <random>

namespace gpso::testing {

/// Uniform random N x K design on [-1, 1]^K.
inline DesignMatrix random_design(std::mt19937_64& gen, int n, int k) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DesignMatrix x(n, k);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(gen);
    return x;
}

/// Random design that is nonsingular under the production test.
inline DesignMatrix random_regular_design(std::mt19937_64& gen, int n, int k) {
    const ModelSpec spec(k);
    for (;;) {
        DesignMatrix x = random_design(gen, n, k);
        if (InformationMatrix(x, spec).regular()) return x;
    }
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace gpso::testing
