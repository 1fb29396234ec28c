#pragma once

#include <cstdint>
#include <random>

namespace gpso {

/// Seeded generator with platform-independent real and index draws.
/// std::mt19937_64 output is fixed by the standard; the std distributions
/// are not, so conversions are done here.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform index in [0, n).
    int index(int n) {
        const int i = static_cast<int>(uniform01() * n);
        return i < n ? i : n - 1;
    }

    friend bool operator==(const Rng&, const Rng&) = default;

private:
    std::mt19937_64 engine_;
};

}  // namespace gpso
