#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace gpckit::testing {

/// Deterministic test randomness built on the standardized mt19937_64 core
/// (library distributions are implementation-defined, so transforms are
/// done by hand to keep expected values portable).
class TestRng {
public:
    explicit TestRng(std::uint64_t seed) : eng_(seed) {}

    double unit() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    int integer(int lo, int hi) {
        return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double normal() {
        const double u1 = unit();
        const double u2 = unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace gpckit::testing
