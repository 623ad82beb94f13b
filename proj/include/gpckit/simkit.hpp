#pragma once

#include <cstdint>
#include <vector>

#include "gpckit/controller.hpp"

namespace gpckit {

enum class NoiseDist { normal, uniform };

/// Deterministic scenario signal source. Every kind is a pure function of
/// the sample index; noise is counter-based (random access by k) so replays
/// align exactly with analysis filters.
struct SignalGen {
    enum class Kind { zero, step, ramp, power, square, noise, custom };

    Kind kind = Kind::zero;
    double scale = 1.0;
    int power = 1;        // for Kind::power (1..3)
    int period = 100;     // for Kind::square
    std::uint64_t seed = 0;
    NoiseDist dist = NoiseDist::normal;
    std::vector<double> samples;  // for Kind::custom

    static SignalGen zero() { return {}; }
    static SignalGen step(double scale = 1.0);
    static SignalGen ramp(double scale = 1.0);
    static SignalGen power_of(int n, double scale = 1.0);
    static SignalGen square(int period, double scale = 1.0);
    static SignalGen noise_src(std::uint64_t seed, NoiseDist dist = NoiseDist::normal,
                               double scale = 1.0);
    static SignalGen custom(std::vector<double> samples, double scale = 1.0);

    /// Sample at time k >= 1.
    double at(int k) const;
    /// Polynomial degree for steady-state classification (step 0, ramp 1,
    /// power n); -1 when the signal is not a k^n class.
    int power_class() const;
};

/// k-th draw of the seeded stream; random-access and platform-independent.
double noise(std::uint64_t seed, int k, NoiseDist dist = NoiseDist::normal);

/// Aligned record of one closed-loop run; e(k) = y*(k) - y(k) exactly.
struct SimRecord {
    int horizon = 0;  // samples actually recorded
    std::vector<double> y_ref, y, u, du, chi, e;
    bool diverged = false;
    int diverged_at = 0;  // first index with |y| over the divergence bound
};

/// Runs the plant in closed loop for k = 1..steps. The controller keeps its
/// own incremental state; the plant is simulated in undifferenced form with
/// all signals zero before k = 1. A numeric blow-up (|y| > 1e12) truncates
/// the record and flags it instead of throwing.
SimRecord run(const CarimaModel& model, const ControllerSpec& spec, const SignalGen& ref,
              const SignalGen& dist, int steps);

}  // namespace gpckit
