#include "gpckit/simkit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gpckit {

namespace {

constexpr double kDivergenceBound = 1e12;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Uniform draw in (0, 1), never exactly 0 (safe under log).
double unit_draw(std::uint64_t seed, std::uint64_t k, std::uint64_t lane) {
    const std::uint64_t h = splitmix64(splitmix64(seed ^ (k * 0xD1B54A32D192ED03ULL)) ^ lane);
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double noise(std::uint64_t seed, int k, NoiseDist dist) {
    const auto ku = static_cast<std::uint64_t>(k);
    const double u1 = unit_draw(seed, ku, 1);
    if (dist == NoiseDist::uniform) return u1;
    const double u2 = unit_draw(seed, ku, 2);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SignalGen SignalGen::step(double scale) { return {Kind::step, scale}; }
SignalGen SignalGen::ramp(double scale) { return {Kind::ramp, scale}; }

SignalGen SignalGen::power_of(int n, double scale) {
    if (n < 1 || n > 3) throw std::invalid_argument("SignalGen: power must be 1..3");
    SignalGen g{Kind::power, scale};
    g.power = n;
    return g;
}

SignalGen SignalGen::square(int period, double scale) {
    if (period <= 0) throw std::invalid_argument("SignalGen: square period must be positive");
    SignalGen g{Kind::square, scale};
    g.period = period;
    return g;
}

SignalGen SignalGen::noise_src(std::uint64_t seed, NoiseDist dist, double scale) {
    SignalGen g{Kind::noise, scale};
    g.seed = seed;
    g.dist = dist;
    return g;
}

SignalGen SignalGen::custom(std::vector<double> samples, double scale) {
    SignalGen g{Kind::custom, scale};
    g.samples = std::move(samples);
    return g;
}

double SignalGen::at(int k) const {
    if (k < 1) throw std::invalid_argument("SignalGen::at: sample index must be >= 1");
    switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::step: return scale;
        case Kind::ramp: return scale * k;
        case Kind::power: return scale * std::pow(static_cast<double>(k), power);
        case Kind::square: {
            // Alternating sign of round(k/period) with halves away from zero.
            const long long m = std::llround(static_cast<double>(k) / period);
            return scale * (m % 2 == 0 ? 1.0 : -1.0);
        }
        case Kind::noise: return scale * gpckit::noise(seed, k, dist);
        case Kind::custom:
            return k <= static_cast<int>(samples.size()) ? scale * samples[static_cast<std::size_t>(k - 1)] : 0.0;
    }
    return 0.0;
}

int SignalGen::power_class() const {
    switch (kind) {
        case Kind::zero:
        case Kind::step: return 0;
        case Kind::ramp: return 1;
        case Kind::power: return power;
        default: return -1;
    }
}

SimRecord run(const CarimaModel& model, const ControllerSpec& spec, const SignalGen& ref,
              const SignalGen& dist, int steps) {
    if (steps < 1) throw std::invalid_argument("run: step count must be >= 1");
    const StateSpace ss = realize(model);
    const PredictionSet ps = build_prediction(ss, spec.horizon);
    const GainSet gains = build_gains(ps, spec);
    LoopState state(model.na(), model.nb());

    const int na = model.na();
    const int nbp1 = model.nb() + 1;
    std::vector<double> y_hist(static_cast<std::size_t>(na), 0.0);      // y(k-1), y(k-2), ...
    std::vector<double> u_hist(static_cast<std::size_t>(nbp1), 0.0);    // u(k-1), u(k-2), ...

    SimRecord rec;
    rec.y_ref.reserve(static_cast<std::size_t>(steps));
    const bool comp = spec.compensated();

    for (int k = 1; k <= steps; ++k) {
        const double chi_k = dist.at(k);
        const double y_k = plant_step(model, y_hist, u_hist, chi_k);
        const double r_k = ref.at(k);

        rec.y_ref.push_back(r_k);
        rec.y.push_back(y_k);
        rec.chi.push_back(chi_k);
        rec.e.push_back(r_k - y_k);

        if (!std::isfinite(y_k) || std::abs(y_k) > kDivergenceBound) {
            rec.diverged = true;
            rec.diverged_at = k;
            rec.u.push_back(state.u_prev());
            rec.du.push_back(0.0);
            break;
        }

        Eigen::VectorXd window(gains.kept);
        for (int i = 0; i < gains.kept; ++i) window(i) = ref.at(k + gains.ref_offset + 1 + i);

        std::optional<Eigen::VectorXd> forecast;
        if (comp) {
            Eigen::VectorXd f = Eigen::VectorXd::Zero(gains.forecast_len());
            if (spec.forecast == ForecastKind::exact) {
                double prev = chi_k;
                for (int i = 0; i < f.size(); ++i) {
                    const double next = dist.at(k + 1 + i);
                    f(i) = next - prev;
                    prev = next;
                }
            } else if (spec.forecast == ForecastKind::hold) {
                const double held = chi_k - (k >= 2 ? rec.chi[static_cast<std::size_t>(k - 2)] : 0.0);
                f.setConstant(held);
            }
            forecast = std::move(f);
        }

        const ControlStep step = gpc_step(gains, state, y_k, window, forecast);
        rec.u.push_back(step.u);
        rec.du.push_back(step.du);

        for (int i = na - 1; i >= 1; --i) y_hist[static_cast<std::size_t>(i)] = y_hist[static_cast<std::size_t>(i - 1)];
        if (na >= 1) y_hist[0] = y_k;
        for (int i = nbp1 - 1; i >= 1; --i) u_hist[static_cast<std::size_t>(i)] = u_hist[static_cast<std::size_t>(i - 1)];
        u_hist[0] = step.u;
    }
    rec.horizon = static_cast<int>(rec.y.size());
    return rec;
}

}  // namespace gpckit
