#include "gpckit/closedloop.hpp"

#include <doctest.h>

#include <cmath>

#include "gpckit/simkit.hpp"
#include "test_rng.hpp"

using namespace gpckit;
using gpckit::testing::TestRng;

namespace {

struct Built {
    CarimaModel model;
    PredictionSet ps;
    GainSet gains;
    ControllerSpec spec;
    LoopOperators ops;
};

Built build_loop(const CarimaModel& m, const ControllerSpec& spec) {
    const PredictionSet ps = build_prediction(realize(m), spec.horizon);
    const GainSet gains = build_gains(ps, spec);
    const LoopOperators ops = loop_operators(m, ps, gains, spec);
    return {m, ps, gains, spec, ops};
}

const CarimaModel kPlantA({-0.5, -0.8}, {0, 0, 2, 1, 0.5});   // delay 3
const CarimaModel kPlantB({-0.5, -0.8}, {0, 0, 0, 1, 0.5});   // delay 4

double max_abs_coeff(const LaurentPoly& p) {
    double m = 0.0;
    for (double c : p.coeffs()) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace

TEST_CASE("deadbeat loop collapses to unity") {
    const Built b = build_loop(CarimaModel({0.0}, {1.0}), ControllerSpec::uniform(1, 1.0, 0.0));
    CHECK(max_abs_coeff(b.ops.charpoly - LaurentPoly::constant(1.0)) < 1e-14);
    const StabilityReport st = stability(b.ops);
    CHECK(st.verdict == StabilityVerdict::stable);
    CHECK(st.roots.empty());
    const FinalValue e1 = reference_error_ss(b.ops, 1);
    CHECK_FALSE(e1.unbounded);
    CHECK(e1.value == 0.0);
}

TEST_CASE("stability classification") {
    SUBCASE("marginal when an integrator survives") {
        // A raw difference operator as characteristic polynomial.
        LoopOperators ops;
        ops.charpoly = LaurentPoly::delta();
        CHECK(stability(ops).verdict == StabilityVerdict::marginal);
    }
    SUBCASE("zero polynomial is rejected") {
        LoopOperators ops;
        CHECK_THROWS_AS((void)stability(ops), std::invalid_argument);
    }
    SUBCASE("published configurations are stable, including the negative weight") {
        for (double lam : {-0.1, 1.0, 2.0}) {
            const Built b = build_loop(kPlantA, ControllerSpec::uniform(4, 1.0, lam));
            const StabilityReport st = stability(b.ops);
            CHECK(st.verdict == StabilityVerdict::stable);
            CHECK(st.max_modulus < 1.0);
        }
    }
    SUBCASE("a clearly reckless weighting is unstable") {
        const Built b = build_loop(kPlantA, ControllerSpec::uniform(4, 1.0, -0.7));
        CHECK(stability(b.ops).verdict == StabilityVerdict::unstable);
    }
}

TEST_CASE("steady-state errors reproduce the published closed-loop levels") {
    const double expected[3] = {-4.8827413127, -5.9632653061, -6.3657142857};
    const double lambdas[3] = {-0.1, 1.0, 2.0};
    for (int i = 0; i < 3; ++i) {
        const Built b = build_loop(kPlantA, ControllerSpec::uniform(4, 1.0, lambdas[i]));
        const SteadyStateReport rep = steady_state_report(b.ops, 1, 1);
        REQUIRE_FALSE(rep.total.unbounded);
        CHECK(rep.total.value == doctest::Approx(expected[i]).epsilon(1e-10));
        // Superposition inside the report.
        CHECK(rep.total.value ==
              doctest::Approx(rep.reference_error.value + rep.disturbance_error.value));
    }
}

TEST_CASE("analytic error reconstruction matches the simulated loop exactly") {
    struct Case {
        CarimaModel model;
        ControllerSpec spec;
        SignalGen ref, dist;
    };
    const std::vector<Case> cases = {
        {kPlantA, ControllerSpec::uniform(4, 1.0, 1.0), SignalGen::ramp(), SignalGen::ramp()},
        {kPlantA, ControllerSpec::uniform(4, 1.0, -0.1), SignalGen::ramp(), SignalGen::ramp()},
        {kPlantA, ControllerSpec::uniform(4, 1.0, 0.5), SignalGen::square(100), SignalGen::noise_src(3)},
        {kPlantB, ControllerSpec::uniform(4, 1.0, 1e-10, Variant::igmvc), SignalGen::square(100),
         SignalGen::noise_src(9)},
        {kPlantB, ControllerSpec::uniform(4, 1.0, 0.0, Variant::reduced), SignalGen::ramp(),
         SignalGen::zero()},
        {kPlantA,
         ControllerSpec::uniform(4, 1.0, 1e-4, Variant::compensated_reduced, ForecastKind::exact),
         SignalGen::square(100), SignalGen::power_of(2)},
        {kPlantA, ControllerSpec::uniform(4, 1.0, 0.3, Variant::compensated_full, ForecastKind::hold),
         SignalGen::ramp(), SignalGen::noise_src(12)},
    };
    const int K = 400;
    for (const Case& c : cases) {
        CAPTURE(to_string(c.spec.variant));
        const Built b = build_loop(c.model, c.spec);
        REQUIRE(stability(b.ops).verdict == StabilityVerdict::stable);
        const SimRecord rec = run(c.model, c.spec, c.ref, c.dist, K);
        REQUIRE_FALSE(rec.diverged);
        const auto analytic = error_signal(
            b.ops, [&](int t) { return c.ref.at(t); }, [&](int t) { return c.dist.at(t); }, K);
        double worst = 0.0;
        for (int k = 1; k <= K; ++k)
            worst = std::max(worst, std::abs(analytic[static_cast<std::size_t>(k - 1)] -
                                             rec.e[static_cast<std::size_t>(k - 1)]));
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("error reconstruction is linear in its inputs") {
    const Built b = build_loop(kPlantA, ControllerSpec::uniform(4, 1.0, 1.0));
    const int K = 200;
    const SignalGen ref = SignalGen::ramp();
    const SignalGen dist = SignalGen::noise_src(21);
    auto ref_fn = [&](int t) { return ref.at(t); };
    auto dist_fn = [&](int t) { return dist.at(t); };
    auto zero_fn = [](int) { return 0.0; };

    const auto both = error_signal(b.ops, ref_fn, dist_fn, K);
    const auto only_ref = error_signal(b.ops, ref_fn, zero_fn, K);
    const auto only_dist = error_signal(b.ops, zero_fn, dist_fn, K);
    for (int i = 0; i < K; ++i)
        CHECK(std::abs(both[static_cast<std::size_t>(i)] - only_ref[static_cast<std::size_t>(i)] -
                       only_dist[static_cast<std::size_t>(i)]) < 1e-10);
}

TEST_CASE("error tail converges to the final-value limit") {
    for (double lam : {1.0, 2.0}) {
        const Built b = build_loop(kPlantA, ControllerSpec::uniform(4, 1.0, lam));
        const SteadyStateReport rep = steady_state_report(b.ops, 1, 1);
        REQUIRE_FALSE(rep.total.unbounded);
        auto k_fn = [](int t) { return static_cast<double>(t); };
        const auto e = error_signal(b.ops, k_fn, k_fn, 400);
        for (int k = 350; k <= 400; ++k)
            CHECK(std::abs(e[static_cast<std::size_t>(k - 1)] - rep.total.value) < 1e-6);
    }
}

TEST_CASE("unstable loops refuse steady-state analysis") {
    const Built b = build_loop(kPlantA, ControllerSpec::uniform(4, 1.0, -0.7));
    CHECK_THROWS_AS((void)reference_error_ss(b.ops, 1), std::domain_error);
    CHECK_THROWS_AS((void)error_signal(
                        b.ops, [](int t) { return static_cast<double>(t); },
                        [](int) { return 0.0; }, 10),
                    std::domain_error);
}

TEST_CASE("disturbance transfer reduces to a pure difference without delay or weights") {
    TestRng rng(211);
    for (int trial = 0; trial < 20; ++trial) {
        const int na = rng.integer(1, 3);
        const int nb = rng.integer(0, 3);
        std::vector<double> a(static_cast<std::size_t>(na)), b(static_cast<std::size_t>(nb + 1));
        for (double& v : a) v = rng.uniform(-0.9, 0.9);
        for (double& v : b) v = rng.uniform(-1.0, 1.0);
        b[0] = rng.uniform(0.3, 2.0) * (rng.unit() < 0.5 ? -1.0 : 1.0);  // b0 != 0
        const CarimaModel m(a, b);
        const int N = rng.integer(1, 5);
        const Built bl = build_loop(m, ControllerSpec::uniform(N, 1.0, 0.0));
        const RationalTF gw = disturbance_tf(bl.ops);
        // gw == delta exactly: num - delta * den vanishes.
        const LaurentPoly residual = gw.num - LaurentPoly::delta() * gw.den;
        CHECK(max_abs_coeff(residual) < 1e-10);
    }
}

TEST_CASE("minimum-variance disturbance operator replays the recorded noise error") {
    const ControllerSpec spec = ControllerSpec::uniform(4, 1.0, 1e-10, Variant::igmvc);
    const Built b = build_loop(kPlantB, spec);
    const SignalGen ref = SignalGen::square(100);
    const int K = 400;
    for (std::uint64_t seed : {2ULL, 77ULL}) {
        const SignalGen dist = SignalGen::noise_src(seed);
        const SimRecord with_noise = run(kPlantB, spec, ref, dist, K);
        const SimRecord noiseless = run(kPlantB, spec, ref, SignalGen::zero(), K);

        const RationalTF op = disturbance_error_tf(b.ops);
        const auto reconstructed = tf_filter_fn(
            op, [&](int t) { return t >= 1 ? dist.at(t) : 0.0; }, K);
        for (int k = 1; k <= K; ++k) {
            const double target = with_noise.e[static_cast<std::size_t>(k - 1)] -
                                  noiseless.e[static_cast<std::size_t>(k - 1)];
            CHECK(std::abs(reconstructed[static_cast<std::size_t>(k - 1)] - target) < 1e-8);
        }
    }
}

TEST_CASE("exact compensation nulls the disturbance operator") {
    const ControllerSpec spec =
        ControllerSpec::uniform(4, 1.0, 0.0, Variant::compensated_reduced, ForecastKind::exact);
    const Built b = build_loop(kPlantA, spec);
    const RationalTF gw = disturbance_tf(b.ops);
    CHECK((gw.num.is_zero() || max_abs_coeff(gw.num) < 1e-10));
}
