#include "gpckit/carima.hpp"

#include <doctest.h>

#include <cmath>

#include "test_rng.hpp"

using namespace gpckit;
using gpckit::testing::TestRng;

namespace {

CarimaModel random_model(TestRng& rng) {
    const int na = rng.integer(1, 4);
    const int nb = rng.integer(0, 4);
    std::vector<double> a(static_cast<std::size_t>(na)), b(static_cast<std::size_t>(nb + 1));
    for (double& v : a) v = rng.uniform(-1.0, 1.0);
    for (double& v : b) v = rng.uniform(-1.0, 1.0);
    b[static_cast<std::size_t>(rng.integer(0, nb))] = rng.uniform(0.5, 1.0);
    return CarimaModel(std::move(a), std::move(b));
}

}  // namespace

TEST_CASE("model validation and delay") {
    CHECK_THROWS_AS(CarimaModel({}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(CarimaModel({0.5}, {}), std::invalid_argument);
    CHECK_THROWS_AS(CarimaModel({0.5}, {0.0, 0.0}), std::invalid_argument);

    CHECK(CarimaModel({0.0}, {1.0}).delay() == 1);
    CHECK(CarimaModel({-0.5, -0.8}, {0, 0, 2, 1, 0.5}).delay() == 3);
    CHECK(CarimaModel({-0.5, -0.8}, {0, 0, 0, 1, 0.5}).delay() == 4);
}

TEST_CASE("state-space realization structure") {
    SUBCASE("simplest plant") {
        const StateSpace ss = realize(CarimaModel({0.0}, {1.0}));
        CHECK(ss.dim() == 2);
        CHECK(ss.A.isZero(0.0));
        CHECK(ss.B(0) == 1.0);
        CHECK(ss.B(1) == 1.0);
        CHECK(ss.C(0) == 1.0);
        CHECK(ss.C(1) == 0.0);
    }
    SUBCASE("delayed third-order plant") {
        const StateSpace ss = realize(CarimaModel({-0.5, -0.8}, {0, 0, 2, 1, 0.5}));
        REQUIRE(ss.dim() == 7);
        const double first_row[7] = {0.5, 0.8, 0.0, 2.0, 1.0, 0.5, 0.0};
        for (int j = 0; j < 7; ++j) CHECK(ss.A(0, j) == first_row[j]);
        // dy shift register then du shift register.
        CHECK(ss.A(1, 0) == 1.0);
        CHECK(ss.A(2, 1) == 0.0);
        for (int j = 1; j <= 4; ++j) CHECK(ss.A(2 + j, 2 + j - 1) == 1.0);
        CHECK(ss.B(0) == 0.0);
        CHECK(ss.B(2) == 1.0);
    }
    SUBCASE("deterministic: identical models give identical realizations") {
        const CarimaModel m({-0.3, 0.2}, {0.0, 1.0, 0.25});
        const StateSpace s1 = realize(m);
        const StateSpace s2 = realize(m);
        CHECK((s1.A - s2.A).norm() == 0.0);
        CHECK((s1.B - s2.B).norm() == 0.0);
    }
}

TEST_CASE("impulse-response recursion") {
    SUBCASE("unit-delay plant") {
        const auto h = markov(CarimaModel({0.0}, {1.0}), 4);
        CHECK(h[0] == 1.0);
        CHECK(h[1] == 0.0);
        CHECK(h[2] == 0.0);
    }
    SUBCASE("delay-three plant") {
        const auto h = markov(CarimaModel({-0.5, -0.8}, {0, 0, 2, 1, 0.5}), 4);
        CHECK(h[0] == 0.0);
        CHECK(h[1] == 0.0);
        CHECK(h[2] == doctest::Approx(2.0));
        CHECK(h[3] == doctest::Approx(2.0));
    }
    SUBCASE("delay-four plant") {
        const auto h = markov(CarimaModel({-0.5, -0.8}, {0, 0, 0, 1, 0.5}), 4);
        CHECK(h[0] == 0.0);
        CHECK(h[1] == 0.0);
        CHECK(h[2] == 0.0);
        CHECK(h[3] == doctest::Approx(1.0));
    }
}

TEST_CASE("recursion agrees with the realization powers") {
    TestRng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const CarimaModel m = random_model(rng);
        const StateSpace ss = realize(m);
        const auto h = markov(m, 10);
        Eigen::RowVectorXd row = ss.C;
        for (int j = 0; j < 10; ++j) {
            CHECK(std::abs(h[static_cast<std::size_t>(j)] - row * ss.B) < 1e-12);
            row *= ss.A;
        }
    }
}

TEST_CASE("plant stepping") {
    const CarimaModel trivial({0.0}, {1.0});
    CHECK(plant_step(trivial, {}, {3.0}, 0.0) == 3.0);

    const CarimaModel ex({-0.5, -0.8}, {0, 0, 2, 1, 0.5});
    CHECK(plant_step(ex, {}, {}, 1.0) == 1.0);
    // y(k-1)=1, y(k-2)=2, u(k-3)=1: 0.5*1 + 0.8*2 + 2*1 = 4.1
    CHECK(plant_step(ex, {1.0, 2.0}, {0.0, 0.0, 1.0}, 0.0) == doctest::Approx(4.1));
}

TEST_CASE("differenced and undifferenced forms produce the same output") {
    TestRng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const CarimaModel m = random_model(rng);
        const int steps = 200;
        std::vector<double> u(static_cast<std::size_t>(steps)), chi(static_cast<std::size_t>(steps));
        for (double& v : u) v = rng.uniform(-1.0, 1.0);
        for (double& v : chi) v = rng.uniform(-0.5, 0.5);

        auto at = [](const std::vector<double>& s, int t) {
            return t >= 1 && t <= static_cast<int>(s.size()) ? s[static_cast<std::size_t>(t - 1)] : 0.0;
        };

        // Undifferenced rollout.
        std::vector<double> y1(static_cast<std::size_t>(steps + 1), 0.0);
        for (int k = 1; k <= steps; ++k) {
            double v = chi[static_cast<std::size_t>(k - 1)];
            for (int i = 1; i <= m.na(); ++i)
                v -= m.a[static_cast<std::size_t>(i - 1)] * (k - i >= 1 ? y1[static_cast<std::size_t>(k - i)] : 0.0);
            for (int j = 0; j <= m.nb(); ++j) v += m.b[static_cast<std::size_t>(j)] * at(u, k - 1 - j);
            y1[static_cast<std::size_t>(k)] = v;
        }

        // Differenced rollout, cumulated back to levels.
        std::vector<double> dy(static_cast<std::size_t>(steps + 1), 0.0);
        std::vector<double> y2(static_cast<std::size_t>(steps + 1), 0.0);
        for (int k = 1; k <= steps; ++k) {
            double v = at(chi, k) - at(chi, k - 1);
            for (int i = 1; i <= m.na(); ++i)
                v -= m.a[static_cast<std::size_t>(i - 1)] * (k - i >= 1 ? dy[static_cast<std::size_t>(k - i)] : 0.0);
            for (int j = 0; j <= m.nb(); ++j)
                v += m.b[static_cast<std::size_t>(j)] * (at(u, k - 1 - j) - at(u, k - 2 - j));
            dy[static_cast<std::size_t>(k)] = v;
            y2[static_cast<std::size_t>(k)] = y2[static_cast<std::size_t>(k - 1)] + v;
        }

        double scale = 1.0;
        for (int k = 1; k <= steps; ++k) scale = std::max(scale, std::abs(y1[static_cast<std::size_t>(k)]));
        for (int k = 1; k <= steps; ++k)
            CHECK(std::abs(y1[static_cast<std::size_t>(k)] - y2[static_cast<std::size_t>(k)]) < 1e-10 * scale);
    }
}

TEST_CASE("signal zero extension") {
    Signal s;
    s.samples = {1.0, 2.0, 3.0};
    s.start = 1;
    CHECK(s.at(0) == 0.0);
    CHECK(s.at(1) == 1.0);
    CHECK(s.at(3) == 3.0);
    CHECK(s.at(4) == 0.0);
}
