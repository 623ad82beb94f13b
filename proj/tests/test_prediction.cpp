#include "gpckit/prediction.hpp"

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

/// Brute-force oracle: roll the differenced recursion forward from explicit
/// histories and cumulate to output levels. Histories are most-recent-first
/// and match the state layout the predictor consumes.
std::vector<double> rollout_oracle(const CarimaModel& m, double y_now,
                                   const std::vector<double>& dy_hist,
                                   const std::vector<double>& du_hist,
                                   const std::vector<double>& du_future,
                                   const std::vector<double>& dchi_future, int N) {
    auto dy_at = [&](int i) {  // dy(k + i), i <= 0 from history
        return i <= 0 && -i < static_cast<int>(dy_hist.size()) ? dy_hist[static_cast<std::size_t>(-i)] : 0.0;
    };
    auto du_at = [&](int i) {  // du(k + i): i >= 0 future, i < 0 history du(k-1) = du_hist[0]
        if (i >= 0) return i < static_cast<int>(du_future.size()) ? du_future[static_cast<std::size_t>(i)] : 0.0;
        return -i - 1 < static_cast<int>(du_hist.size()) ? du_hist[static_cast<std::size_t>(-i - 1)] : 0.0;
    };
    std::vector<double> dy_new(static_cast<std::size_t>(N + 1), 0.0);
    auto dy_all = [&](int i) { return i >= 1 ? dy_new[static_cast<std::size_t>(i)] : dy_at(i); };

    std::vector<double> y(static_cast<std::size_t>(N));
    double level = y_now;
    for (int i = 1; i <= N; ++i) {
        double v = dchi_future[static_cast<std::size_t>(i - 1)];
        for (int j = 1; j <= m.na(); ++j) v -= m.a[static_cast<std::size_t>(j - 1)] * dy_all(i - j);
        for (int j = 0; j <= m.nb(); ++j) v += m.b[static_cast<std::size_t>(j)] * du_at(i - 1 - j);
        dy_new[static_cast<std::size_t>(i)] = v;
        level += v;
        y[static_cast<std::size_t>(i - 1)] = level;
    }
    return y;
}

}  // namespace

TEST_CASE("prediction matrices for the worked plants") {
    SUBCASE("trivial plant, single step") {
        const PredictionSet ps = build_prediction(realize(CarimaModel({0.0}, {1.0})), 1);
        CHECK(ps.input_inc(0, 0) == 1.0);
        CHECK(ps.input_cum(0, 0) == 1.0);
        CHECK(ps.ones(0) == 1.0);
    }
    SUBCASE("delay-three plant") {
        const PredictionSet ps = build_prediction(realize(CarimaModel({-0.5, -0.8}, {0, 0, 2, 1, 0.5})), 4);
        const double col_inc[4] = {0.0, 0.0, 2.0, 2.0};
        const double col_cum[4] = {0.0, 0.0, 2.0, 4.0};
        for (int i = 0; i < 4; ++i) {
            CHECK(ps.input_inc(i, 0) == doctest::Approx(col_inc[i]));
            CHECK(ps.input_cum(i, 0) == doctest::Approx(col_cum[i]));
        }
    }
    SUBCASE("delay-four plant zero pattern") {
        const PredictionSet ps = build_prediction(realize(CarimaModel({-0.5, -0.8}, {0, 0, 0, 1, 0.5})), 4);
        CHECK(ps.input_cum(3, 0) == doctest::Approx(1.0));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 4; ++j) CHECK(ps.input_cum(i, j) == 0.0);
    }
    SUBCASE("horizon must be positive") {
        CHECK_THROWS_AS((void)build_prediction(realize(CarimaModel({0.0}, {1.0})), 0), std::invalid_argument);
    }
}

TEST_CASE("delay structure of the cumulative input map") {
    TestRng rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const int d = rng.integer(2, 4);
        const int extra = rng.integer(0, 2);
        std::vector<double> b(static_cast<std::size_t>(d + extra), 0.0);
        b[static_cast<std::size_t>(d - 1)] = rng.uniform(0.5, 1.5);
        for (int j = d; j < static_cast<int>(b.size()); ++j) b[static_cast<std::size_t>(j)] = rng.uniform(-1.0, 1.0);
        std::vector<double> a = {rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5)};
        const CarimaModel m(a, b);
        const int N = rng.integer(d, d + 4);
        const PredictionSet ps = build_prediction(realize(m), N);

        for (int i = 0; i < d - 1; ++i)
            for (int j = 0; j < N; ++j) CHECK(ps.input_cum(i, j) == 0.0);
        for (int j = N - d + 1; j < N; ++j)
            for (int i = 0; i < N; ++i) CHECK(ps.input_cum(i, j) == 0.0);
    }
}

TEST_CASE("cumulative maps equal the explicit prefix-sum product") {
    TestRng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const CarimaModel m = random_model(rng);
        const int N = rng.integer(1, 6);
        const PredictionSet ps = build_prediction(realize(m), N);
        Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(N, N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j <= i; ++j) lower(i, j) = 1.0;
        CHECK(((lower * ps.input_inc) - ps.input_cum).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(((lower * ps.state_inc) - ps.state_cum).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(((lower * ps.dist_inc) - ps.dist_cum).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("stacked prediction equals the brute-force rollout") {
    TestRng rng(47);
    for (int trial = 0; trial < 100; ++trial) {
        const CarimaModel m = random_model(rng);
        const int N = 8;
        const PredictionSet ps = build_prediction(realize(m), N);

        const double y_now = rng.uniform(-2.0, 2.0);
        std::vector<double> dy_hist(static_cast<std::size_t>(m.na()));
        std::vector<double> du_hist(static_cast<std::size_t>(m.nb() + 1));
        std::vector<double> du_future(static_cast<std::size_t>(N));
        std::vector<double> dchi(static_cast<std::size_t>(N));
        for (double& v : dy_hist) v = rng.uniform(-1.0, 1.0);
        for (double& v : du_hist) v = rng.uniform(-1.0, 1.0);
        for (double& v : du_future) v = rng.uniform(-1.0, 1.0);
        for (double& v : dchi) v = rng.uniform(-1.0, 1.0);

        Eigen::VectorXd dx(ps.dim());
        for (int i = 0; i < m.na(); ++i) dx(i) = dy_hist[static_cast<std::size_t>(i)];
        for (int j = 0; j <= m.nb(); ++j) dx(m.na() + j) = du_hist[static_cast<std::size_t>(j)];
        Eigen::VectorXd du = Eigen::Map<const Eigen::VectorXd>(du_future.data(), N);
        Eigen::VectorXd dc = Eigen::Map<const Eigen::VectorXd>(dchi.data(), N);

        const Eigen::VectorXd got = predict(ps, y_now, dx, du, dc);
        const auto want = rollout_oracle(m, y_now, dy_hist, du_hist, du_future, dchi, N);
        for (int i = 0; i < N; ++i)
            CHECK(std::abs(got(i) - want[static_cast<std::size_t>(i)]) < 1e-10);
    }
}

TEST_CASE("prediction edge behavior") {
    const PredictionSet ps = build_prediction(realize(CarimaModel({-0.5, -0.8}, {0, 0, 2, 1, 0.5})), 4);
    SUBCASE("resting state holds the current level") {
        const Eigen::VectorXd y =
            predict(ps, 3.25, Eigen::VectorXd::Zero(7), Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(4));
        for (int i = 0; i < 4; ++i) CHECK(y(i) == doctest::Approx(3.25));
    }
    SUBCASE("dimension mismatches are rejected") {
        CHECK_THROWS_AS((void)predict(ps, 0.0, Eigen::VectorXd::Zero(6), Eigen::VectorXd::Zero(4),
                                      Eigen::VectorXd::Zero(4)),
                        std::invalid_argument);
        CHECK_THROWS_AS((void)predict(ps, 0.0, Eigen::VectorXd::Zero(7), Eigen::VectorXd::Zero(3),
                                      Eigen::VectorXd::Zero(4)),
                        std::invalid_argument);
    }
    SUBCASE("single-step deadbeat of the trivial plant") {
        const PredictionSet t = build_prediction(realize(CarimaModel({0.0}, {1.0})), 1);
        Eigen::VectorXd du(1);
        du << 0.7;
        const Eigen::VectorXd y = predict(t, 0.0, Eigen::VectorXd::Zero(2), du, Eigen::VectorXd::Zero(1));
        CHECK(y(0) == doctest::Approx(0.7));
    }
}
