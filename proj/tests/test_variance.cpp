#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "rwa/error.hpp"
#include "rwa/variance.hpp"

using namespace rwa;
using Catch::Approx;

TEST_CASE("expected_sq_sum frozen values") {
    // All n + 1 spacings of n power(θ) variates; at θ = 1 these are uniform spacings.
    CHECK(expected_sq_sum(2, 1.0) == Approx(0.5).epsilon(1e-14));
    CHECK(expected_sq_sum(3, 1.0) == Approx(0.4).epsilon(1e-14));
    CHECK(expected_sq_sum(5, 1.0) == Approx(2.0 / 7.0).epsilon(1e-14));
    CHECK(expected_sq_sum(10, 1.0) == Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(expected_sq_sum(10, 2.0) == Approx(0.19826132525260).epsilon(1e-12));
    CHECK(expected_sq_sum(3, 0.5) == Approx(0.476190476190476).epsilon(1e-13));
    CHECK(expected_sq_sum(2, 2.0) == Approx(0.5111111111111111).epsilon(1e-13));
    CHECK(expected_sq_sum(2, 0.5) == Approx(0.5777777777777778).epsilon(1e-13));
    for (int n = 2; n <= 60; ++n) CHECK(expected_sq_sum(n, 1.0) == Approx(2.0 / (n + 2)).epsilon(1e-12));
}

TEST_CASE("expected_sq_sum rejects bad input") {
    CHECK_THROWS_AS(expected_sq_sum(1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(expected_sq_sum(5, 0.0), InvalidArgument);
    CHECK_THROWS_AS(expected_sq_sum(5, -1.0), InvalidArgument);
    CHECK_THROWS_AS(expected_sq_sum(5, std::nan("")), InvalidArgument);
    CHECK_THROWS_AS(dvariance_dtheta_at1(1), InvalidArgument);
}

TEST_CASE("closed form, printed bracket and quadrature agree") {
    for (int n : {2, 3, 5, 10, 20}) {
        for (double theta : {0.3, 0.5, 1.0, 1.5, 2.0, 5.0}) {
            INFO("n=" << n << " theta=" << theta);
            const double e = expected_sq_sum(n, theta);
            CHECK(printed_bracket(n, theta, BracketReading::Factorial) == Approx(e).epsilon(1e-12));
            CHECK(expected_sq_sum_quadrature(n, theta) == Approx(e).epsilon(1e-8));
        }
    }
    CHECK_THROWS_AS(printed_bracket(5, 1.0, BracketReading::Plain), DomainError);
}

TEST_CASE("values are proper second moments") {
    for (int n = 2; n <= 50; n += 3) {
        for (double theta = 0.1; theta < 20; theta *= 1.7) {
            const double e = expected_sq_sum(n, theta);
            CHECK(e > 1.0 / (n + 1) - 1e-12);  // Cauchy–Schwarz over n + 1 weights
            CHECK(e <= 1.0);
        }
    }
    CHECK(expected_sq_sum(2, 200.0) > 0.95);
}

TEST_CASE("derivative at theta = 1") {
    CHECK(dvariance_dtheta_at1(2) == Approx(-1.0 / 18.0).epsilon(1e-12));
    CHECK(dvariance_dtheta_at1(3) == Approx(-0.0483333333333333).epsilon(1e-12));
    CHECK(dvariance_dtheta_at1(5) == Approx(-0.0350340136054422).epsilon(1e-11));
    CHECK(dvariance_dtheta_at1(10) == Approx(-0.0179779395688).epsilon(1e-10));
    for (int n = 2; n <= 100; ++n) CHECK(dvariance_dtheta_at1(n) < 0.0);
    for (int n : {2, 5, 10, 20, 40}) {
        const double h = 1e-4;
        const double fd = (expected_sq_sum(n, 1 + h) - expected_sq_sum(n, 1 - h)) / (2 * h);
        CHECK(std::abs(fd - dvariance_dtheta_at1(n)) <= 1e-5 * std::abs(dvariance_dtheta_at1(n)));
    }
}

TEST_CASE("variance curves") {
    const std::vector<double> grid = {1, 2, 3, 4};
    const auto c = variance_curve(10, grid, 1.0);
    REQUIRE(c.variance.size() == 4);
    CHECK(c.variance[0] > c.variance[1] - 0.05);
    // θ = 1 is not the minimizer: a slightly larger θ does better.
    CHECK(expected_sq_sum(10, 1.05) < expected_sq_sum(10, 1.0));
    CHECK(c.variance[1] < c.variance[2]);
    CHECK(c.variance[2] < c.variance[3]);

    const auto zero = variance_curve(10, grid, 0.0);
    for (double v : zero.variance) CHECK(v == 0.0);
    const auto scaled = variance_curve(20, grid, 2.5);
    for (std::size_t k = 0; k < grid.size(); ++k) CHECK(scaled.variance[k] == 2.5 * scaled.esq_sum[k]);

    const std::vector<double> one = {1.0};
    CHECK(variance_curve(40, one, 1.0).variance[0] < variance_curve(10, one, 1.0).variance[0]);

    for (int n : {10, 20, 40}) {
        double prev = 0.0;
        for (double theta = 2.0; theta <= 10.0; theta += 0.25) {
            const double v = expected_sq_sum(n, theta);
            CHECK(v > prev);
            prev = v;
        }
    }

    const std::vector<double> bad = {2, 1};
    CHECK_THROWS_AS(variance_curve(10, bad, 1.0), InvalidArgument);
    const std::vector<double> neg = {0, 1};
    CHECK_THROWS_AS(variance_curve(10, neg, 1.0), InvalidArgument);
    CHECK_THROWS_AS(variance_curve(10, grid, -1.0), InvalidArgument);
}

TEST_CASE("sampled spacings") {
    Rng rng({51, 0});
    for (int i = 0; i < 1000; ++i) {
        const auto w = sample_power_spacings(7, 1.7, rng);
        REQUIRE(w.size() == 8);
        double s = 0;
        for (double x : w) {
            CHECK(x >= 0.0);
            s += x;
        }
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
}

TEST_CASE("Monte Carlo agrees with the closed form") {
    for (int n : {2, 10}) {
        for (double theta : {0.5, 1.0, 2.0, 5.0}) {
            const auto m = mc_expected_sq_sum(n, theta, 200000, {52, static_cast<std::uint64_t>(n)});
            INFO("n=" << n << " theta=" << theta);
            CHECK(std::abs(m.mean - expected_sq_sum(n, theta)) < 4 * m.std_error);
        }
    }
    CHECK(mc_expected_sq_sum(2, 50.0, 20000, {53, 0}).mean > 0.9);
    const auto a = mc_expected_sq_sum(10, 1.5, 20000, {54, 0}, 1);
    const auto b = mc_expected_sq_sum(10, 1.5, 20000, {54, 0}, 3);
    CHECK(a.mean == b.mean);
    const auto big = mc_expected_sq_sum(10, 1.5, 320000, {55, 0});
    CHECK(big.std_error == Approx(a.std_error / 4).epsilon(0.1));
    CHECK_THROWS_AS(mc_expected_sq_sum(10, 1.5, 100, {54, 0}), InvalidArgument);
}

TEST_CASE("bracket arbitration picks the factorial reading") {
    const std::vector<int> ns = {2, 5};
    const std::vector<double> thetas = {0.5, 2.0};
    const auto verdicts = arbitrate_bracket_readings(ns, thetas, 100000, {56, 0});
    REQUIRE(verdicts.size() == 2);
    for (const auto& v : verdicts) {
        if (v.reading == BracketReading::Factorial) {
            CHECK(v.defined);
            CHECK(v.accepted);
        } else {
            CHECK_FALSE(v.defined);
            CHECK_FALSE(v.accepted);
        }
    }
}
