#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "rwa/dists.hpp"
#include "rwa/error.hpp"
#include "rwa/mc.hpp"
#include "rwa/quadrature.hpp"
#include "rwa/rng.hpp"

using namespace rwa;
using Catch::Approx;
constexpr double pi = std::numbers::pi;

namespace {

std::vector<double> draw(const Dist& d, std::size_t n, std::uint64_t seed) {
    Rng rng({seed, 0});
    std::vector<double> out(n);
    for (auto& x : out) x = d.sample(rng);
    return out;
}

// ∫ pdf over the support, in the quantile-free substitution x = lo + (hi-lo)(1 - cos πs)/2
// which tames inverse-square-root endpoint singularities.
double total_mass(const Dist& d) {
    const auto& s = d.support();
    const double lo = s.lo, hi = s.hi;
    auto f = [&](double u) {
        const double x = lo + (hi - lo) * 0.5 * (1.0 - std::cos(pi * u));
        const double jac = (hi - lo) * 0.5 * pi * std::sin(pi * u);
        return d.pdf(x) * jac;
    };
    return quad::integrate<double>(f, 0.0, 1.0).value;
}

std::vector<Dist> bounded_catalog() {
    return {arcsin(),           semicircle(),         power_semicircle(1.5), power_semicircle(2.5),
            power_semicircle(0), power_semicircle(-0.25), power_dist(0.5),    power_dist(3.0),
            uniform(-2, 5)};
}

}  // namespace

TEST_CASE("arcsin law") {
    const auto d = arcsin();
    CHECK(d.cdf(0) == Approx(0.5).epsilon(1e-15));
    CHECK(d.pdf(0) == Approx(1 / pi).epsilon(1e-15));
    CHECK(d.cdf(1) == 1.0);
    CHECK(d.cdf(-1) == 0.0);
    CHECK(d.support().lo_singular);
    CHECK(d.support().hi_singular);
    CHECK(*d.mean() == 0.0);
}

TEST_CASE("semicircle law") {
    const auto d = semicircle();
    CHECK(d.pdf(0) == Approx(2 / pi).epsilon(1e-15));
    CHECK(d.cdf(0) == Approx(0.5).epsilon(1e-15));
    CHECK(d.cdf(-1) == 0.0);
    const double z = 0.5;
    CHECK(d.cdf(z) == Approx(0.5 + z * std::sqrt(1 - z * z) / pi + std::asin(z) / pi).epsilon(1e-13));
    CHECK(d.cdf(0.5) == Approx(0.8044988905).epsilon(1e-9));
}

TEST_CASE("power semicircle normalizers") {
    CHECK(power_semicircle_params(1.5).normalizer == Approx(8 / (3 * pi)).epsilon(1e-12));
    CHECK(power_semicircle_params(2.5).normalizer == Approx(16 / (5 * pi)).epsilon(1e-12));
    CHECK(power_semicircle_params(0).normalizer == Approx(0.5).epsilon(1e-12));
    CHECK(power_semicircle_params(0.5).normalizer == Approx(2 / pi).epsilon(1e-12));
    CHECK(power_semicircle_params(-0.5).normalizer == Approx(1 / pi).epsilon(1e-12));
    CHECK_THROWS_AS(power_semicircle_params(-1.0), InvalidArgument);
    CHECK_THROWS_AS(power_semicircle(-2.0), InvalidArgument);
}

TEST_CASE("power semicircle agrees with its special cases") {
    const auto a = arcsin(), pa = power_semicircle(-0.5);
    const auto s = semicircle(), ps = power_semicircle(0.5);
    const auto u = uniform(-1, 1), pu = power_semicircle(0);
    for (double x = -0.99; x < 1.0; x += 0.03) {
        CHECK(pa.pdf(x) == Approx(a.pdf(x)).epsilon(1e-12));
        CHECK(std::abs(pa.cdf(x) - a.cdf(x)) < 1e-12);
        CHECK(ps.pdf(x) == Approx(s.pdf(x)).epsilon(1e-12));
        CHECK(std::abs(ps.cdf(x) - s.cdf(x)) < 1e-12);
        CHECK(std::abs(pu.cdf(x) - u.cdf(x)) < 1e-12);
    }
}

TEST_CASE("power law") {
    const auto one = power_dist(1);
    for (double v = 0; v <= 1; v += 0.125) CHECK(one.cdf(v) == Approx(v).margin(1e-15));
    CHECK(power_dist(2).cdf(0.5) == Approx(0.25).epsilon(1e-15));
    CHECK(*power_dist(3).mean() == Approx(0.75).epsilon(1e-15));
    CHECK_THROWS_AS(power_dist(0), InvalidArgument);
    CHECK_THROWS_AS(power_dist(-1), InvalidArgument);
}

TEST_CASE("extras") {
    CHECK(uniform(-1, 1).cdf(0) == 0.5);
    const auto pm = point_mass(2);
    CHECK(pm.cdf(1.999) == 0.0);
    CHECK(pm.cdf(2) == 1.0);
    CHECK(pm.cdf_left(2) == 0.0);
    CHECK_FALSE(pm.continuous());
    CHECK(cauchy(0, 1).cdf(0) == Approx(0.5).epsilon(1e-15));
    CHECK_FALSE(cauchy(0, 1).mean().has_value());
    CHECK(cauchy(0, 1).support().whole_line());
    CHECK(exponential(2).cdf(std::log(2.0) / 2) == Approx(0.5).epsilon(1e-14));
    CHECK(*exponential(2).mean() == 0.5);
    CHECK_THROWS_AS(uniform(1, 1), InvalidArgument);
    CHECK_THROWS_AS(cauchy(0, 0), InvalidArgument);
    CHECK_THROWS_AS(exponential(0), InvalidArgument);
}

TEST_CASE("densities integrate to one") {
    for (const auto& d : bounded_catalog()) {
        INFO(d.spec());
        CHECK(std::abs(total_mass(d) - 1.0) < 1e-8);
    }
}

TEST_CASE("quantile inverts cdf") {
    auto catalog = bounded_catalog();
    catalog.push_back(cauchy(1, 2));
    catalog.push_back(exponential(0.5));
    for (const auto& d : catalog) {
        for (int i = 1; i < 200; ++i) {
            const double u = i / 200.0;
            INFO(d.spec() << " u=" << u);
            CHECK(std::abs(d.cdf(d.quantile(u)) - u) < 1e-8);
        }
    }
}

TEST_CASE("cdf is monotone and bounded") {
    for (const auto& d : bounded_catalog()) {
        double prev = 0.0;
        for (double x = d.support().lo - 0.5; x <= d.support().hi + 0.5; x += 0.01) {
            const double c = d.cdf(x);
            CHECK(c >= prev - 1e-15);
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
            prev = c;
        }
    }
}

TEST_CASE("samplers match their laws") {
    std::uint64_t seed = 100;
    auto catalog = bounded_catalog();
    catalog.push_back(cauchy(0, 1));
    catalog.push_back(exponential(1));
    for (const auto& d : catalog) {
        INFO(d.spec());
        CHECK(ks_distance(Ecdf(draw(d, 100000, ++seed)), d) < 0.01);
    }
}

TEST_CASE("dist syntax") {
    CHECK(parse_dist("arcsin").family() == Family::Arcsin);
    CHECK(parse_dist("psc:1.5").params() == std::vector<double>{1.5});
    CHECK(parse_dist("uniform:-1,1").support().lo == -1);
    for (const char* s : {"arcsin", "semicircle", "psc:2.5", "uniform:-1,3", "power:2", "cauchy:0,1", "point:3",
                          "exp:1.5"}) {
        const auto d = parse_dist(s);
        CHECK(parse_dist(d.spec()).spec() == d.spec());
    }
    CHECK_THROWS_AS(parse_dist("gauss"), ParseError);
    CHECK_THROWS_AS(parse_dist("psc"), ParseError);
    CHECK_THROWS_AS(parse_dist("uniform:1"), ParseError);
    CHECK_THROWS_AS(parse_dist("power:x"), ParseError);

    const auto list = parse_dist_list("uniform:-1,1,arcsin");
    REQUIRE(list.size() == 2);
    CHECK(list[0].family() == Family::Uniform);
    CHECK(list[1].family() == Family::Arcsin);
    CHECK(parse_dist_list("psc:1.5;semicircle;point:0").size() == 3);
}
