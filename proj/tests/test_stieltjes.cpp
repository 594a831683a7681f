#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "rwa/dists.hpp"
#include "rwa/error.hpp"
#include "rwa/mc.hpp"
#include "rwa/stieltjes.hpp"

using namespace rwa;
using Catch::Approx;

namespace {

const std::vector<cplx> kPoints = {{2, 0}, {1.5, 0.5}, {0, 3}, {-2.5, 0}, {0.3, 0.8}, {-1, -1}, {4, -2}, {0, -0.6}};

std::vector<Dist> catalog() {
    return {arcsin(),           semicircle(),    power_semicircle(1.5), power_semicircle(2.5),
            uniform(-1, 1),     power_dist(2.0), power_dist(0.5),       point_mass(0.25)};
}

std::vector<Dist> repeat(const Dist& d, int k) { return std::vector<Dist>(static_cast<std::size_t>(k), d); }

// Central difference of g at z along the real axis, one Richardson step.
cplx derivative(const std::function<cplx(cplx)>& g, cplx z) {
    auto d = [&](double h) { return (g(z + h) - g(z - h)) / (2 * h); };
    const double h = 1e-2;
    return (4.0 * d(h / 2) - d(h)) / 3.0;
}

}  // namespace

TEST_CASE("transform examples") {
    CHECK(transform_deriv(arcsin(), 2.0, 1).real() == Approx(1 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(transform_deriv(semicircle(), 2.0, 1).real() == Approx(2 * (2 - std::sqrt(3.0))).epsilon(1e-12));
    for (const auto& d : catalog()) {
        INFO(d.spec());
        const double z = 1e6;
        CHECK(std::abs(z * transform_deriv(d, z, 1) - 1.0) < 1e-5);
    }
    // Point mass: exact.
    CHECK(transform_deriv(point_mass(0), 1.0, 2) == cplx(-1.0, 0.0));
    CHECK(transform_deriv(point_mass(0), 2.0, 3) == cplx(2.0 / 8.0, 0.0));
}

TEST_CASE("transform domain checks") {
    CHECK_THROWS_AS(transform_deriv(arcsin(), 0.5, 1), DomainError);
    CHECK_THROWS_AS(transform_deriv(arcsin(), cplx(1.0, 1e-8), 1), DomainError);
    CHECK_THROWS_AS(transform_deriv(cauchy(0, 1), 5.0, 1), DomainError);
    CHECK_THROWS_AS(transform_deriv(arcsin(), 2.0, 0), InvalidArgument);
    CHECK_THROWS_AS(closed_form_transform(ClosedForm::Arcsin, 0.3), DomainError);
    CHECK_THROWS_AS(transform_deriv(EmpiricalLaw({-1, 0, 1}), 0.2, 1), DomainError);
    CHECK(distance_to_support(arcsin().support(), cplx(2, 0)) == Approx(1.0));
    CHECK(distance_to_support(arcsin().support(), cplx(0, 0.5)) == Approx(0.5));
    CHECK(distance_to_support(arcsin().support(), cplx(0.5, 0)) == 0.0);
}

TEST_CASE("Herglotz sign and conjugate symmetry") {
    for (const auto& d : catalog()) {
        INFO(d.spec());
        for (const auto& z : kPoints) {
            if (z.imag() > 0) CHECK(transform_deriv(d, z, 1).imag() < 0.0);
            for (int m = 1; m <= 4; ++m) {
                const auto a = transform_deriv(d, z, m);
                const auto b = transform_deriv(d, std::conj(z), m);
                CHECK(std::abs(a - std::conj(b)) <= 1e-12 * std::max(1.0, std::abs(a)));
            }
        }
    }
}

TEST_CASE("derivative orders are consistent") {
    for (const auto& d : catalog()) {
        for (const auto& z : kPoints) {
            for (int m = 2; m <= 4; ++m) {
                INFO(d.spec() << " z=" << z << " m=" << m);
                const auto exact = transform_deriv(d, z, m);
                const auto fd = derivative([&](cplx w) { return transform_deriv(d, w, m - 1); }, z);
                CHECK(std::abs(exact - fd) <= 1e-6 * std::abs(exact));
            }
        }
    }
}

TEST_CASE("closed forms match quadrature") {
    CHECK(closed_form_transform(ClosedForm::Arcsin, 2.0).real() == Approx(0.5773502691896258).epsilon(1e-15));
    const double big = 1e8;
    CHECK(big * closed_form_transform(ClosedForm::Arcsin, big).real() == Approx(1.0).epsilon(1e-12));
    CHECK(-big * closed_form_transform(ClosedForm::Semicircle, -big).real() == Approx(1.0).epsilon(1e-6));
    int count = 0;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double angle = 2 * 3.141592653589793 * (i + 0.13) / 5.0;
            const double radius = 1.2 + 1.1 * j;
            const cplx z = std::polar(radius, angle);
            CHECK(std::abs(closed_form_transform(ClosedForm::Arcsin, z) - transform_deriv(arcsin(), z, 1)) < 1e-9);
            CHECK(std::abs(closed_form_transform(ClosedForm::Semicircle, z) - transform_deriv(semicircle(), z, 1)) <
                  1e-9);
            ++count;
        }
    }
    CHECK(count == 20);
    CHECK(std::abs(closed_form_transform(ClosedForm::Semicircle, cplx(0, 3)) -
                   transform_deriv(semicircle(), cplx(0, 3), 1)) < 1e-10);
}

TEST_CASE("residual bookkeeping") {
    const auto p = make_residual(cplx(1, 1), cplx(2, 0), cplx(1, 0));
    CHECK(p.abs_res == 1.0);
    CHECK(p.rel_res == 0.5);
    const auto zero = make_residual(cplx(1, 0), 0.0, 0.0);
    CHECK(zero.rel_res == 0.0);

    const std::vector<cplx> z = {2.0};
    const std::vector<Dist> arc2 = repeat(arcsin(), 2);
    const auto r = theorem1_residual(WeightScheme({1, 1}), arc2, uniform(-1, 1), z);
    const auto j = r.to_json();
    CHECK(j["identity"] == "theorem1");
    REQUIRE(j["points"].size() == 1);
    for (const char* key : {"z_re", "z_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_res", "rel_res"})
        CHECK(j["points"][0].contains(key));
    CHECK(j["points"][0]["lhs_re"].get<double>() == Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("theorem1 examples") {
    const std::vector<cplx> two = {2.0};
    CHECK(theorem1_residual(WeightScheme({1, 1}), repeat(arcsin(), 2), uniform(-1, 1), two).max_rel_residual() <
          1e-8);
    const std::vector<cplx> off = {cplx(1.5, 0.5)};
    CHECK(theorem1_residual(WeightScheme({1, 1, 1}), repeat(arcsin(), 3), semicircle(), off).max_rel_residual() <
          1e-8);
    const std::vector<cplx> one = {1.0};
    const auto pm = theorem1_residual(WeightScheme({1, 1}), repeat(point_mass(0), 2), point_mass(0), one);
    CHECK(pm.points[0].abs_res == 0.0);
    CHECK_THROWS_AS(theorem1_residual(WeightScheme({1, 1}), repeat(arcsin(), 3), semicircle(), one),
                    InvalidArgument);
}

TEST_CASE("characterizations hold as transform identities") {
    const auto arc = arcsin(), sc = semicircle();
    SECTION("arcsin atoms, uniform weights: semicircle") {
        CHECK(theorem1_residual(WeightScheme({1, 1, 1}), repeat(arc, 3), sc, kPoints).max_rel_residual() < 1e-7);
    }
    SECTION("semicircle atoms, uniform weights: power semicircle 5/2") {
        CHECK(theorem1_residual(WeightScheme({1, 1, 1}), repeat(sc, 3), power_semicircle(2.5), kPoints)
                  .max_rel_residual() < 1e-7);
    }
    SECTION("two semicircle atoms and one arcsin atom: power semicircle 3/2") {
        const std::vector<Dist> marg = {sc, sc, arc};
        CHECK(theorem1_residual(WeightScheme({1, 1, 1}), marg, power_semicircle(1.5), kPoints).max_rel_residual() <
              1e-7);
    }
    SECTION("all-arcsin atoms do not give power semicircle 3/2") {
        CHECK(theorem1_residual(WeightScheme({1, 1, 1}), repeat(arc, 3), power_semicircle(1.5), kPoints)
                  .max_rel_residual() > 1e-2);
    }
    SECTION("weights (3,1,1), semicircle then two arcsin atoms: power semicircle 3/2") {
        const std::vector<Dist> marg = {sc, arc, arc};
        CHECK(theorem1_residual(WeightScheme({3, 1, 1}), marg, power_semicircle(1.5), kPoints).max_rel_residual() <
              1e-7);
    }
    SECTION("weights (1,1,2), arcsin atoms: semicircle") {
        CHECK(theorem1_residual(WeightScheme({1, 1, 2}), repeat(arc, 3), sc, kPoints).max_rel_residual() < 1e-7);
    }
    SECTION("Van Assche: two arcsin atoms give the uniform law") {
        CHECK(theorem1_residual(WeightScheme({1, 1}), repeat(arc, 2), uniform(-1, 1), kPoints).max_rel_residual() <
              1e-7);
    }
}

TEST_CASE("remark1 examples") {
    const std::vector<cplx> two = {2.0};
    CHECK(remark1_residual(1, 1, arcsin(), arcsin(), uniform(-1, 1), two).max_rel_residual() < 1e-8);

    const std::vector<cplx> one = {1.0};
    const auto pm = remark1_residual(1, 1, point_mass(0), point_mass(0), point_mass(0), one);
    CHECK(pm.points[0].lhs == cplx(-1.0, 0.0));
    CHECK(pm.points[0].rhs == cplx(-1.0, 0.0));

    const std::vector<Dist> marg = {arcsin(), arcsin()};
    const auto s = sample_rwa(WeightScheme({1, 2}), marg, 400000, {41, 0});
    const std::vector<cplx> three = {3.0};
    const auto r = remark1_residual(1, 2, arcsin(), arcsin(), EmpiricalLaw(s), three);
    CHECK(r.max_rel_residual() < 1e-2);
    CHECK(r.within_standard_errors(4.0));

    CHECK_THROWS_AS(remark1_residual(0, 1, arcsin(), arcsin(), uniform(-1, 1), two), InvalidArgument);
}

TEST_CASE("remark1 reduces to the two-atom identity") {
    for (const auto& z : kPoints) {
        const std::vector<cplx> pt = {z};
        const auto a = remark1_residual(1, 1, arcsin(), arcsin(), uniform(-1, 1), pt).points[0];
        const auto b = eq31_residual(arcsin(), uniform(-1, 1), pt).points[0];
        CHECK(std::abs(a.abs_res - b.abs_res) <= 1e-12);
        CHECK(std::abs(a.rel_res - b.rel_res) <= 1e-12);
        // Same identity with both sides negated.
        CHECK(std::abs(a.lhs + b.lhs) <= 1e-12);
        CHECK(std::abs(a.rhs + b.rhs) <= 1e-12);
    }
}

TEST_CASE("empirical transforms carry standard errors") {
    const std::vector<Dist> marg = repeat(arcsin(), 3);
    const auto s = sample_rwa(WeightScheme({1, 1, 1}), marg, 200000, {42, 0});
    const EmpiricalLaw law(s);
    const cplx z(0.0, 1.5);
    const auto v = transform_deriv(law, z, 3);
    CHECK(v.std_error > 0.0);
    CHECK(std::abs(v.value - transform_deriv(semicircle(), z, 3)) < 4 * v.std_error);
    const auto r = theorem1_residual(WeightScheme({1, 1, 1}), marg, TransformSource(law), kPoints);
    CHECK(r.within_standard_errors(4.0));
    CHECK(r.points[0].std_error > 0.0);
}
