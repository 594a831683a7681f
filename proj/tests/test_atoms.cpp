#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "rwa/atoms.hpp"
#include "rwa/error.hpp"
#include "rwa/rng.hpp"

using namespace rwa;

namespace {
std::vector<int> ms(const WeightScheme& s) { return {s.multiplicities().begin(), s.multiplicities().end()}; }
std::vector<double> xs(const AtomConfig& c) { return {c.atoms().begin(), c.atoms().end()}; }
}  // namespace

TEST_CASE("scheme_from_indices") {
    const int k12[] = {1, 2};
    CHECK(ms(WeightScheme::from_indices(3, k12)) == std::vector<int>{1, 1, 1});
    const int k34[] = {3, 4};
    const auto s = WeightScheme::from_indices(5, k34);
    CHECK(ms(s) == std::vector<int>{3, 1, 1});
    CHECK(s.nstar() == 5);
    const int k1[] = {1};
    CHECK(ms(WeightScheme::from_indices(2, k1)) == std::vector<int>{1, 1});
    CHECK(ms(WeightScheme::from_indices(4, {})) == std::vector<int>{4});

    const int bad_order[] = {2, 2};
    CHECK_THROWS_AS(WeightScheme::from_indices(4, bad_order), InvalidArgument);
    const int out_of_range[] = {1, 3};
    CHECK_THROWS_AS(WeightScheme::from_indices(3, out_of_range), InvalidArgument);
    const int zero[] = {0};
    CHECK_THROWS_AS(WeightScheme::from_indices(3, zero), InvalidArgument);
    CHECK_THROWS_AS(WeightScheme(std::vector<int>{1, 0}), InvalidArgument);
    CHECK_THROWS_AS(WeightScheme(std::vector<int>{}), InvalidArgument);
}

TEST_CASE("cut indices round-trip through partial sums") {
    Rng rng({11, 0});
    for (int trial = 0; trial < 200; ++trial) {
        const int nstar = 2 + static_cast<int>(rng.uniform() * 20);
        std::vector<int> cuts;
        for (int k = 1; k < nstar; ++k)
            if (rng.uniform() < 0.4) cuts.push_back(k);
        const auto s = WeightScheme::from_indices(nstar, cuts);
        CHECK(s.cut_indices() == cuts);
        CHECK(s.nstar() == nstar);
    }
}

TEST_CASE("normalize merges ties") {
    const double a[] = {1, 1, 0};
    const auto c = normalize(a, WeightScheme({1, 1, 1}), 1e-12);
    CHECK(xs(c) == std::vector<double>{1, 0});
    CHECK(ms(c.scheme()) == std::vector<int>{2, 1});

    const double b[] = {3, 2, 1};
    const auto d = normalize(b, WeightScheme({1, 1, 1}));
    CHECK(xs(d) == std::vector<double>{3, 2, 1});
    CHECK(ms(d.scheme()) == std::vector<int>{1, 1, 1});

    const double p[] = {0, 0};
    const auto e = normalize(p, WeightScheme({1, 1}));
    CHECK(xs(e) == std::vector<double>{0});
    CHECK(ms(e.scheme()) == std::vector<int>{2});

    // Weighted mean for a cluster within tolerance.
    const double q[] = {1.0, 5.0, 1.0 + 1e-3};
    const auto f = normalize(q, WeightScheme({1, 2, 3}), 1e-2);
    REQUIRE(f.size() == 2);
    CHECK(f.atom(0) == Catch::Approx((1.0 + 3 * 1.001) / 4).epsilon(1e-15));
    CHECK(ms(f.scheme()) == std::vector<int>{4, 2});

    CHECK_THROWS_AS(normalize(q, WeightScheme({1, 1})), InvalidArgument);
}

TEST_CASE("normalize is idempotent, preserves nstar and separates atoms") {
    Rng rng({12, 0});
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 8);
        std::vector<double> x(n);
        std::vector<int> m(n);
        for (std::size_t j = 0; j < n; ++j) {
            x[j] = std::round(rng.uniform() * 6) * 0.05 + (rng.uniform() < 0.3 ? 1e-4 * rng.uniform() : 0.0);
            m[j] = 1 + static_cast<int>(rng.uniform() * 3);
        }
        const double tol = 1e-3;
        const WeightScheme s(m);
        const auto once = normalize(x, s, tol);
        const auto twice = normalize(once.atoms(), once.scheme(), tol);
        CHECK(xs(once) == xs(twice));
        CHECK(ms(once.scheme()) == ms(twice.scheme()));
        CHECK(once.nstar() == s.nstar());
        CHECK(once.min_gap() > tol);
    }
}

TEST_CASE("AtomConfig rejects ties and mismatches") {
    CHECK_THROWS_AS(AtomConfig({1.0, 1.0}, WeightScheme({1, 1})), InvalidArgument);
    CHECK_THROWS_AS(AtomConfig({1.0}, WeightScheme({1, 1})), InvalidArgument);
    CHECK_NOTHROW(AtomConfig({1.0, 1.0 + 1e-12}, WeightScheme({1, 1})));
}

TEST_CASE("atom syntax") {
    const auto p = parse_atoms("3:1,2:1, 1:1");
    CHECK(p.atoms == std::vector<double>{3, 2, 1});
    CHECK(ms(p.scheme) == std::vector<int>{1, 1, 1});

    const auto q = parse_atoms("-0.5:2,1e-1:3");
    CHECK(p.scheme.nstar() == 3);
    CHECK(q.atoms == std::vector<double>{-0.5, 0.1});
    CHECK(q.scheme.nstar() == 5);

    try {
        parse_atoms("1:1,2:x");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.token() == "2:x");
    }
    CHECK_THROWS_AS(parse_atoms("1:1,2"), ParseError);
    CHECK_THROWS_AS(parse_atoms("1:0"), ParseError);
    CHECK_THROWS_AS(parse_atoms(""), ParseError);

    CHECK(ms(parse_scheme("3,1,1")) == std::vector<int>{3, 1, 1});
    CHECK_THROWS_AS(parse_scheme("1,-1"), ParseError);

    CHECK(AtomConfig({3, 2}, WeightScheme({1, 2})).to_string() == "3:1,2:2");
}
