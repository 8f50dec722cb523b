#include <catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "gpfp/nc_lattice.hpp"
#include "gpfp/rational.hpp"
#include "oracles.hpp"

using gpfp::NCPartition;
using gpfp::Rational;

namespace {

NCPartition make(int n, std::vector<std::vector<int>> blocks) {
    NCPartition p;
    p.n = n;
    p.blocks = std::move(blocks);
    return p;
}

const std::int64_t kCatalan[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430};

}  // namespace

TEST_CASE("enumeration counts match Catalan numbers and the filter oracle") {
    for (int n = 1; n <= 8; ++n) {
        auto parts = gpfp::enumerate_nc(n);
        CHECK(static_cast<std::int64_t>(parts->size()) == kCatalan[n]);
        for (const auto& p : *parts) {
            CHECK(gpfp::is_noncrossing(p));
            for (std::size_t b = 0; b + 1 < p.blocks.size(); ++b)
                CHECK(p.blocks[b].front() < p.blocks[b + 1].front());
        }
    }
    // full set equality against the brute-force filter
    for (int n = 1; n <= 6; ++n) {
        std::set<std::string> got, want;
        for (const auto& p : *gpfp::enumerate_nc(n)) got.insert(gpfp::nc_key(p));
        for (const auto& p : oracles::noncrossing_by_filter(n)) want.insert(gpfp::nc_key(p));
        CHECK(got == want);
    }
}

TEST_CASE("enumeration edge cases") {
    auto one = gpfp::enumerate_nc(1);
    REQUIRE(one->size() == 1);
    CHECK((*one)[0].blocks == std::vector<std::vector<int>>{{1}});
    CHECK_THROWS_AS(gpfp::enumerate_nc(0), std::domain_error);
    CHECK_THROWS_AS(gpfp::enumerate_nc(gpfp::kNcEnumerationCap + 1), std::domain_error);
}

TEST_CASE("refinement order") {
    const auto bot = gpfp::nc_bottom(4);
    for (const auto& sigma : *gpfp::enumerate_nc(4)) {
        CHECK(gpfp::nc_leq(bot, sigma));
        CHECK(gpfp::nc_leq(sigma, sigma));
    }
    CHECK_FALSE(gpfp::nc_leq(make(4, {{1, 3}, {2}, {4}}), make(4, {{1, 2}, {3, 4}})));
    CHECK(gpfp::nc_leq(make(4, {{1}, {2}, {3, 4}}), make(4, {{1, 2}, {3, 4}})));
    CHECK_THROWS_AS(gpfp::nc_leq(gpfp::nc_bottom(3), gpfp::nc_bottom(4)), std::domain_error);
}

TEST_CASE("Moebius values to the top") {
    CHECK(gpfp::mobius_to_top(gpfp::nc_top(5)) == 1);
    CHECK(gpfp::mobius_to_top(gpfp::nc_bottom(2)) == -1);
    CHECK(gpfp::mobius_to_top(gpfp::nc_bottom(4)) == -5);
    // every value against the direct interval recursion
    for (int n = 1; n <= 5; ++n) {
        const auto top = gpfp::nc_top(n);
        for (const auto& pi : *gpfp::enumerate_nc(n))
            CHECK(gpfp::mobius_to_top(pi) == oracles::mobius_interval_recursive(pi, top));
    }
}

TEST_CASE("Moebius column sums vanish") {
    for (int n = 2; n <= 8; ++n) {
        std::int64_t acc = 0;
        for (const auto& pi : *gpfp::enumerate_nc(n)) acc += gpfp::mobius_to_top(pi);
        CHECK(acc == 0);
    }
}

TEST_CASE("free Poisson moments map to constant cumulants") {
    const std::vector<Rational> m{Rational(2), Rational(6), Rational(22), Rational(90),
                                  Rational(394)};
    const auto kappa = gpfp::moments_to_cumulants(m);
    REQUIRE(kappa.size() == 5);
    for (const auto& k : kappa) CHECK(k == Rational(2));
    const auto back = gpfp::cumulants_to_moments(kappa);
    CHECK(back == m);
}

TEST_CASE("semicircle moments map to a single pair cumulant") {
    const std::vector<Rational> m{Rational(0), Rational(1), Rational(0), Rational(2),
                                  Rational(0)};
    const auto kappa = gpfp::moments_to_cumulants(m);
    const std::vector<Rational> want{Rational(0), Rational(1), Rational(0), Rational(0),
                                     Rational(0)};
    CHECK(kappa == want);
}

TEST_CASE("first order and error paths") {
    const std::vector<Rational> m1{Rational(7, 3)};
    CHECK(gpfp::moments_to_cumulants(m1)[0] == Rational(7, 3));
    CHECK(gpfp::cumulants_to_moments(m1)[0] == Rational(7, 3));
    const std::vector<Rational> empty;
    CHECK_THROWS_AS(gpfp::moments_to_cumulants(empty), std::domain_error);
    CHECK_THROWS_AS(gpfp::cumulants_to_moments(empty), std::domain_error);
}

TEST_CASE("pair cumulants reach only noncrossing pairings") {
    // kappa = (0, 1, 0, 0): m4 counts the two noncrossing pair partitions
    const std::vector<Rational> kappa{Rational(0), Rational(1), Rational(0), Rational(0)};
    const auto m = gpfp::cumulants_to_moments(kappa);
    CHECK(m[3] == Rational(2));
}

TEST_CASE("round trip is the identity on random rational vectors") {
    oracles::RationalGen gen(0x5eed1);
    for (int trial = 0; trial < 100; ++trial) {
        const int len = 1 + static_cast<int>(gen.step() % 6);
        std::vector<Rational> m;
        for (int i = 0; i < len; ++i) m.push_back(gen.next());
        const auto kappa = gpfp::moments_to_cumulants(m);
        CHECK(gpfp::cumulants_to_moments(kappa) == m);
    }
}

TEST_CASE("closed-form cumulant polynomials up to order five") {
    oracles::RationalGen gen(0xabcde);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Rational> m;
        for (int i = 0; i < 5; ++i) m.push_back(gen.next());
        const auto k = gpfp::moments_to_cumulants(m);
        const Rational m1 = m[0], m2 = m[1], m3 = m[2], m4 = m[3], m5 = m[4];
        CHECK(k[0] == m1);
        CHECK(k[1] == m2 - m1 * m1);
        CHECK(k[2] == m3 - 3 * m1 * m2 + 2 * m1 * m1 * m1);
        CHECK(k[3] == m4 - 4 * m1 * m3 - 2 * m2 * m2 + 10 * m1 * m1 * m2 -
                          5 * m1 * m1 * m1 * m1);
        CHECK(k[4] == m5 - 5 * m1 * m4 - 5 * m2 * m3 + 15 * m1 * m1 * m3 +
                          15 * m1 * m2 * m2 - 35 * m1 * m1 * m1 * m2 +
                          14 * m1 * m1 * m1 * m1 * m1);
    }
}

TEST_CASE("double scalars run through the same transforms") {
    const std::vector<double> m{2.0, 6.0, 22.0, 90.0, 394.0};
    const auto kappa = gpfp::moments_to_cumulants(m);
    for (double k : kappa) CHECK(k == Catch::Approx(2.0).margin(1e-12));
}
