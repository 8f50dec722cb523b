#include <catch_amalgamated.hpp>

#include <cmath>

#include "gpfp/dist.hpp"
#include "gpfp/moments.hpp"
#include "gpfp/sampling.hpp"
#include "oracles.hpp"

using gpfp::GpfpSpec;
using gpfp::Rational;

namespace {

// deterministic random specs with a > 0 for property sweeps
GpfpSpec random_spec(oracles::RationalGen& gen) {
    GpfpSpec s;
    s.a = 0.2 + 0.05 * static_cast<double>(gen.step() % 10);
    s.b = s.a + 1.0 + 0.3 * static_cast<double>(gen.step() % 8);
    const int terms = 1 + static_cast<int>(gen.step() % 3);
    double l = -1.5 + 0.25 * static_cast<double>(gen.step() % 6);
    for (int k = 0; k < terms; ++k) {
        s.alpha.push_back(0.1 + 0.1 * static_cast<double>(gen.step() % 10));
        s.l.push_back(l);
        l += 0.5 + 0.25 * static_cast<double>(gen.step() % 4);
    }
    return gpfp::normalize(std::move(s));
}

}  // namespace

TEST_CASE("density values at hand-computed points") {
    const GpfpSpec fp2 = gpfp::make_fp(2.0);
    const double r2 = std::sqrt(2.0);
    const double a = (r2 - 1) * (r2 - 1), b = (r2 + 1) * (r2 + 1);
    CHECK(gpfp::gpfp_pdf(fp2, 1.0) ==
          Catch::Approx(std::sqrt((b - 1) * (1 - a)) / (2 * M_PI)).epsilon(1e-14));
    CHECK(gpfp::gpfp_pdf(fp2, a) == 0.0);
    CHECK(gpfp::gpfp_pdf(fp2, b) == 0.0);
    CHECK(gpfp::gpfp_pdf(fp2, -3.0) == 0.0);

    GpfpSpec eta;
    eta.a = a;
    eta.b = b;
    eta.alpha = {0.7 / (2 * M_PI), 0.15 / (2 * M_PI)};
    eta.l = {0.0, 2.0};
    eta.norm = 1.0;
    const double want = std::sqrt((b - 2) * (2 - a)) / (2 * M_PI * 2) * (0.7 + 0.15 / 4.0);
    CHECK(gpfp::gpfp_pdf(eta, 2.0) == Catch::Approx(want).epsilon(1e-14));
}

TEST_CASE("negative arguments with fractional exponents are refused") {
    GpfpSpec s;
    s.a = 0.5;
    s.b = 2.0;
    s.alpha = {1.0};
    s.l = {0.5};
    s.norm = 1.0;
    CHECK_THROWS_AS(gpfp::gpfp_pdf(s, -1.0), std::domain_error);
    s.l = {1.0};
    CHECK(gpfp::gpfp_pdf(s, -1.0) == 0.0);
}

TEST_CASE("normalization") {
    CHECK(gpfp::gpfp_mass(gpfp::make_fp(2.0)) == Catch::Approx(1.0).margin(1e-10));

    GpfpSpec sigma;
    sigma.a = 1.0 / std::pow(std::sqrt(2.0) + 1, 2);
    sigma.b = 1.0 / std::pow(std::sqrt(2.0) - 1, 2);
    sigma.alpha = {0.7 / (2 * M_PI), 0.15 / (2 * M_PI)};
    sigma.l = {1.0, 2.0};
    sigma.norm = 1.0;
    CHECK(gpfp::gpfp_mass(sigma) == Catch::Approx(1.0).margin(1e-10));

    // scaling the coefficients by 7 scales the normalizer by 1/7
    GpfpSpec raw = sigma;
    for (auto& ak : raw.alpha) ak *= 7.0;
    const GpfpSpec n1 = gpfp::normalize(sigma);
    const GpfpSpec n7 = gpfp::normalize(raw);
    CHECK(n7.norm == Catch::Approx(n1.norm / 7.0).epsilon(1e-12));
}

TEST_CASE("constructors produce unit mass") {
    CHECK(gpfp::gpfp_mass(gpfp::make_fgig(1.0, 4.0, 0.0)) == Catch::Approx(1.0).margin(1e-10));
    CHECK(gpfp::gpfp_mass(gpfp::make_shifted_semicircle(3.0)) ==
          Catch::Approx(1.0).margin(1e-10));
    CHECK(gpfp::gpfp_mass(gpfp::make_truncated_stable(100, 4.0)) ==
          Catch::Approx(1.0).margin(1e-10));
    CHECK(gpfp::gpfp_mass(gpfp::make_beta_related(50, 0.0)) == Catch::Approx(1.0).margin(1e-10));
    CHECK(gpfp::gpfp_mass(gpfp::make_beta_related(50, -0.7)) ==
          Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("constructor domains") {
    CHECK_THROWS_AS(gpfp::make_fp(1.0), std::domain_error);
    CHECK_THROWS_AS(gpfp::make_fp(0.5), std::domain_error);
    CHECK_THROWS_AS(gpfp::make_shifted_semicircle(2.0), std::domain_error);
    CHECK_THROWS_AS(gpfp::make_beta_related(50, 0.5), std::domain_error);
}

TEST_CASE("make_fp fields") {
    const GpfpSpec s = gpfp::make_fp(2.0);
    const double r2 = std::sqrt(2.0);
    CHECK(s.a == Catch::Approx((r2 - 1) * (r2 - 1)).epsilon(1e-15));
    CHECK(s.b == Catch::Approx((r2 + 1) * (r2 + 1)).epsilon(1e-15));
    REQUIRE(s.alpha.size() == 1);
    CHECK(s.alpha[0] == Catch::Approx(1.0 / (2 * M_PI)).epsilon(1e-15));
    CHECK(s.l[0] == 0.0);
    CHECK(s.norm == 1.0);
    REQUIRE(s.exact.has_value());
    CHECK(s.exact->p == Rational(2));
}

TEST_CASE("shifted semicircle matches the plain semicircle density") {
    const GpfpSpec s = gpfp::make_shifted_semicircle(3.0);
    CHECK(s.a == 1.0);
    CHECK(s.b == 5.0);
    for (double x : {1.3, 2.0, 3.0, 4.5}) {
        const double want = std::sqrt(4.0 - (x - 3.0) * (x - 3.0)) / (2 * M_PI);
        CHECK(gpfp::gpfp_pdf(s, x) == Catch::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("fgig solves its defining system exactly") {
    // rational data keeps the solve in Q[sqrt(ab)], residuals identically zero
    for (auto [a, b, lam] : {std::tuple{1.0, 4.0, 0.0}, std::tuple{1.0, 2.0, 0.0},
                             std::tuple{0.5, 3.5, 0.25}, std::tuple{2.0, 5.0, -0.125}}) {
        const auto sol =
            gpfp::fgig_solve(gpfp::exact_rational(a), gpfp::exact_rational(b),
                             gpfp::exact_rational(lam));
        CHECK(sol.residuals_zero);
    }
    const GpfpSpec g = gpfp::make_fgig(1.0, 4.0, 0.0);
    CHECK(g.alpha[0] * 2 * M_PI == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(g.alpha[1] * 2 * M_PI * 2.0 == Catch::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("fgig rejects parameter sets without positive solutions") {
    CHECK_THROWS_WITH(gpfp::make_fgig(1.0, 4.0, 40.0),
                      Catch::Matchers::ContainsSubstring("not in fGIG family"));
}

TEST_CASE("inverse of the two-term measure lands on the free Poisson interval") {
    GpfpSpec sigma;
    const double r2 = std::sqrt(2.0);
    sigma.a = (r2 - 1) * (r2 - 1);
    sigma.b = (r2 + 1) * (r2 + 1);
    sigma.alpha = {0.7 / (2 * M_PI), 0.15 / (2 * M_PI)};
    sigma.l = {1.0, 2.0};
    sigma.norm = 1.0;
    const GpfpSpec inv = gpfp::gpfp_inverse(sigma);
    CHECK(inv.a == Catch::Approx(sigma.a).epsilon(1e-14));  // ab = 1 interval
    CHECK(inv.b == Catch::Approx(sigma.b).epsilon(1e-14));
    REQUIRE(inv.l.size() == 2);
    CHECK(inv.l[0] == Catch::Approx(-1.0).margin(1e-14));
    CHECK(inv.l[1] == Catch::Approx(0.0).margin(1e-14));
    CHECK(inv.alpha[0] == Catch::Approx(0.15 / (2 * M_PI)).epsilon(1e-12));
    CHECK(inv.alpha[1] == Catch::Approx(0.7 / (2 * M_PI)).epsilon(1e-12));
}

TEST_CASE("inverse is an involution and a push-forward") {
    oracles::RationalGen gen(0x77);
    for (int trial = 0; trial < 20; ++trial) {
        const GpfpSpec s = random_spec(gen);
        const GpfpSpec inv = gpfp::gpfp_inverse(s);
        // exponents stay strictly increasing
        for (std::size_t k = 0; k + 1 < inv.l.size(); ++k) CHECK(inv.l[k] < inv.l[k + 1]);
        const GpfpSpec back = gpfp::gpfp_inverse(inv);
        CHECK(back.a == Catch::Approx(s.a).epsilon(1e-12));
        CHECK(back.b == Catch::Approx(s.b).epsilon(1e-12));
        CHECK(back.norm == Catch::Approx(s.norm).epsilon(1e-12));
        for (std::size_t k = 0; k < s.terms(); ++k) {
            CHECK(back.alpha[k] == Catch::Approx(s.alpha[k]).epsilon(1e-12));
            CHECK(back.l[k] == Catch::Approx(s.l[k]).margin(1e-12));
        }
        // pdf_inv(x) = pdf(1/x) / x^2
        for (int j = 1; j <= 8; ++j) {
            const double x = inv.a + (inv.b - inv.a) * j / 9.0;
            const double want = gpfp::gpfp_pdf(s, 1.0 / x) / (x * x);
            CHECK(gpfp::gpfp_pdf(inv, x) == Catch::Approx(want).margin(1e-10));
        }
    }
    GpfpSpec zero_a;
    zero_a.a = 0.0;
    zero_a.b = 4.0;
    zero_a.alpha = {1.0 / (2 * M_PI)};
    zero_a.l = {0.0};
    zero_a.norm = 1.0;
    CHECK_THROWS_AS(gpfp::gpfp_inverse(zero_a), std::domain_error);
}

TEST_CASE("power density through transformed parameters") {
    const GpfpSpec fp2 = gpfp::make_fp(2.0);
    // r = 1 is the density itself
    for (double x : {0.5, 1.0, 2.0, 4.0})
        CHECK(gpfp::power_pdf(fp2, 1.0, x) == Catch::Approx(gpfp::gpfp_pdf(fp2, x)).margin(1e-12));
    // r = -1 matches the inverse spec
    const GpfpSpec inv = gpfp::gpfp_inverse(fp2);
    for (double x : {0.2, 0.5, 1.0, 3.0})
        CHECK(gpfp::power_pdf(fp2, -1.0, x) ==
              Catch::Approx(gpfp::gpfp_pdf(inv, x)).margin(1e-10));
    // change-of-variables oracle f(x^{1/r}) |1/r| x^{1/r - 1}
    oracles::RationalGen gen(0x99);
    for (int trial = 0; trial < 20; ++trial) {
        const GpfpSpec s = random_spec(gen);
        for (double r : {1.0, 2.0, 3.5, -1.0, -2.0}) {
            const double A = r > 0 ? std::pow(s.a, r) : std::pow(s.b, r);
            const double B = r > 0 ? std::pow(s.b, r) : std::pow(s.a, r);
            for (int j = 1; j <= 5; ++j) {
                const double x = A + (B - A) * j / 6.0;
                const double y = std::pow(x, 1.0 / r);
                const double want =
                    gpfp::gpfp_pdf(s, y) * std::fabs(1.0 / r) * std::pow(x, 1.0 / r - 1.0);
                CHECK(gpfp::power_pdf(s, r, x) == Catch::Approx(want).margin(1e-10));
            }
        }
    }
    // the hand value: fp(2), r = 2 at x = 4
    const double want = 0.5 * std::pow(4.0, -0.5) * gpfp::gpfp_pdf(fp2, 2.0);
    CHECK(gpfp::power_pdf(fp2, 2.0, 4.0) == Catch::Approx(want).epsilon(1e-12));
    CHECK_THROWS_AS(gpfp::power_pdf(fp2, 0.5, 1.0), std::domain_error);
}

TEST_CASE("probability side conditions") {
    using gpfp::ProbKind;
    const Rational p2(2), a1(7, 10), a2(3, 20);
    CHECK(gpfp::check_prob_condition(ProbKind::Sigma, p2, a1, a2));
    CHECK(gpfp::check_prob_condition(ProbKind::Eta, p2, a1, a2));
    CHECK_FALSE(gpfp::check_prob_condition(ProbKind::Sigma, p2, Rational(1), Rational(1)));
    CHECK(gpfp::check_prob_condition(ProbKind::Sigma, 2.0, 0.7, 0.15));
    CHECK(gpfp::check_prob_condition(ProbKind::Eta, 2.0, 0.7, 0.15));
    CHECK_FALSE(gpfp::check_prob_condition(ProbKind::Sigma, 2.0, 1.0, 1.0));
    CHECK_THROWS_AS(gpfp::check_prob_condition(ProbKind::Sigma, 1.0, 0.5, 0.5),
                    std::domain_error);
}

TEST_CASE("sampling is deterministic and respects the seed") {
    const GpfpSpec fp2 = gpfp::make_fp(2.0);
    CHECK(gpfp::sample(fp2, 42, 0).empty());
    const auto s1 = gpfp::sample(fp2, 42, 1000);
    const auto s2 = gpfp::sample(fp2, 42, 1000);
    const auto s3 = gpfp::sample(fp2, 43, 1000);
    CHECK(s1 == s2);
    CHECK(s1 != s3);
    for (double x : s1) CHECK((x > fp2.a && x < fp2.b));
    GpfpSpec bad = fp2;
    bad.norm = 2.0;
    CHECK_THROWS_AS(gpfp::sample(bad, 1, 10), std::domain_error);
}

TEST_CASE("sample mean approaches the first moment") {
    const GpfpSpec fp2 = gpfp::make_fp(2.0);
    const auto xs = gpfp::sample(fp2, 7, 100000);
    double sum = 0.0, sq = 0.0;
    for (double x : xs) {
        sum += x;
        sq += x * x;
    }
    const double mean = sum / xs.size();
    const double var = sq / xs.size() - mean * mean;
    const double se = std::sqrt(var / xs.size());
    CHECK(std::fabs(mean - 2.0) < 4.0 * se);
}
