// Acceptance suite: each criterion prints one PASS/FAIL line and the exit
// code counts failures. Tolerances and runtime budgets are pinned in code.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gpfp/gpfp.hpp"
#include "oracles.hpp"

using gpfp::Complex;
using gpfp::GpfpSpec;
using gpfp::PowerSpec;
using gpfp::Rational;

namespace {

int g_failures = 0;

void report(int id, const std::string& what, bool pass, double seconds, double budget,
            const std::string& detail = "") {
    const bool ok = pass && seconds < budget;
    std::printf("[%s] criterion %d: %s (%.2f s / budget %.0f s)%s%s\n", ok ? "PASS" : "FAIL",
                id, what.c_str(), seconds, budget, detail.empty() ? "" : " -- ",
                detail.c_str());
    if (!ok) ++g_failures;
}

template <class F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- criterion 1: cumulant engine ------------------------------------------

bool criterion1(std::string& detail) {
    oracles::RationalGen gen(0xace1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Rational> m;
        for (int i = 0; i < 5; ++i) m.push_back(gen.next());
        const auto k = gpfp::moments_to_cumulants(m);
        const Rational m1 = m[0], m2 = m[1], m3 = m[2], m4 = m[3], m5 = m[4];
        if (k[0] != m1) return false;
        if (k[1] != m2 - m1 * m1) return false;
        if (k[2] != m3 - 3 * m1 * m2 + 2 * m1 * m1 * m1) return false;
        if (k[3] !=
            m4 - 4 * m1 * m3 - 2 * m2 * m2 + 10 * m1 * m1 * m2 - 5 * m1 * m1 * m1 * m1)
            return false;
        if (k[4] != m5 - 5 * m1 * m4 - 5 * m2 * m3 + 15 * m1 * m1 * m3 + 15 * m1 * m2 * m2 -
                        35 * m1 * m1 * m1 * m2 + 14 * m1 * m1 * m1 * m1 * m1)
            return false;
    }
    const std::vector<Rational> fp2{Rational(2), Rational(6), Rational(22), Rational(90),
                                    Rational(394)};
    for (const auto& k : gpfp::moments_to_cumulants(fp2))
        if (k != Rational(2)) return false;
    detail = "50 symbolic vectors + fp(2) map exact";
    return true;
}

// ---- criterion 2: reflection lemma ------------------------------------------

bool criterion2(std::string& detail) {
    double worst = 0.0;
    for (double p : {2.0, 3.0, 5.5})
        for (Complex s : {Complex(-0.5, 0.0), Complex(1.0, 0.0), Complex(2.3, 0.0),
                          Complex(0.7, 0.3)})
            worst = std::max(worst, gpfp::reflection_residual(p, s));
    std::ostringstream os;
    os << "max residual " << worst;
    detail = os.str();
    return worst <= 1e-8;
}

// ---- criterion 3: section-5 closed forms -------------------------------------

bool criterion3(std::string& detail) {
    // closed forms vs the generic exact pipeline at 20 rational alpha2
    oracles::RationalGen gen(0xbee5);
    for (int trial = 0; trial < 20; ++trial) {
        const Rational a2 = Rational(1 + static_cast<long>(gen.step() % 97), 200);
        const Rational a1 = 1 - 2 * a2;
        auto pipeline = [&](std::vector<Rational> w, std::vector<long> e) {
            gpfp::FpAlignedForm f{Rational(2), std::move(w), std::move(e)};
            std::vector<Rational> m;
            for (long n = 1; n <= 4; ++n) m.push_back(gpfp::fp_aligned_moment(f, n));
            auto kap = gpfp::moments_to_cumulants(m);
            return std::vector<Rational>{kap[1], kap[2], kap[3]};
        };
        if (gpfp::cumulants_sigma_inverse(a2) != pipeline({a2, a1}, {-1, 0})) return false;
        if (gpfp::cumulants_eta(a2) != pipeline({a1, a2}, {0, 2})) return false;
    }
    // figure-2 sign structure on a 50-point grid of (0.01, 0.49)
    for (int i = 0; i < 50; ++i) {
        const Rational a2 = Rational(1, 100) + Rational(48 * i, 100 * 49);
        if (!(gpfp::sigma_inverse_hankel_det(a2) < 0)) return false;
    }
    // figure-3 root
    const auto t = gpfp::eta_threshold();
    if (std::fabs(t.root - 0.157781) > 1e-4) return false;
    // verdicts
    if (gpfp::fid_necessary(gpfp::cumulants_eta(Rational(3, 20)), 2).verdict !=
        gpfp::FidVerdict::FailWithWitness)
        return false;
    if (gpfp::fid_necessary(gpfp::cumulants_sigma_inverse(Rational(1, 5)), 2).verdict !=
        gpfp::FidVerdict::FailWithWitness)
        return false;
    const std::vector<Rational> fp_k(5, Rational(2));
    if (gpfp::fid_necessary(fp_k, 3).verdict != gpfp::FidVerdict::Inconclusive) return false;
    const std::vector<Rational> semi{Rational(1), Rational(0), Rational(0)};
    if (gpfp::fid_necessary(semi, 2).verdict != gpfp::FidVerdict::Inconclusive) return false;
    std::ostringstream os;
    os << "threshold root " << t.root;
    detail = os.str();
    return true;
}

// ---- criterion 4: winding verification ----------------------------------------

bool criterion4(std::string& detail) {
    struct Case {
        std::string name;
        GpfpSpec spec;
        double r;
    };
    std::vector<Case> cases;
    cases.push_back({"fp(2)^1", gpfp::make_fp(2.0), 1.0});
    const GpfpSpec fgig = gpfp::make_fgig(1.0, 4.0, 0.0);
    cases.push_back({"fgig^1", fgig, 1.0});
    cases.push_back({"fgig^2", fgig, 2.0});
    cases.push_back({"fgig^-1", fgig, -1.0});
    const GpfpSpec shifted = gpfp::make_shifted_semicircle(3.0);
    cases.push_back({"(S+3)^-1", shifted, -1.0});
    cases.push_back({"(S+3)^-2", shifted, -2.0});
    const GpfpSpec s100 = gpfp::make_truncated_stable(100, 4.0);
    cases.push_back({"S_{100,4}^1", s100, 1.0});
    cases.push_back({"S_{100,4}^2", s100, 2.0});

    std::ostringstream os;
    for (const auto& c : cases) {
        const auto probes = gpfp::log_polar_probes(1e-2, 10, 10);
        const gpfp::UIReport rep =
            gpfp::ui_verify(PowerSpec::from(c.spec, c.r), 1e-2,
                            std::span<const Complex>(probes));
        if (rep.probes.size() != 100) {
            detail = c.name + ": probe grid size mismatch";
            return false;
        }
        for (const auto& p : rep.probes) {
            if (p.excluded || p.winding != 1) {
                detail = c.name + ": winding violation or excluded probe";
                return false;
            }
        }
        if (rep.a2.residual > 1e-12) {
            detail = c.name + ": (A2) residual above 1e-12";
            return false;
        }
        if (rep.a4.residual > 1e-10) {
            detail = c.name + ": (A4) residual above 1e-10";
            return false;
        }
        os << c.name << " ";
    }
    detail = "all windings 1: " + os.str();
    return true;
}

// ---- criterion 5: structural identities ----------------------------------------

bool criterion5(std::string& detail) {
    // involution
    oracles::RationalGen gen(0x5150);
    for (int trial = 0; trial < 10; ++trial) {
        GpfpSpec s;
        s.a = 0.3 + 0.04 * static_cast<double>(gen.step() % 10);
        s.b = s.a + 1.0 + 0.25 * static_cast<double>(gen.step() % 8);
        s.alpha = {0.4, 0.2};
        s.l = {-0.5 + 0.25 * static_cast<double>(gen.step() % 4),
               1.0 + 0.25 * static_cast<double>(gen.step() % 4)};
        s = gpfp::normalize(std::move(s));
        const GpfpSpec back = gpfp::gpfp_inverse(gpfp::gpfp_inverse(s));
        if (std::fabs(back.a - s.a) > 1e-12 * s.a) return false;
        if (std::fabs(back.b - s.b) > 1e-12 * s.b) return false;
        if (std::fabs(back.norm - s.norm) > 1e-12 * s.norm) return false;
        for (std::size_t k = 0; k < s.terms(); ++k) {
            if (std::fabs(back.l[k] - s.l[k]) > 1e-12) return false;
            if (std::fabs(back.alpha[k] - s.alpha[k]) > 1e-12 * s.alpha[k]) return false;
        }
        // change-of-variables oracle
        for (double r : {1.0, 2.0, 3.5, -1.0, -2.0}) {
            const double A = r > 0 ? std::pow(s.a, r) : std::pow(s.b, r);
            const double B = r > 0 ? std::pow(s.b, r) : std::pow(s.a, r);
            for (int j = 1; j <= 6; ++j) {
                const double x = A + (B - A) * j / 7.0;
                const double want = gpfp::gpfp_pdf(s, std::pow(x, 1.0 / r)) *
                                    std::fabs(1.0 / r) * std::pow(x, 1.0 / r - 1.0);
                if (std::fabs(gpfp::power_pdf(s, r, x) - want) >
                    1e-10 * std::max(1.0, want))
                    return false;
            }
        }
    }
    // S_{n,4} inverse density converges pointwise to fp(1)
    GpfpSpec fp1;
    fp1.a = 0.0;
    fp1.b = 4.0;
    fp1.alpha = {1.0 / (2 * M_PI)};
    fp1.l = {0.0};
    fp1.norm = 1.0;
    double prev_gap = 1e300;
    for (long n : {100L, 1000L, 10000L}) {
        const GpfpSpec inv = gpfp::gpfp_inverse(gpfp::make_truncated_stable(n, 4.0));
        double gap = 0.0;
        for (int j = 0; j < 50; ++j) {
            const double x = 0.1 + (3.9 - 0.1) * j / 49.0;
            gap = std::max(gap, std::fabs(gpfp::gpfp_pdf(inv, x) - gpfp::gpfp_pdf(fp1, x)));
        }
        if (!(gap < prev_gap)) return false;
        prev_gap = gap;
    }
    if (!(prev_gap < 1e-2)) return false;
    // normalizer limits with strictly decreasing error
    double prev_c = 1e300, prev_a = 1e300;
    for (long n : {100L, 1000L, 10000L}) {
        const double errc = std::fabs(gpfp::constant_c(n, 4.0) * 4.0 / 4.0 - 1.0);
        const double erra = std::fabs(gpfp::constant_alpha(n, 0.0) - 1.0);
        if (!(errc < prev_c) || !(erra < prev_a)) return false;
        prev_c = errc;
        prev_a = erra;
    }
    std::ostringstream os;
    os << "final density gap " << prev_gap << ", c-limit err " << prev_c << ", alpha-limit err "
       << prev_a;
    detail = os.str();
    return true;
}

// ---- criterion 6: Monte Carlo smoke ---------------------------------------------

bool criterion6(std::string& detail) {
    const GpfpSpec fp2 = gpfp::make_fp(2.0);
    const auto xs = gpfp::sample(fp2, 20260810, 1000000);
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (double x : xs) {
        s1 += x;
        s2 += x * x;
        s4 += x * x * x * x;
    }
    const double n = static_cast<double>(xs.size());
    const double m1 = s1 / n, m2 = s2 / n, m4 = s4 / n;
    const double se1 = std::sqrt((m2 - m1 * m1) / n);
    const double se2 = std::sqrt((m4 - m2 * m2) / n);
    std::ostringstream os;
    os << "m1 " << m1 << " (se " << se1 << "), m2 " << m2 << " (se " << se2 << ")";
    detail = os.str();
    return std::fabs(m1 - 2.0) < 4.0 * se1 && std::fabs(m2 - 6.0) < 4.0 * se2;
}

}  // namespace

int main() {
    std::string detail;
    double t;

    detail.clear();
    {
        bool ok = false;
        t = timed([&] { ok = criterion1(detail); });
        report(1, "cumulant engine reproduces the closed-form polynomials", ok, t, 1.0,
               detail);
    }
    detail.clear();
    {
        bool ok = false;
        t = timed([&] { ok = criterion2(detail); });
        report(2, "reflection identity residuals below 1e-8", ok, t, 5.0, detail);
    }
    detail.clear();
    {
        bool ok = false;
        t = timed([&] { ok = criterion3(detail); });
        report(3, "two-term family closed forms, sign structure, threshold", ok, t, 10.0,
               detail);
    }
    detail.clear();
    {
        bool ok = false;
        t = timed([&] { ok = criterion4(detail); });
        report(4, "winding equals one across the verification set", ok, t, 60.0, detail);
    }
    detail.clear();
    {
        bool ok = false;
        t = timed([&] { ok = criterion5(detail); });
        report(5, "structural identities and truncation limits", ok, t, 120.0, detail);
    }
    detail.clear();
    {
        bool ok = false;
        t = timed([&] { ok = criterion6(detail); });
        report(6, "Monte Carlo moments within four standard errors", ok, t, 30.0, detail);
    }

    if (g_failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return g_failures;
}
