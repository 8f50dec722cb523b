#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "gpfp/dist.hpp"
#include "gpfp/errors.hpp"
#include "gpfp/nc_lattice.hpp"
#include "gpfp/quadrature.hpp"
#include "gpfp/rational.hpp"

namespace gpfp {

struct MomentValue {
    std::complex<double> order{};
    std::complex<double> value{};
    enum class Method { ExactClosedForm, Quadrature } method = Method::Quadrature;
    double err_bound = 0.0;
};

// int x^s pdf(x) dx over the support, complex order s, principal power
// (x > 0 on the domain so no branch question arises).
inline MomentValue moment(const GpfpSpec& s, std::complex<double> order,
                          QuadratureOptions opt = {}) {
    validate_params(s);
    if (s.a == 0.0 && !(order.real() > s.l.back() - 0.5))
        throw std::domain_error("moment: integral divergent at 0 for this order");
    auto g = [&](double x) -> std::complex<double> {
        return std::pow(std::complex<double>(x, 0.0), order) * gpfp_coeff_sum(s, x) / x;
    };
    MomentValue mv;
    mv.order = order;
    if (s.a == 0.0) {
        auto r = integrate_sqrt_weight_adaptive(g, s.a, s.b, opt.tol);
        mv.value = s.norm * r.value;
        mv.err_bound = s.norm * r.err_bound;
    } else {
        auto r = integrate_sqrt_weight(g, s.a, s.b, opt);
        mv.value = s.norm * r.value;
        mv.err_bound = s.norm * r.err_bound;
    }
    return mv;
}

// Exact integer moments of fp(p) for rational p > 1. Nonnegative orders come
// from the constant cumulant sequence kappa == p; negative orders reduce to
// positive ones through the reflection identity
//   m_s = m_{-s-1} (p-1)^{1+2s}  =>  m_{-k} = m_{k-1} (p-1)^{-(2k-1)}.
inline Rational fp_moment_exact(const Rational& p, long n) {
    if (!(p > 1)) throw std::domain_error("fp_moment_exact: need p > 1");
    if (n == 0) return Rational(1);
    if (n > 0) {
        if (n > kNcEnumerationCap) throw std::domain_error("fp_moment_exact: order above cap");
        std::vector<Rational> kappa(static_cast<std::size_t>(n), p);
        return cumulants_to_moments(kappa).back();
    }
    const long k = -n;
    if (k - 1 > kNcEnumerationCap)
        throw std::domain_error("fp_moment_exact: negative order below -(cap+1)");
    const Rational pos = fp_moment_exact(p, k - 1);
    return pos * rational_pow(p - 1, -(2 * k - 1));
}

// Exact integer moments of a measure in fp-aligned form:
//   m_n = sum_k w_k m_{n - l_k}(fp(p)).
inline Rational fp_aligned_moment(const FpAlignedForm& f, long n) {
    Rational acc(0);
    for (std::size_t k = 0; k < f.weights.size(); ++k)
        acc += f.weights[k] * fp_moment_exact(f.p, n - f.exponents[k]);
    return acc;
}

// Attempts to recognize a spec as fp-aligned: endpoints ((sqrt p -+ 1)^2) for
// a small-denominator rational p, integer exponents, and rational weights
// 2*pi*norm*alpha_k. Reconstruction tolerances are 1e-9 relative.
inline std::optional<FpAlignedForm> try_align_fp(const GpfpSpec& s) {
    if (s.exact) return s.exact;
    const double rp = 0.5 * (std::sqrt(s.a) + std::sqrt(s.b));
    const double pd = rp * rp;
    auto p = reconstruct_rational(pd, 1000000, 1e-9 * std::max(1.0, pd));
    if (!p || !(*p > 1)) return std::nullopt;
    const double rq = std::sqrt(to_double(*p));
    if (std::fabs(s.a - (rq - 1) * (rq - 1)) > 1e-9 * std::max(1.0, s.a)) return std::nullopt;
    if (std::fabs(s.b - (rq + 1) * (rq + 1)) > 1e-9 * std::max(1.0, s.b)) return std::nullopt;
    FpAlignedForm f;
    f.p = *p;
    for (std::size_t k = 0; k < s.terms(); ++k) {
        const double lk = s.l[k];
        if (std::fabs(lk - std::round(lk)) > 1e-9) return std::nullopt;
        f.exponents.push_back(static_cast<long>(std::llround(lk)));
        const double w = kTwoPi * s.norm * s.alpha[k];
        auto wr = reconstruct_rational(w, 1000000, 1e-9 * std::max(1.0, std::fabs(w)));
        if (!wr) return std::nullopt;
        f.weights.push_back(*wr);
    }
    return f;
}

// Exact integer moment of an fp-aligned spec; refuses non-aligned input so
// callers fall back to quadrature deliberately.
inline Rational gpfp_moment_exact(const GpfpSpec& s, long n) {
    auto f = try_align_fp(s);
    if (!f)
        throw ExactUnavailableError(
            "gpfp_moment_exact: spec not aligned to a rational free Poisson interval");
    return fp_aligned_moment(*f, n);
}

// |m_s - m_{-s-1} (p-1)^{1+2s}| with both moments from quadrature; a small
// value certifies the reflection identity numerically.
inline double reflection_residual(double p, std::complex<double> s, QuadratureOptions opt = {}) {
    if (!(p > 1.0)) throw std::domain_error("reflection_residual: need p > 1");
    const GpfpSpec fp = make_fp(p);
    const std::complex<double> lhs = moment(fp, s, opt).value;
    const std::complex<double> rhs = moment(fp, -s - 1.0, opt).value *
                                     std::exp((1.0 + 2.0 * s) * std::log(p - 1.0));
    return std::abs(lhs - rhs);
}

// ---- cdf / quantile -------------------------------------------------------

// cdf(x) = int_a^x pdf; integrated in the substituted angle where the
// integrand is smooth.
inline double cdf(const GpfpSpec& s, double x) {
    validate_params(s);
    if (x <= s.a) return 0.0;
    if (x >= s.b) return 1.0;
    const double m = 0.5 * (s.a + s.b), h = 0.5 * (s.b - s.a);
    const double th0 = std::acos(std::clamp((x - m) / h, -1.0, 1.0));
    auto f = [&](double th) {
        const double sn = std::sin(th);
        const double xt = m + h * std::cos(th);
        return s.norm * h * h * sn * sn * gpfp_coeff_sum(s, xt) / xt;
    };
    const double v = integrate_adaptive(f, th0, M_PI, 1e-12).value;
    return std::clamp(v, 0.0, 1.0);
}

// Inverse cdf by bisection; monotone and bracketed so this cannot escape.
inline double quantile(const GpfpSpec& s, double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("quantile: need q in (0,1)");
    double lo = s.a, hi = s.b;
    for (int it = 0; it < 80 && (hi - lo) > 1e-15 * (s.b - s.a); ++it) {
        const double mid = 0.5 * (lo + hi);
        (cdf(s, mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---- defining constants of the truncated families -------------------------

// c(n,b) = ( int_{1/n}^b sqrt((x - 1/n)(b - x)) / (2 pi x) dx )^{-1};
// tends to 4/b as n grows.
inline double constant_c(long n, double b) {
    if (n < 1 || !(b > 0.0) || !(1.0 / static_cast<double>(n) < b))
        throw std::domain_error("constant_c: bad arguments");
    const double a = 1.0 / static_cast<double>(n);
    auto g = [&](double x) { return 1.0 / (kTwoPi * x); };
    QuadratureOptions opt;
    opt.tol = 1e-12;
    const double mass = integrate_sqrt_weight(g, a, b, opt).value;
    return 1.0 / mass;
}

// alpha(n,l) = ( int_{1/n}^1 sqrt((1-x)(x - 1/n)) x^{-1-l} dx / B(1/2-l, 3/2) )^{-1};
// tends to 1 as n grows.
inline double constant_alpha(long n, double l) {
    if (n < 2 || !(l < 0.5)) throw std::domain_error("constant_alpha: bad arguments");
    const double a = 1.0 / static_cast<double>(n);
    auto g = [&](double x) { return std::pow(x, -1.0 - l); };
    QuadratureOptions opt;
    opt.tol = 1e-12;
    const double integral = integrate_sqrt_weight(g, a, 1.0, opt).value;
    return std::beta(0.5 - l, 1.5) / integral;
}

// ---- cumulant pipelines ----------------------------------------------------

// Exact moments m_1..m_K then Moebius inversion, all rational.
inline std::pair<std::vector<Rational>, std::vector<Rational>> cumulant_pipeline_exact(
    const GpfpSpec& s, int K) {
    if (K < 1 || K > kNcEnumerationCap)
        throw std::domain_error("cumulant_pipeline_exact: order out of range");
    auto f = try_align_fp(s);
    if (!f)
        throw ExactUnavailableError("cumulant_pipeline_exact: exact path unavailable");
    std::vector<Rational> m;
    for (int n = 1; n <= K; ++n) m.push_back(fp_aligned_moment(*f, n));
    auto kappa = moments_to_cumulants(m);
    return {std::move(m), std::move(kappa)};
}

// Quadrature moments then Moebius inversion in doubles.
inline std::pair<std::vector<double>, std::vector<double>> cumulant_pipeline_quadrature(
    const GpfpSpec& s, int K, QuadratureOptions opt = {}) {
    if (K < 1 || K > kNcEnumerationCap)
        throw std::domain_error("cumulant_pipeline_quadrature: order out of range");
    std::vector<double> m;
    for (int n = 1; n <= K; ++n)
        m.push_back(moment(s, std::complex<double>(n, 0.0), opt).value.real());
    auto kappa = moments_to_cumulants(m);
    return {std::move(m), std::move(kappa)};
}

}  // namespace gpfp
