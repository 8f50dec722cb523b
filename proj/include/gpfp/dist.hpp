#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpfp/errors.hpp"
#include "gpfp/quadrature.hpp"
#include "gpfp/rational.hpp"

namespace gpfp {

inline constexpr double kTwoPi = 2.0 * M_PI;

// Exact description of a measure sum_k w_k x^{-l_k} dfp(p) built on the
// free Poisson interval of a rational p > 1: weights are 2*pi*norm*alpha_k.
// Attached to specs whose endpoints and exponents admit it; carries the
// whole exact-moment pipeline.
struct FpAlignedForm {
    Rational p;
    std::vector<Rational> weights;
    std::vector<long> exponents;
};

// Density norm * sqrt((b-x)(x-a))/x * sum_k alpha_k x^{-l_k} on (a, b).
struct GpfpSpec {
    double a = 0.0;
    double b = 1.0;
    std::vector<double> alpha;  // positive coefficients
    std::vector<double> l;      // strictly increasing exponents
    double norm = 1.0;
    std::optional<FpAlignedForm> exact;

    std::size_t terms() const { return alpha.size(); }
};

inline bool has_fractional_exponent(const GpfpSpec& s, double tol = 1e-12) {
    for (double lk : s.l)
        if (std::fabs(lk - std::round(lk)) > tol) return true;
    return false;
}

inline void validate_params(const GpfpSpec& s) {
    if (!(s.a >= 0.0) || !(s.b > s.a)) throw std::domain_error("GpfpSpec: need 0 <= a < b");
    if (s.alpha.empty() || s.alpha.size() != s.l.size())
        throw std::domain_error("GpfpSpec: alpha and l must be nonempty and equal length");
    for (double ak : s.alpha)
        if (!(ak > 0.0)) throw std::domain_error("GpfpSpec: coefficients must be positive");
    for (std::size_t k = 0; k + 1 < s.l.size(); ++k)
        if (!(s.l[k] < s.l[k + 1])) throw std::domain_error("GpfpSpec: l must be strictly increasing");
    if (!(s.norm > 0.0)) throw std::domain_error("GpfpSpec: norm must be positive");
}

// sum_k alpha_k x^{-l_k}
inline double gpfp_coeff_sum(const GpfpSpec& s, double x) {
    double acc = 0.0;
    for (std::size_t k = 0; k < s.alpha.size(); ++k) acc += s.alpha[k] * std::pow(x, -s.l[k]);
    return acc;
}

inline double gpfp_pdf(const GpfpSpec& s, double x) {
    if (x <= s.a || x >= s.b) {
        if (x < 0.0 && has_fractional_exponent(s))
            throw std::domain_error("gpfp_pdf: negative x with fractional exponent");
        return 0.0;
    }
    return s.norm * std::sqrt((s.b - x) * (x - s.a)) / x * gpfp_coeff_sum(s, x);
}

// Total mass of the density as specified (norm included).
inline double gpfp_mass(const GpfpSpec& s, double tol = 1e-12) {
    validate_params(s);
    if (s.a == 0.0 && s.l.back() >= 0.5)
        throw NormalizationError("gpfp_mass: divergent at 0 (need l_N < 1/2 when a = 0)");
    auto g = [&](double x) { return gpfp_coeff_sum(s, x) / x; };
    QuadratureOptions opt;
    opt.tol = tol;
    double value;
    if (s.a == 0.0) {
        value = integrate_sqrt_weight_adaptive(g, s.a, s.b, tol).value;
    } else {
        value = integrate_sqrt_weight(g, s.a, s.b, opt).value;
    }
    return s.norm * value;
}

// Fills in the multiplier that makes the total mass one.
inline GpfpSpec normalize(GpfpSpec s, double tol = 1e-12) {
    s.norm = 1.0;
    const double mass = gpfp_mass(s, tol);
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw NormalizationError("normalize: mass not positive finite");
    s.norm = 1.0 / mass;
    if (s.exact) {
        // weights carry 2*pi*norm*alpha; a recomputed norm invalidates them
        s.exact.reset();
    }
    return s;
}

// ---- named constructors ------------------------------------------------

// Free Poisson (Marchenko-Pastur) law fp(p), p > 1, rate one:
// interval ((sqrt p - 1)^2, (sqrt p + 1)^2), coefficient 1/(2 pi).
inline GpfpSpec make_fp(double p) {
    if (!(p > 1.0)) throw std::domain_error("make_fp: need p > 1 (atomless case)");
    const double rp = std::sqrt(p);
    GpfpSpec s;
    s.a = (rp - 1.0) * (rp - 1.0);
    s.b = (rp + 1.0) * (rp + 1.0);
    s.alpha = {1.0 / kTwoPi};
    s.l = {0.0};
    s.norm = 1.0;
    if (auto pr = reconstruct_rational(p, 1000000, 1e-9 * std::max(1.0, p)))
        s.exact = FpAlignedForm{*pr, {Rational(1)}, {0}};
    return s;
}

// Coefficient pair of the free generalized inverse Gaussian family: the 2x2
// linear system has sqrt(ab) entries, so it is solved in Q[sqrt(ab)] and the
// defining residuals vanish identically for rational input.
struct FgigSolution {
    QuadExt a1, a2;          // solved coefficients in Q[sqrt(ab)]
    QuadExt res1, res2;      // exact residuals of the two defining equations
    bool residuals_zero = false;
};

inline FgigSolution fgig_solve(const Rational& ra, const Rational& rb, const Rational& rl) {
    if (!(0 < ra && ra < rb)) throw std::domain_error("fgig_solve: need 0 < a < b");
    const Rational d = ra * rb;
    const QuadExt sq = QuadExt::root(d);
    auto Q = [&](const Rational& v) { return QuadExt::rational(v, d); };
    // sqrt(ab) a1 - (a+b)/(2ab) a2 = lambda - 1
    // -(a+b)/2 a1 + 1/sqrt(ab) a2 = -(1 + lambda)
    const QuadExt c11 = sq;
    const QuadExt c12 = Q(-(ra + rb) / (2 * d));
    const QuadExt c21 = Q(-(ra + rb) / 2);
    const QuadExt c22 = sq.inverse();
    const QuadExt r1 = Q(rl - 1);
    const QuadExt r2 = Q(-(1 + rl));
    const QuadExt det = c11 * c22 - c12 * c21;
    if (det.is_zero()) throw std::domain_error("fgig_solve: singular system");
    FgigSolution sol{(r1 * c22 - c12 * r2) / det, (c11 * r2 - r1 * c21) / det,
                     QuadExt::rational(Rational(0), d), QuadExt::rational(Rational(0), d),
                     false};
    sol.res1 = c11 * sol.a1 + c12 * sol.a2 - r1;
    sol.res2 = c21 * sol.a1 + c22 * sol.a2 - r2;
    sol.residuals_zero = sol.res1.is_zero() && sol.res2.is_zero();
    return sol;
}

// fGIG distribution on (a, b): two terms with exponents (0, 1).
inline GpfpSpec make_fgig(double a, double b, double lambda) {
    const FgigSolution sol =
        fgig_solve(exact_rational(a), exact_rational(b), exact_rational(lambda));
    if (sol.a1.sign() <= 0 || sol.a2.sign() <= 0)
        throw std::domain_error("make_fgig: not in fGIG family for these (a,b,lambda)");
    const double sab = std::sqrt(a * b);
    GpfpSpec s;
    s.a = a;
    s.b = b;
    s.alpha = {sol.a1.to_double() / kTwoPi, sol.a2.to_double() / (kTwoPi * sab)};
    s.l = {0.0, 1.0};
    s.norm = 1.0;
    return s;
}

// Semicircle of radius 2 centered at u (u > 2 keeps the support positive):
// a single term with exponent -1.
inline GpfpSpec make_shifted_semicircle(double u) {
    if (!(u > 2.0)) throw std::domain_error("make_shifted_semicircle: need u > 2");
    GpfpSpec s;
    s.a = u - 2.0;
    s.b = u + 2.0;
    s.alpha = {1.0 / kTwoPi};
    s.l = {-1.0};
    s.norm = 1.0;
    return s;
}

// Truncation S_{n,b} of the free positive 1/2-stable-type law: interval
// (1/b, n), exponent 1; the normalizer is the constant c(n,b).
inline GpfpSpec make_truncated_stable(long n, double b) {
    if (n < 1 || !(b > 0.0)) throw std::domain_error("make_truncated_stable: need n >= 1, b > 0");
    if (!(1.0 / b < static_cast<double>(n)))
        throw std::domain_error("make_truncated_stable: interval empty");
    GpfpSpec s;
    s.a = 1.0 / b;
    s.b = static_cast<double>(n);
    s.alpha = {std::sqrt(b / static_cast<double>(n)) / kTwoPi};
    s.l = {1.0};
    return normalize(std::move(s));
}

// Truncation B_{n,l} of the beta-related family B(1/2 - l, 3/2), l < 1/2:
// interval (1/n, 1); the normalizer is alpha(n, l).
inline GpfpSpec make_beta_related(long n, double l) {
    if (n < 2 || !(l < 0.5)) throw std::domain_error("make_beta_related: need n >= 2, l < 1/2");
    GpfpSpec s;
    s.a = 1.0 / static_cast<double>(n);
    s.b = 1.0;
    s.alpha = {1.0 / std::beta(0.5 - l, 1.5)};
    s.l = {l};
    return normalize(std::move(s));
}

// Push-forward under x -> 1/x: interval (1/b, 1/a), coefficients reversed
// and scaled by sqrt(ab), exponents 1 - l reversed. The normalizer is
// recomputed numerically; it reproduces the original norm, which makes the
// map an involution on all five parameters.
inline GpfpSpec gpfp_inverse(const GpfpSpec& s, double tol = 1e-12) {
    validate_params(s);
    if (s.a == 0.0) throw std::domain_error("gpfp_inverse: need a > 0");
    const double sab = std::sqrt(s.a * s.b);
    GpfpSpec inv;
    inv.a = 1.0 / s.b;
    inv.b = 1.0 / s.a;
    const std::size_t N = s.terms();
    inv.alpha.resize(N);
    inv.l.resize(N);
    for (std::size_t k = 0; k < N; ++k) {
        inv.alpha[k] = s.alpha[N - 1 - k] * sab;
        inv.l[k] = 1.0 - s.l[N - 1 - k];
    }
    inv = normalize(std::move(inv), tol);
    // Exact form survives inversion only on the self-reciprocal interval
    // ab = 1 (the p = 2 free Poisson endpoints).
    if (s.exact && s.exact->p == 2) {
        FpAlignedForm f;
        f.p = 2;
        for (std::size_t k = 0; k < N; ++k) {
            f.weights.push_back(s.exact->weights[N - 1 - k]);
            f.exponents.push_back(1 - s.exact->exponents[N - 1 - k]);
        }
        inv.exact = std::move(f);
    }
    return inv;
}

// ---- powers -------------------------------------------------------------

struct PowerTerm {
    double coeff;  // includes the base normalizer
    double expo;
};

// The density of X^r for X ~ GpfpSpec, in the transformed-parameter form
//   (sexp / x) sqrt((B^sexp - x^sexp)(x^sexp - A^sexp)) sum_k c_k x^{-e_k}
// on (A, B). For r <= -1 the inverse map is applied first, so the stored
// base always receives a positive power rho = |r| >= 1.
struct PowerSpec {
    GpfpSpec base;
    double r = 1.0;
    double rho = 1.0;
    double sexp = 1.0;  // 1/rho in (0, 1]
    double A = 0.0, B = 1.0;
    std::vector<PowerTerm> terms;        // exponents ascending
    std::optional<int> window;           // integer base n-1 with exponents in [n-1, n]
    std::optional<double> theta;         // sector opening pi / (sexp*(n-1) + 1)
    double alpha_a3 = 0.0;               // small-z amplitude sexp (AB)^{sexp/2} c_N
    double far_field = 0.0;              // limit of the continued transform at infinity
    bool zero_decay = false;             // density does not vanish at infinity in the sector

    static PowerSpec from(const GpfpSpec& s, double r, double integer_tol = 1e-9) {
        validate_params(s);
        if (!(std::fabs(r) >= 1.0))
            throw std::domain_error("PowerSpec: need |r| >= 1");
        PowerSpec ps;
        ps.r = r;
        if (r >= 1.0) {
            ps.base = s;
            ps.rho = r;
        } else {
            ps.base = gpfp_inverse(s);
            ps.rho = -r;
        }
        ps.sexp = 1.0 / ps.rho;
        ps.A = std::pow(ps.base.a, ps.rho);
        ps.B = std::pow(ps.base.b, ps.rho);
        const std::size_t N = ps.base.terms();
        ps.terms.resize(N);
        for (std::size_t k = 0; k < N; ++k) {
            ps.terms[k].coeff = ps.base.norm * ps.base.alpha[k];
            ps.terms[k].expo = ps.sexp * ps.base.l[k];
        }
        // integer window for the base exponents: smallest w >= 0 with
        // l in [w, w+1] gives the widest sector
        const double l1 = ps.base.l.front(), lN = ps.base.l.back();
        const int wlo = std::max(0, static_cast<int>(std::ceil(lN - 1.0 - integer_tol)));
        const int whi = static_cast<int>(std::floor(l1 + integer_tol));
        if (wlo <= whi && l1 >= -integer_tol) {
            ps.window = wlo;
            ps.theta = M_PI / (ps.sexp * wlo + 1.0);
        }
        ps.alpha_a3 =
            ps.sexp * std::pow(ps.A * ps.B, 0.5 * ps.sexp) * ps.terms.back().coeff;
        ps.zero_decay = (ps.rho == 1.0) && (std::fabs(ps.terms.front().expo) <= integer_tol);
        ps.far_field = ps.zero_decay ? kTwoPi * ps.terms.front().coeff : 0.0;
        return ps;
    }

    bool in_regime() const { return window.has_value(); }
};

// Density of X^r at x through the transformed parameters; the
// change-of-variables identity f(x^{1/r}) |1/r| x^{1/r-1} is kept as an
// independent oracle in the tests.
inline double power_pdf(const GpfpSpec& s, double r, double x) {
    const PowerSpec ps = PowerSpec::from(s, r);
    if (x <= ps.A || x >= ps.B) return 0.0;
    const double xs = std::pow(x, ps.sexp);
    const double As = std::pow(ps.A, ps.sexp), Bs = std::pow(ps.B, ps.sexp);
    double sum = 0.0;
    for (const auto& t : ps.terms) sum += t.coeff * std::pow(x, -t.expo);
    return ps.sexp / x * std::sqrt((Bs - xs) * (xs - As)) * sum;
}

// ---- section-5 side conditions -------------------------------------------

enum class ProbKind { Sigma, Eta };

// Affine conditions making the two-term families probability measures:
//   sigma: a1 + a2 p = p - 1        eta: a1 + a2 p/(p-1)^3 = 1
inline bool check_prob_condition(ProbKind kind, const Rational& p, const Rational& a1,
                                 const Rational& a2) {
    if (!(p > 1)) throw std::domain_error("check_prob_condition: need p > 1");
    if (kind == ProbKind::Sigma) return a1 + a2 * p == p - 1;
    const Rational pm1 = p - 1;
    return a1 + a2 * p / (pm1 * pm1 * pm1) == 1;
}

inline bool check_prob_condition(ProbKind kind, double p, double a1, double a2,
                                 double tol = 1e-12) {
    if (!(p > 1.0)) throw std::domain_error("check_prob_condition: need p > 1");
    const double lhs = (kind == ProbKind::Sigma) ? a1 + a2 * p
                                                 : a1 + a2 * p / std::pow(p - 1.0, 3);
    const double rhs = (kind == ProbKind::Sigma) ? p - 1.0 : 1.0;
    return std::fabs(lhs - rhs) <= tol * std::max(1.0, std::fabs(rhs));
}

}  // namespace gpfp
