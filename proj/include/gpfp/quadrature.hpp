#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "gpfp/errors.hpp"

namespace gpfp {

struct QuadratureOptions {
    int initial_nodes = 256;
    int max_nodes = 1 << 16;
    double tol = 1e-10;  // absolute target, scaled by max(1, |value|)
};

enum class RuleKind { CosineSubstitution, AdaptiveSubdivision };

struct QuadratureRule {
    RuleKind kind = RuleKind::CosineSubstitution;
    int nodes = 256;
    double tol = 1e-10;
};

template <class T>
struct QuadResult {
    T value{};
    double err_bound = 0.0;
    int nodes = 0;
};

namespace detail {
inline double cabs(double x) { return std::fabs(x); }
inline double cabs(const std::complex<double>& z) { return std::abs(z); }
}  // namespace detail

// Nodes and weights for int_a^b sqrt((b-x)(x-a)) g(x) dx ~ sum w_i g(x_i).
// This is the Gauss-Chebyshev rule of the second kind after the cosine
// substitution x = (a+b)/2 + ((b-a)/2) cos(theta); the square-root endpoint
// weight is exact and the remaining factor converges spectrally when g is
// analytic on [a, b].
struct SqrtWeightRule {
    std::vector<double> x, w;
};

inline SqrtWeightRule make_sqrt_weight_rule(double a, double b, int n) {
    if (!(b > a)) throw std::domain_error("make_sqrt_weight_rule: need a < b");
    if (n < 1) throw std::domain_error("make_sqrt_weight_rule: need n >= 1");
    SqrtWeightRule r;
    r.x.resize(static_cast<std::size_t>(n));
    r.w.resize(static_cast<std::size_t>(n));
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    const double c = M_PI / (n + 1);
    for (int i = 1; i <= n; ++i) {
        const double th = c * i;
        const double s = std::sin(th);
        r.x[static_cast<std::size_t>(i - 1)] = m + h * std::cos(th);
        r.w[static_cast<std::size_t>(i - 1)] = c * h * h * s * s;
    }
    return r;
}

// Doubles the node count until two successive evaluations agree;
// err_bound is the last observed difference.
template <class F>
auto integrate_sqrt_weight(F&& g, double a, double b, QuadratureOptions opt = {})
    -> QuadResult<std::decay_t<decltype(g(1.0))>> {
    using T = std::decay_t<decltype(g(1.0))>;
    auto eval = [&](int n) {
        const SqrtWeightRule r = make_sqrt_weight_rule(a, b, n);
        T acc{};
        for (std::size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * g(r.x[i]);
        return acc;
    };
    int n = std::max(8, opt.initial_nodes);
    T prev = eval(n);
    while (true) {
        const int n2 = 2 * n;
        if (n2 > opt.max_nodes)
            throw ToleranceError("integrate_sqrt_weight: tolerance not met at node cap");
        T cur = eval(n2);
        const double diff = detail::cabs(cur - prev);
        if (diff <= opt.tol * std::max(1.0, detail::cabs(cur)))
            return {cur, diff, n2};
        prev = cur;
        n = n2;
    }
}

namespace detail {

// Gauss 7 / Kronrod 15 pair (classic QUADPACK constants).
inline constexpr std::array<double, 8> kK15Nodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr std::array<double, 8> kK15Weights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> kG7Weights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F, class T>
void gk15(F& f, double lo, double hi, T& k15, double& err) {
    const double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    T kacc{}, gacc{};
    for (int i = 0; i < 8; ++i) {
        const double dx = h * kK15Nodes[static_cast<std::size_t>(i)];
        T fv = f(m - dx);
        if (i != 7) fv += f(m + dx);
        kacc += kK15Weights[static_cast<std::size_t>(i)] * fv;
        if (i % 2 == 1) gacc += kG7Weights[static_cast<std::size_t>(i / 2)] * fv;
    }
    k15 = h * kacc;
    err = cabs(h * (kacc - gacc));
}

}  // namespace detail

// Adaptive bisection with the embedded G7/K15 estimate; for smooth
// integrands and the mildly singular theta-space integrands used here.
template <class F>
auto integrate_adaptive(F&& f, double lo, double hi, double tol = 1e-11, int max_depth = 80)
    -> QuadResult<std::decay_t<decltype(f(1.0))>> {
    using T = std::decay_t<decltype(f(1.0))>;
    if (!(hi > lo)) return {T{}, 0.0, 0};
    struct Frame {
        double lo, hi, tol;
        int depth;
    };
    std::vector<Frame> stack{{lo, hi, tol, 0}};
    T total{};
    double toterr = 0.0;
    int evals = 0;
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        T v{};
        double e = 0.0;
        detail::gk15(f, fr.lo, fr.hi, v, e);
        evals += 15;
        if (e <= fr.tol * std::max(1.0, detail::cabs(v)) || e <= 1e-300) {
            total += v;
            toterr += e;
            continue;
        }
        if (fr.depth >= max_depth)
            throw ToleranceError("integrate_adaptive: depth cap before tolerance");
        const double mid = 0.5 * (fr.lo + fr.hi);
        stack.push_back({fr.lo, mid, 0.5 * fr.tol, fr.depth + 1});
        stack.push_back({mid, fr.hi, 0.5 * fr.tol, fr.depth + 1});
    }
    return {total, toterr, evals};
}

// Same sqrt-weight integral evaluated through adaptive subdivision in the
// substituted angle variable: the fallback when the smooth factor has
// strong gradients (large negative exponents near a small left endpoint).
template <class F>
auto integrate_sqrt_weight_adaptive(F&& g, double a, double b, double tol = 1e-11)
    -> QuadResult<std::decay_t<decltype(g(1.0))>> {
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    auto th_integrand = [&](double th) {
        const double s = std::sin(th);
        return h * h * s * s * g(m + h * std::cos(th));
    };
    return integrate_adaptive(th_integrand, 0.0, M_PI, tol);
}

}  // namespace gpfp
