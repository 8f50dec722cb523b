#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpfp/rational.hpp"

namespace gpfp {

// Free cumulants kappa_2..kappa_4 of the inverse of the two-term measure
// sigma_{a1,a2} (exponents (1,2) on the reciprocal free Poisson interval,
// a1 = 1 - 2 a2):
//   kappa_2 = -2 (2 a2^2 - a2 - 1)
//   kappa_3 =  2 (8 a2^3 - 6 a2^2 - a2 + 1)
//   kappa_4 = -2 (2 a2 - 1)(20 a2^3 - 10 a2^2 - 3 a2 + 1)
template <class S>
std::vector<S> cumulants_sigma_inverse(const S& a2) {
    if (!(a2 > S(0)) || !(S(2) * a2 < S(1)))
        throw std::domain_error("cumulants_sigma_inverse: need 0 < a2 < 1/2");
    const S k2 = S(-2) * (S(2) * a2 * a2 - a2 - S(1));
    const S k3 = S(2) * (S(8) * a2 * a2 * a2 - S(6) * a2 * a2 - a2 + S(1));
    const S k4 = S(-2) * (S(2) * a2 - S(1)) *
                 (S(20) * a2 * a2 * a2 - S(10) * a2 * a2 - S(3) * a2 + S(1));
    return {k2, k3, k4};
}

// Free cumulants kappa_2..kappa_4 of the two-term measure eta_{a1,a2}
// (exponents (0,2) on the free Poisson interval, a1 = 1 - 2 a2):
//   kappa_2 = -9 a2^2 + a2 + 2
//   kappa_3 = -54 a2^3 + 9 a2^2 + 6 a2 + 2
//   kappa_4 = -405 a2^4 + 90 a2^3 + 34 a2^2 + 10 a2 + 2
template <class S>
std::vector<S> cumulants_eta(const S& a2) {
    if (!(a2 > S(0)) || !(S(2) * a2 < S(1)))
        throw std::domain_error("cumulants_eta: need 0 < a2 < 1/2");
    const S a22 = a2 * a2, a23 = a22 * a2, a24 = a23 * a2;
    const S k2 = S(-9) * a22 + a2 + S(2);
    const S k3 = S(-54) * a23 + S(9) * a22 + S(6) * a2 + S(2);
    const S k4 = S(-405) * a24 + S(90) * a23 + S(34) * a22 + S(10) * a2 + S(2);
    return {k2, k3, k4};
}

// Hankel matrix of the shifted cumulant sequence: entry (i,j) = kappa_{i+j+2}
// for a k x k matrix, so order k consumes kappa_2..kappa_{2k}.
template <class S>
struct HankelWitness {
    int order = 0;
    std::vector<std::vector<S>> matrix;
    S det{};
    bool negative = false;
};

namespace detail {

// Fraction-free elimination keeps the determinant exact for rational input
// and reasonably conditioned for floating input at these sizes.
template <class S>
S bareiss_det(std::vector<std::vector<S>> m) {
    const std::size_t n = m.size();
    if (n == 0) return S(1);
    S prev(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == S(0)) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == S(0)) ++p;
            if (p == n) return S(0);
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    S d = m[n - 1][n - 1];
    return sign > 0 ? d : -d;
}

}  // namespace detail

// kappa spans the shifted sequence kappa_2, kappa_3, ... in order.
template <class S>
HankelWitness<S> hankel_witness(std::span<const S> kappa_from_2, int k) {
    if (k < 1) throw std::domain_error("hankel_witness: order must be positive");
    const std::size_t need = static_cast<std::size_t>(2 * k - 1);  // kappa_2..kappa_{2k}
    if (kappa_from_2.size() < need)
        throw std::domain_error("hankel_witness: insufficient cumulants for this order");
    HankelWitness<S> w;
    w.order = k;
    w.matrix.assign(static_cast<std::size_t>(k), std::vector<S>(static_cast<std::size_t>(k)));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            w.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                kappa_from_2[static_cast<std::size_t>(i + j)];
    w.det = detail::bareiss_det(w.matrix);
    w.negative = w.det < S(0);
    return w;
}

template <class S>
HankelWitness<S> hankel_witness(const std::vector<S>& kappa_from_2, int k) {
    return hankel_witness(std::span<const S>(kappa_from_2), k);
}

// One-sided certificate: a negative Hankel determinant of the shifted
// sequence proves the measure is not freely infinitely divisible; matrices
// up to the requested order are tried. Nothing here can certify divisibility,
// so the alternative outcome stays "inconclusive".
enum class FidVerdict { FailWithWitness, Inconclusive };

template <class S>
struct FidResult {
    FidVerdict verdict = FidVerdict::Inconclusive;
    std::optional<HankelWitness<S>> witness;
};

template <class S>
FidResult<S> fid_necessary(std::span<const S> kappa_from_2, int max_order) {
    FidResult<S> res;
    for (int k = 1; k <= max_order; ++k) {
        if (static_cast<std::size_t>(2 * k - 1) > kappa_from_2.size()) break;
        auto w = hankel_witness(kappa_from_2, k);
        if (w.negative) {
            res.verdict = FidVerdict::FailWithWitness;
            res.witness = std::move(w);
            return res;
        }
    }
    return res;
}

template <class S>
FidResult<S> fid_necessary(const std::vector<S>& kappa_from_2, int max_order) {
    return fid_necessary(std::span<const S>(kappa_from_2), max_order);
}

// Floating variant: quadrature noise must not flip a zero determinant (the
// free Poisson and semicircle cases sit exactly on the boundary), so the
// certificate requires the determinant to clear a margin below zero.
inline FidResult<double> fid_necessary_float(std::span<const double> kappa_from_2,
                                             int max_order, double margin = 1e-8) {
    FidResult<double> res;
    double scale = 1.0;
    for (double v : kappa_from_2) scale = std::max(scale, std::fabs(v));
    for (int k = 1; k <= max_order; ++k) {
        if (static_cast<std::size_t>(2 * k - 1) > kappa_from_2.size()) break;
        auto w = hankel_witness(kappa_from_2, k);
        if (w.det < -margin * std::pow(scale, k)) {
            w.negative = true;
            res.verdict = FidVerdict::FailWithWitness;
            res.witness = std::move(w);
            return res;
        }
    }
    return res;
}

// det [kappa_2 kappa_3; kappa_3 kappa_4] for eta as a function of a2.
inline Rational eta_hankel_det(const Rational& a2) {
    const auto k = cumulants_eta(a2);
    return k[0] * k[2] - k[1] * k[1];
}

inline Rational sigma_inverse_hankel_det(const Rational& a2) {
    const auto k = cumulants_sigma_inverse(a2);
    return k[0] * k[2] - k[1] * k[1];
}

struct ThresholdResult {
    double root = 0.0;
    double lo = 0.0, hi = 0.0;  // final exact bracket
    double tol = 0.0;
};

// Root of the eta Hankel determinant in (0.1, 0.3): the sign change is
// certified exactly, then dyadic bisection on the exact polynomial narrows
// the bracket below 1e-9. No quadrature enters.
inline ThresholdResult eta_threshold(double tol = 1e-9) {
    Rational lo(1, 10), hi(3, 10);
    const Rational flo = eta_hankel_det(lo), fhi = eta_hankel_det(hi);
    if (!(flo < 0) || !(fhi > 0))
        throw std::logic_error("eta_threshold: bracket does not straddle a sign change");
    for (int it = 0; it < 64; ++it) {
        if (to_double(hi - lo) <= tol) break;
        const Rational mid = (lo + hi) / 2;
        const Rational fm = eta_hankel_det(mid);
        if (fm == 0) {
            lo = mid;
            hi = mid;
            break;
        }
        (fm < 0 ? lo : hi) = mid;
    }
    ThresholdResult r;
    r.lo = to_double(lo);
    r.hi = to_double(hi);
    r.root = 0.5 * (r.lo + r.hi);
    r.tol = tol;
    return r;
}

}  // namespace gpfp
