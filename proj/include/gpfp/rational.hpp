#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace gpfp {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return static_cast<double>(r); }

// Exact rational value of a finite double (every finite double is dyadic).
inline Rational exact_rational(double x) {
    if (!std::isfinite(x)) throw std::domain_error("exact_rational: non-finite input");
    return Rational(x);
}

inline Rational rational_pow(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    if (base == 0 && e < 0) throw std::domain_error("rational_pow: zero to negative power");
    Rational acc(1), b = e > 0 ? base : Rational(1) / base;
    for (long k = e > 0 ? e : -e; k > 0; --k) acc *= b;
    return acc;
}

// Best small-denominator rational near x (continued-fraction convergents).
// Returns nothing when no convergent with denominator <= max_den lands
// within tol of x.
inline std::optional<Rational> reconstruct_rational(double x, std::int64_t max_den = 1000000,
                                                    double tol = 1e-9) {
    if (!std::isfinite(x)) return std::nullopt;
    const bool neg = x < 0;
    double v = std::fabs(x);
    BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = v;
    for (int it = 0; it < 64; ++it) {
        const double fl = std::floor(frac);
        if (fl > 9e18) break;
        BigInt a = static_cast<std::int64_t>(fl);
        BigInt p2 = a * p1 + p0;
        BigInt q2 = a * q1 + q0;
        if (q2 > max_den) break;
        const double approx = static_cast<double>(p2) / static_cast<double>(q2);
        if (std::fabs(approx - v) <= tol) {
            Rational r(p2, q2);
            return neg ? -r : r;
        }
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        const double rem = frac - fl;
        if (rem < 1e-15) break;
        frac = 1.0 / rem;
    }
    return std::nullopt;
}

// Element of the quadratic field Q[sqrt(d)] for a fixed rational d >= 0.
// Used where a linear system with sqrt(ab) coefficients must be solved
// without rounding.
struct QuadExt {
    Rational x, y, d;  // value x + y*sqrt(d)

    static QuadExt rational(const Rational& v, const Rational& d) { return {v, Rational(0), d}; }
    static QuadExt root(const Rational& d) { return {Rational(0), Rational(1), d}; }

    QuadExt operator+(const QuadExt& o) const { return {x + o.x, y + o.y, d}; }
    QuadExt operator-(const QuadExt& o) const { return {x - o.x, y - o.y, d}; }
    QuadExt operator-() const { return {-x, -y, d}; }
    QuadExt operator*(const QuadExt& o) const {
        return {x * o.x + y * o.y * d, x * o.y + y * o.x, d};
    }
    QuadExt inverse() const {
        const Rational den = x * x - y * y * d;
        if (den == 0) throw std::domain_error("QuadExt: division by zero");
        return {x / den, -y / den, d};
    }
    QuadExt operator/(const QuadExt& o) const { return *this * o.inverse(); }

    bool is_zero() const { return x == 0 && y == 0; }

    // Sign of x + y*sqrt(d), exact.
    int sign() const {
        const int sx = x == 0 ? 0 : (x > 0 ? 1 : -1);
        const int sy = y == 0 ? 0 : (y > 0 ? 1 : -1);
        if (sy == 0) return sx;
        if (sx == 0) return d == 0 ? 0 : sy;
        if (sx == sy) return sx;
        // opposite signs: compare x^2 against y^2 d
        const Rational lhs = x * x, rhs = y * y * d;
        if (lhs == rhs) return 0;
        return (lhs > rhs) ? sx : sy;
    }

    double to_double() const {
        return static_cast<double>(x) + static_cast<double>(y) * std::sqrt(static_cast<double>(d));
    }
};

}  // namespace gpfp
