#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpfp/dist.hpp"
#include "gpfp/errors.hpp"
#include "gpfp/quadrature.hpp"

namespace gpfp {

using Complex = std::complex<double>;

namespace detail {

// rho^w e^{i w psi}: the power taken through explicit polar data, so points
// on the sector boundary rays (including psi = -pi) get their limiting
// branch rather than whatever side the rounding lands on.
inline Complex polar_pow(double rho, double psi, double w) {
    return std::polar(std::pow(rho, w), w * psi);
}

}  // namespace detail

// ---- analytic continuation of the density ---------------------------------

// Continuation of the power density into the closed lower sector, polar
// form. The square-root factor is exp(0.5 log(product)) on the principal
// branch; inside the sector the product stays off the negative axis, and on
// the boundary rays the polar powers land on the correct side of the cut.
inline Complex continued_density_polar(const PowerSpec& ps, double rho, double psi) {
    if (!(rho > 0.0)) throw std::domain_error("continued_density: z = 0");
    if (ps.theta && psi < -*ps.theta - 1e-9)
        throw std::domain_error("continued_density: argument beyond the sector ray");
    psi = std::min(psi, -1e-14);  // approach the real axis from below
    const double As = std::pow(ps.A, ps.sexp), Bs = std::pow(ps.B, ps.sexp);
    const Complex zs = detail::polar_pow(rho, psi, ps.sexp);
    const Complex root = std::sqrt((Bs - zs) * (zs - As));
    Complex sum(0.0, 0.0);
    for (const auto& t : ps.terms) sum += t.coeff * detail::polar_pow(rho, psi, -t.expo);
    const Complex z = std::polar(rho, psi);
    return ps.sexp / z * root * sum;
}

// Cartesian continuation: interior sector points and points just below the
// axis (the finite-offset realizations of the -i0 segments). Real x inside
// (A, B) reproduces the density.
inline Complex continued_density(const PowerSpec& ps, Complex z) {
    if (z == Complex(0.0, 0.0)) throw std::domain_error("continued_density: z = 0");
    if (z.imag() == 0.0) {
        if (z.real() > ps.A && z.real() < ps.B) {
            const double x = z.real();
            const double xs = std::pow(x, ps.sexp);
            const double As = std::pow(ps.A, ps.sexp), Bs = std::pow(ps.B, ps.sexp);
            double sum = 0.0;
            for (const auto& t : ps.terms) sum += t.coeff * std::pow(x, -t.expo);
            return Complex(ps.sexp / x * std::sqrt((Bs - xs) * (xs - As)) * sum, 0.0);
        }
        if (z.real() < 0.0)
            return continued_density_polar(ps, -z.real(), -M_PI);
        // positive real off support: the -i0 boundary limit
        return continued_density_polar(ps, z.real(), 0.0);
    }
    if (z.imag() > 0.0)
        throw std::domain_error("continued_density: point above the real axis");
    return continued_density_polar(ps, std::abs(z), std::arg(z));
}

// Boundary values f(x - i0) off the support: purely imaginary by
// construction, negative-imaginary left of A and positive-imaginary right
// of B.
inline Complex boundary_density_below(const PowerSpec& ps, double x) {
    if (!(x > 0.0)) throw std::domain_error("boundary_density_below: need x > 0");
    if (x >= ps.A && x <= ps.B)
        throw std::domain_error("boundary_density_below: x inside the support");
    const double xs = std::pow(x, ps.sexp);
    const double As = std::pow(ps.A, ps.sexp), Bs = std::pow(ps.B, ps.sexp);
    double sum = 0.0;
    for (const auto& t : ps.terms) sum += t.coeff * std::pow(x, -t.expo);
    if (x < ps.A) {
        const double mag = ps.sexp / x * std::sqrt((As - xs) * (Bs - xs)) * sum;
        return Complex(0.0, -mag);
    }
    const double mag = ps.sexp / x * std::sqrt((xs - As) * (xs - Bs)) * sum;
    return Complex(0.0, mag);
}

// ---- Cauchy transform ------------------------------------------------------

// Closed-form transform of the bare sqrt weight on [a, b]:
//   int_a^b sqrt((b-u)(u-a)) / (zeta - u) du
// with the branch that behaves like (area)/zeta at infinity.
inline Complex sqrt_weight_transform(Complex zeta, double a, double b) {
    const double m = 0.5 * (a + b);
    return M_PI * (zeta - m - std::sqrt(zeta - a) * std::sqrt(zeta - b));
}

// G-tilde for the power measure, integrated in the base variable:
//   G(z) = int f0(u) / (z - u^rho) du over (a0, b0),
// which keeps the quadrature on the well-conditioned base interval no
// matter how far the power map stretches the support. Near the support the
// simple pole at u* = z^(1/rho) is subtracted against the closed-form
// weight transform:
//   q0(u)/(z - u^rho) = [q0(u)/(z - u^rho) - c/(u* - u)] + c/(u* - u),
//   c = q0(u*) / (rho u*^(rho-1)),
// the bracket being analytic at u*.
class CauchyEvaluator {
  public:
    explicit CauchyEvaluator(const PowerSpec& ps, double tol = 1e-11, int max_nodes = 1 << 16)
        : ps_(ps), tol_(tol), max_nodes_(max_nodes) {}

    const PowerSpec& power_spec() const { return ps_; }

    // base smooth factor: density0(u) = sqrt((b0-u)(u-a0)) q0(u)
    Complex base_factor(Complex u) const {
        Complex sum(0.0, 0.0);
        for (std::size_t k = 0; k < ps_.base.terms(); ++k)
            sum += ps_.base.alpha[k] * std::pow(u, -ps_.base.l[k] - 1.0);
        return ps_.base.norm * sum;
    }

    Complex upper(Complex z) const {
        const double L = ps_.B - ps_.A;
        const double dx = std::max({ps_.A - z.real(), z.real() - ps_.B, 0.0});
        const double dy = std::fabs(z.imag());
        if (dx == 0.0 && dy < 1e-8 * L && z.real() > ps_.A + 1e-8 * L &&
            z.real() < ps_.B - 1e-8 * L)
            throw std::domain_error("cauchy transform: point too close to the support interior");
        const double dist = std::hypot(dx, dy);
        // The pole constant must stay moderate: for z near the origin the
        // base factor blows up at u* -> 0 and the subtracted form cancels
        // catastrophically, while the plain sum is fine there (the pole
        // keeps its distance from the base interval).
        const Complex ustar = std::pow(z, ps_.sexp);
        const bool subtract = dist <= 0.02 * L && std::abs(ustar) >= 0.5 * ps_.base.a;
        Complex pole_c(0.0, 0.0);
        double floor = 0.0;
        if (subtract) {
            pole_c = base_factor(ustar) / (ps_.rho * std::pow(ustar, ps_.rho - 1.0));
            // cancellation bound of double precision
            floor = 4e-15 *
                    std::abs(pole_c * sqrt_weight_transform(ustar, ps_.base.a, ps_.base.b));
        }
        int n = 256;
        Complex prev = eval_nodes(n, z, subtract, ustar, pole_c);
        while (true) {
            const int n2 = 2 * n;
            if (n2 > max_nodes_)
                throw ToleranceError("cauchy transform: tolerance not met at node cap near z = (" +
                                     std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                                     ")");
            const Complex cur = eval_nodes(n2, z, subtract, ustar, pole_c);
            if (std::abs(cur - prev) <= std::max(tol_ * std::max(1.0, std::abs(cur)), floor))
                return cur;
            prev = cur;
            n = n2;
        }
    }

  private:
    struct NodeSet {
        std::vector<double> u, upow, wbar, q;
    };

    const NodeSet& nodes(int n) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(n);
        if (it != cache_.end()) return it->second;
        NodeSet ns;
        const SqrtWeightRule r = make_sqrt_weight_rule(ps_.base.a, ps_.base.b, n);
        ns.u = r.x;
        ns.wbar = r.w;
        ns.upow.resize(ns.u.size());
        ns.q.resize(ns.u.size());
        for (std::size_t i = 0; i < ns.u.size(); ++i) {
            const double u = ns.u[i];
            ns.upow[i] = std::pow(u, ps_.rho);
            double sum = 0.0;
            for (std::size_t k = 0; k < ps_.base.terms(); ++k)
                sum += ps_.base.alpha[k] * std::pow(u, -ps_.base.l[k] - 1.0);
            ns.q[i] = ps_.base.norm * sum;
        }
        return cache_.emplace(n, std::move(ns)).first->second;
    }

    Complex eval_nodes(int n, Complex z, bool subtract, Complex ustar, Complex pole_c) const {
        const NodeSet& ns = nodes(n);
        Complex acc(0.0, 0.0);
        if (subtract) {
            for (std::size_t i = 0; i < ns.u.size(); ++i)
                acc += ns.wbar[i] *
                       (ns.q[i] / (z - ns.upow[i]) - pole_c / (ustar - ns.u[i]));
            return acc + pole_c * sqrt_weight_transform(ustar, ps_.base.a, ps_.base.b);
        }
        for (std::size_t i = 0; i < ns.u.size(); ++i)
            acc += ns.wbar[i] * ns.q[i] / (z - ns.upow[i]);
        return acc;
    }

    PowerSpec ps_;
    double tol_;
    int max_nodes_;
    mutable std::map<int, NodeSet> cache_;
    mutable std::mutex mu_;
};

inline Complex cauchy_upper(const PowerSpec& ps, Complex z, double tol = 1e-11) {
    return CauchyEvaluator(ps, tol).upper(z);
}

// G(z) = G-tilde(z) - 2 pi i f(z) in the lower sector.
inline Complex cauchy_continued(const PowerSpec& ps, Complex z, double tol = 1e-11) {
    return cauchy_upper(ps, z, tol) - Complex(0.0, kTwoPi) * continued_density(ps, z);
}

// ---- contour ---------------------------------------------------------------

enum class Region { Upper, Sector };

struct ContourSample {
    double t = 0.0;
    Complex z{};
    Complex G{};
};

// The +-i0 line segments carry a finite offset that shrinks with |x| so the
// realization error stays proportional to the local scale of G even on
// supports spanning several decades.
inline double local_offset(double base, double x) {
    return std::min(base, 1e-5 * std::fabs(x));
}

struct ContourSegment {
    enum class Geometry { SlogLineAbove, GeomLineBelow, GeomLineAbove, Arc, Ray };
    int id = 0;  // 1..8
    Region region = Region::Upper;
    Geometry geom = Geometry::Arc;
    // geometry data
    double p0 = 0.0, p1 = 0.0;  // endpoint parameters (x, psi or rho)
    double offset = 0.0;        // imaginary offset for lines, radius for arcs, psi for rays
    double slog_ref = 1.0;      // resolution scale of the asinh spacing
    bool exact_start = false, exact_end = false;  // endpoint pinned to the real axis
    std::vector<ContourSample> samples;

    // polar data for a parameter value (arcs and rays)
    bool polar(double t, double& rho, double& psi) const {
        if (geom == Geometry::Arc) {
            rho = offset;
            psi = p0 + (p1 - p0) * t;
            return true;
        }
        if (geom == Geometry::Ray) {
            rho = p0 * std::pow(p1 / p0, t);
            psi = offset;
            return true;
        }
        return false;
    }

    Complex z_of_t(double t) const {
        double rho, psi;
        if (polar(t, rho, psi)) return std::polar(rho, psi);
        double x;
        if (geom == Geometry::SlogLineAbove) {
            const double u0 = std::asinh(p0 / slog_ref), u1 = std::asinh(p1 / slog_ref);
            x = slog_ref * std::sinh(u0 + (u1 - u0) * t);
        } else {
            x = p0 * std::pow(p1 / p0, t);
        }
        if ((t == 0.0 && exact_start) || (t == 1.0 && exact_end)) return Complex(x, 0.0);
        const double e = local_offset(offset, x);
        return Complex(x, geom == Geometry::GeomLineBelow ? -e : e);
    }
};

struct Contour {
    PowerSpec ps;
    std::shared_ptr<CauchyEvaluator> eval;
    std::vector<ContourSegment> segments;
    double delta = 0.0, eta = 0.0, eps_off = 0.0, theta = 0.0, epsilon = 0.0;
    double closure_gap = 0.0;        // max junction mismatch after assembly
    double arc8_max_abs = 0.0;       // max |G| over the large upper arc
    double a6_richardson = 0.0;      // continuity residual of the offset limits

    Complex evaluate(const ContourSegment& seg, double t) const {
        const Complex z = seg.z_of_t(t);
        Complex g = eval->upper(z);
        if (seg.region == Region::Sector) {
            double rho, psi;
            const Complex f = seg.polar(t, rho, psi) ? continued_density_polar(ps, rho, psi)
                                                     : continued_density(ps, z);
            g -= Complex(0.0, kTwoPi) * f;
        }
        return g;
    }

    void fill(ContourSegment& seg, int count) const {
        seg.samples.clear();
        seg.samples.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            const double t = static_cast<double>(i) / (count - 1);
            seg.samples.push_back({t, seg.z_of_t(t), evaluate(seg, t)});
        }
    }

    std::size_t total_samples() const {
        std::size_t n = 0;
        for (const auto& s : segments) n += s.samples.size();
        return n;
    }
};

namespace detail {

inline Complex eval_G(const PowerSpec& ps, const CauchyEvaluator& ev, Complex z, bool sector,
                      std::optional<std::pair<double, double>> polar = std::nullopt) {
    Complex g = ev.upper(z);
    if (sector) {
        const Complex f = polar ? continued_density_polar(ps, polar->first, polar->second)
                                : continued_density(ps, z);
        g -= Complex(0.0, kTwoPi) * f;
    }
    return g;
}

}  // namespace detail

struct ContourOptions {
    int samples_per_segment = 48;
    double offset_scale = 1e-7;  // eps_off = offset_scale * (B - A), clamped below delta
    double tol = 1e-11;
};

// Assembles the eight-piece contour: real segments either side of the
// support at +-i eps_off, the small circle of radius delta, the sector
// boundary ray, and the two eta arcs. delta comes from the small-z bound
// delta^(1+l) < pi alpha eps (safety factor 1/2, validated and halved until
// the asymptotic regime holds); eta doubles from 4 max(|A|,|B|) until the
// transform settles to its limit on the far arc.
inline Contour build_contour(const PowerSpec& ps, double epsilon, ContourOptions opt = {}) {
    if (!ps.in_regime())
        throw RegimeError("build_contour: exponent window outside the proven regime");
    if (!(ps.A > 0.0)) throw std::domain_error("build_contour: need A > 0");
    Contour c;
    c.ps = ps;
    c.eval = std::make_shared<CauchyEvaluator>(ps, opt.tol);
    c.theta = *ps.theta;
    c.epsilon = epsilon;
    const double eN = ps.terms.back().expo;
    const double alpha = ps.alpha_a3;

    // small radius: proof bound with safety 1/2, then validate the
    // asymptotic dominance and halve on failure
    double delta = 0.5 * std::pow(M_PI * alpha * epsilon, 1.0 / (1.0 + eN));
    delta = std::min(delta, 0.5 * ps.A);
    bool ok = false;
    for (int tries = 0; tries < 40 && !ok; ++tries) {
        ok = true;
        for (int j = 1; j <= 7 && ok; ++j) {
            const double psi = -c.theta * j / 8.0;
            const Complex G = detail::eval_G(ps, *c.eval, std::polar(delta, psi), true,
                                             std::make_pair(delta, psi));
            const Complex lead = -kTwoPi * alpha * detail::polar_pow(delta, psi, -(1.0 + eN));
            if (std::abs(G - lead) >= 0.5 * M_PI * alpha * std::pow(delta, -(1.0 + eN)))
                ok = false;
        }
        if (!ok) delta *= 0.5;
    }
    if (!ok) throw ToleranceError("build_contour: small-z asymptotic regime not reached");
    c.delta = delta;

    // large radius: require |G - far_field| < eps on the sector arc and
    // |G| < eps on the upper arc
    double eta = 4.0 * std::max(std::fabs(ps.A), std::fabs(ps.B));
    ok = false;
    for (int tries = 0; tries < 60 && !ok; ++tries) {
        ok = true;
        for (int j = 1; j <= 9 && ok; ++j) {
            const double psi = -c.theta * j / 10.0;
            const Complex G = detail::eval_G(ps, *c.eval, std::polar(eta, psi), true,
                                             std::make_pair(eta, psi));
            if (std::abs(G - ps.far_field) >= epsilon) ok = false;
        }
        for (int j = 1; j <= 9 && ok; ++j) {
            const double psi = M_PI * j / 10.0;
            if (std::abs(c.eval->upper(std::polar(eta, psi))) >= epsilon) ok = false;
        }
        if (!ok) eta *= 2.0;
    }
    if (!ok) throw ToleranceError("build_contour: decay assumption not certified");
    c.eta = eta;

    const double L = ps.B - ps.A;
    const double eps_off = std::min(opt.offset_scale * L, 0.1 * delta);
    c.eps_off = eps_off;
    const double psi_eta = std::asin(local_offset(eps_off, eta) / eta);
    const double eta_c = eta * std::cos(psi_eta);
    const double eps_d = local_offset(eps_off, delta);
    const double rho_d = std::hypot(delta, eps_d);
    const double psi_d = -std::asin(eps_d / rho_d);
    const int n = std::max(8, opt.samples_per_segment);

    auto seg = [&](int id, Region reg, ContourSegment::Geometry g, double p0, double p1,
                   double off, int count, bool ex0 = false, bool ex1 = false) {
        ContourSegment s;
        s.id = id;
        s.region = reg;
        s.geom = g;
        s.p0 = p0;
        s.p1 = p1;
        s.offset = off;
        s.slog_ref = delta;
        s.exact_start = ex0;
        s.exact_end = ex1;
        c.segments.push_back(std::move(s));
        c.fill(c.segments.back(), count);
    };

    using G = ContourSegment::Geometry;
    // c1: -eta_c + i eps_off -> A (pinned to the axis at A)
    seg(1, Region::Upper, G::SlogLineAbove, -eta_c, ps.A, eps_off, (3 * n) / 2, false, true);
    // c2: A -> delta - i eps_off
    seg(2, Region::Sector, G::GeomLineBelow, ps.A, delta, eps_off, n, true, false);
    // c3: circle of radius ~delta, psi_d -> -theta
    seg(3, Region::Sector, G::Arc, psi_d, -c.theta, rho_d, (3 * n) / 2);
    // c4: boundary ray, rho_d -> eta
    seg(4, Region::Sector, G::Ray, rho_d, eta, -c.theta, (3 * n) / 2);
    // c5: circle of radius eta, -theta -> -psi_eta
    seg(5, Region::Sector, G::Arc, -c.theta, -psi_eta, eta, n);
    // c6: eta_c - i eps_off -> B (pinned at B)
    seg(6, Region::Sector, G::GeomLineBelow, eta_c, ps.B, eps_off, n, false, true);
    // c7: B -> eta_c + i eps_off
    seg(7, Region::Upper, G::GeomLineAbove, ps.B, eta_c, eps_off, n, true, false);
    // c8: upper arc, psi_eta -> pi - psi_eta
    seg(8, Region::Upper, G::Arc, psi_eta, M_PI - psi_eta, eta, (3 * n) / 2);

    // junction closure (shared endpoints by construction; measure anyway)
    double gap = 0.0;
    for (std::size_t k = 0; k < c.segments.size(); ++k) {
        const auto& cur = c.segments[k].samples.back().z;
        const auto& nxt = c.segments[(k + 1) % c.segments.size()].samples.front().z;
        gap = std::max(gap, std::abs(cur - nxt));
    }
    c.closure_gap = gap;

    for (const auto& s : c.segments.back().samples)
        c.arc8_max_abs = std::max(c.arc8_max_abs, std::abs(s.G));

    // offset-limit continuity: first-order Richardson along e, e/2, e/4 with
    // the local offset of each checkpoint
    double a6 = 0.0;
    for (int sid : {1, 2, 6, 7}) {
        const auto& s = c.segments[static_cast<std::size_t>(sid - 1)];
        for (double t : {0.3, 0.5, 0.7}) {
            const Complex zb = s.z_of_t(t);
            const double x = zb.real();
            const double e0 = local_offset(eps_off, x);
            if (e0 <= 0.0) continue;
            const double sgn = (s.geom == G::GeomLineBelow) ? -1.0 : 1.0;
            auto at = [&](double e) {
                return detail::eval_G(ps, *c.eval, Complex(x, sgn * e),
                                      s.region == Region::Sector);
            };
            const Complex g1 = at(e0), g2 = at(0.5 * e0), g3 = at(0.25 * e0);
            a6 = std::max(a6, std::abs((2.0 * g2 - g1) - (2.0 * g3 - g2)));
        }
    }
    c.a6_richardson = a6;
    return c;
}

// ---- winding numbers -------------------------------------------------------

// Argument-principle count of a closed sampled curve around w. The curve
// must already be resolved: every step turn below pi/2 and the probe off
// the curve. The pre-rounding sum is checked to be integral to 1e-6.
inline int winding_number(std::span<const Complex> values, Complex w) {
    if (values.size() < 3) throw UnderResolvedError("winding_number: too few samples");
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const Complex v0 = values[i] - w;
        const Complex v1 = values[(i + 1) % values.size()] - w;
        if (std::abs(v0) < 1e-12 * (1.0 + std::abs(w)))
            throw ProbeTooCloseError("winding_number: probe too close to the image curve");
        const double d = std::arg(v1 / v0);
        if (std::fabs(d) >= M_PI / 2.0)
            throw UnderResolvedError("winding_number: step turn exceeds pi/2");
        sum += d;
    }
    const double turns = sum / kTwoPi;
    const double nearest = std::round(turns);
    if (std::fabs(turns - nearest) > 1e-6)
        throw UnderResolvedError("winding_number: total argument not integral");
    return static_cast<int>(nearest);
}

struct ProbeResult {
    Complex w{};
    int winding = 0;
    bool excluded = false;
    std::string note;
};

namespace detail {

// Winding with on-demand refinement: every step whose argument turn reaches
// pi/2 has its parameter interval bisected, all bad steps per sweep at once.
// Inserted samples persist on the contour and serve later probes.
inline ProbeResult winding_refined(Contour& c, Complex w, std::size_t insert_cap = 400000) {
    ProbeResult res;
    res.w = w;
    const double close_tol = 1e-9 * (1.0 + std::abs(w));
    for (int round = 0; round < 64; ++round) {
        double sum = 0.0;
        bool closeness = false;
        // per-segment list of sample indices i whose step (i-1, i) is bad
        std::vector<std::vector<std::size_t>> bad(c.segments.size());
        Complex prev{};
        Complex first{};
        bool have_prev = false;
        for (std::size_t si = 0; si < c.segments.size() && !closeness; ++si) {
            auto& seg = c.segments[si];
            for (std::size_t i = 0; i < seg.samples.size(); ++i) {
                const Complex v = seg.samples[i].G - w;
                if (std::abs(v) < close_tol) {
                    closeness = true;
                    break;
                }
                if (!have_prev) {
                    first = v;
                    have_prev = true;
                } else {
                    const double d = std::arg(v / prev);
                    if (std::fabs(d) >= M_PI / 2.0) {
                        if (i == 0)
                            throw ToleranceError("winding: junction step under-resolved");
                        bad[si].push_back(i);
                    }
                    sum += d;
                }
                prev = v;
            }
        }
        if (closeness) {
            res.excluded = true;
            res.note = "probe too close to image curve";
            return res;
        }
        std::size_t nbad = 0;
        for (const auto& b : bad) nbad += b.size();
        if (nbad > 0) {
            if (c.total_samples() + nbad > insert_cap)
                throw ToleranceError("winding: refinement cap exceeded");
            for (std::size_t si = 0; si < c.segments.size(); ++si) {
                auto& seg = c.segments[si];
                for (auto it = bad[si].rbegin(); it != bad[si].rend(); ++it) {
                    const std::size_t i = *it;
                    const double tm = 0.5 * (seg.samples[i - 1].t + seg.samples[i].t);
                    ContourSample ns{tm, seg.z_of_t(tm), c.evaluate(seg, tm)};
                    seg.samples.insert(seg.samples.begin() + static_cast<std::ptrdiff_t>(i), ns);
                }
            }
            continue;
        }
        sum += std::arg(first / prev);  // closing step (shared junction point)
        const double turns = sum / kTwoPi;
        const double nearest = std::round(turns);
        if (std::fabs(turns - nearest) > 1e-6) {
            res.excluded = true;
            res.note = "winding sum not integral after refinement";
            return res;
        }
        res.winding = static_cast<int>(nearest);
        return res;
    }
    throw ToleranceError("winding: refinement did not converge");
}

}  // namespace detail

// Log-polar probe grid in D_eps = { z in C^-: eps < |z| < 1/eps }: radii
// geometric between 2 eps and 1/(2 eps), angles strictly inside (-pi, 0).
inline std::vector<Complex> log_polar_probes(double epsilon, int n_radii = 10,
                                             int n_angles = 10) {
    std::vector<Complex> probes;
    probes.reserve(static_cast<std::size_t>(n_radii) * static_cast<std::size_t>(n_angles));
    const double r0 = 2.0 * epsilon, r1 = 1.0 / (2.0 * epsilon);
    for (int i = 0; i < n_radii; ++i) {
        const double r =
            n_radii == 1 ? r0 : r0 * std::pow(r1 / r0, static_cast<double>(i) / (n_radii - 1));
        for (int j = 0; j < n_angles; ++j) {
            const double phi = -M_PI * (j + 0.5) / n_angles;
            probes.push_back(std::polar(r, phi));
        }
    }
    return probes;
}

// ---- UI verification --------------------------------------------------------

struct AssumptionCheck {
    double residual = 0.0;
    bool pass = false;
};

struct UIReport {
    double r = 1.0;
    double epsilon = 0.0;
    double theta = 0.0, delta = 0.0, eta = 0.0;
    double far_field = 0.0;  // limit of G at infinity inside the sector
    bool boundary_case = false;
    std::vector<ProbeResult> probes;
    AssumptionCheck a2, a3, a4, a5, a6;
    bool windings_all_one = false;
    bool assumptions_pass = false;
    std::optional<Complex> witness;
    std::string verdict;  // "consistent-with-UI" or "violation-witness"
};

struct UIVerifyOptions {
    ContourOptions contour{};
    bool force = false;  // run outside the proven exponent window
    int a2_grid = 50;
    int a4_grid = 100;
};

inline UIReport ui_verify(const PowerSpec& ps_in, double epsilon,
                          std::span<const Complex> probes, UIVerifyOptions opt = {},
                          Contour* trace_out = nullptr) {
    PowerSpec ps = ps_in;
    if (!ps.in_regime()) {
        if (!opt.force)
            throw RegimeError("ui_verify: outside proven regime (no integer exponent window)");
        const double lN = ps.base.l.back();
        const int w = std::max(0, static_cast<int>(std::ceil(lN - 1.0 - 1e-9)));
        ps.window = w;
        ps.theta = M_PI / (ps.sexp * w + 1.0);
    }
    UIReport rep;
    rep.r = ps.r;
    rep.epsilon = epsilon;
    rep.far_field = ps.far_field;
    rep.boundary_case = ps.zero_decay;

    Contour c = build_contour(ps, epsilon, opt.contour);
    rep.theta = c.theta;
    rep.delta = c.delta;
    rep.eta = c.eta;

    // (A2) boundary values purely imaginary with the displayed signs
    {
        double worst = 0.0;
        bool signs = true;
        for (int i = 0; i < opt.a2_grid; ++i) {
            const double u = static_cast<double>(i) / (opt.a2_grid - 1);
            const double xl = ps.A * 0.01 * std::pow(99.9, u);  // [0.01 A, 0.999 A]
            const double xr = ps.B * (1.0 + 1e-3) * std::pow(100.0, u);
            const Complex fl = boundary_density_below(ps, xl);
            const Complex fr = boundary_density_below(ps, xr);
            worst = std::max({worst, std::fabs(fl.real()), std::fabs(fr.real())});
            if (!(fl.imag() < 0.0) || !(fr.imag() > 0.0)) signs = false;
        }
        rep.a2 = {worst, signs && worst <= 1e-12};
    }

    // (A3) small-z amplitude: f z^{1+e_N} / (-i alpha) -> 1 along a geometric
    // descent below delta (slow onset when the power map compresses scales)
    {
        const double eN = ps.terms.back().expo;
        const double psi = -0.5 * c.theta;
        double last = 0.0;
        bool shrinking = true;
        double first = -1.0;
        for (int j = 0; j <= 6; ++j) {
            const double rho = c.delta * std::pow(0.25, j);
            const Complex f = continued_density_polar(ps, rho, psi);
            const Complex ratio =
                f * detail::polar_pow(rho, psi, 1.0 + eN) / Complex(0.0, -ps.alpha_a3);
            last = std::abs(ratio - 1.0);
            if (first < 0.0) first = last;
        }
        if (last > 0.5 * first && last > 1e-9) shrinking = false;
        rep.a3 = {last, shrinking && last < 0.05};
    }

    // (A4) nonpositive real part on the boundary ray
    {
        double worst = -1e300;
        for (int i = 0; i < opt.a4_grid; ++i) {
            const double u = static_cast<double>(i) / (opt.a4_grid - 1);
            const double rho = 0.25 * c.delta * std::pow(16.0 * c.eta / c.delta, u);
            const Complex f = continued_density_polar(ps, rho, -c.theta);
            worst = std::max(worst, f.real());
        }
        rep.a4 = {worst, worst <= 1e-10};
    }

    // (A5) density settles to its far-field limit on the eta arc
    {
        const Complex flim =
            ps.zero_decay ? Complex(0.0, ps.sexp * ps.terms.front().coeff) : Complex(0.0, 0.0);
        double worst = 0.0;
        for (int j = 1; j <= 16; ++j) {
            const double psi = -c.theta * j / 17.0;
            const Complex f = continued_density_polar(ps, c.eta, psi);
            worst = std::max(worst, std::abs(f - flim));
        }
        rep.a5 = {worst, worst <= 0.05 * (1.0 + std::abs(flim))};
    }

    rep.a6 = {c.a6_richardson, c.a6_richardson <= 1e-6};

    bool all_one = true;
    std::optional<Complex> witness;
    for (const Complex& w : probes) {
        ProbeResult pr = detail::winding_refined(c, w);
        if (!pr.excluded && pr.winding != 1) {
            all_one = false;
            if (!witness) witness = w;
        }
        rep.probes.push_back(std::move(pr));
    }
    rep.windings_all_one = all_one;
    rep.assumptions_pass =
        rep.a2.pass && rep.a3.pass && rep.a4.pass && rep.a5.pass && rep.a6.pass;
    rep.witness = witness;
    rep.verdict = all_one ? "consistent-with-UI" : "violation-witness";
    if (trace_out) *trace_out = std::move(c);
    return rep;
}

inline UIReport ui_verify(const PowerSpec& ps, double epsilon, UIVerifyOptions opt = {}) {
    const auto probes = log_polar_probes(epsilon);
    return ui_verify(ps, epsilon, std::span<const Complex>(probes), opt);
}

inline UIReport ui_verify(const GpfpSpec& s, double r, double epsilon, UIVerifyOptions opt = {}) {
    return ui_verify(PowerSpec::from(s, r), epsilon, opt);
}

}  // namespace gpfp
