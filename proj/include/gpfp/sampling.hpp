#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gpfp/dist.hpp"
#include "gpfp/moments.hpp"

namespace gpfp {

// Tabulated inverse cdf: cdf values on a uniform angle grid (accumulated
// panel by panel with a small Gauss rule), inverted per draw by monotone
// cubic Hermite pieces whose end slopes are the exact density.
class InverseCdfTable {
  public:
    explicit InverseCdfTable(const GpfpSpec& s, int panels = 2048) : spec_(s) {
        const double m = 0.5 * (s.a + s.b), h = 0.5 * (s.b - s.a);
        x_.resize(static_cast<std::size_t>(panels) + 1);
        c_.resize(x_.size());
        p_.resize(x_.size());
        auto integrand = [&](double th) {
            const double sn = std::sin(th);
            const double xt = m + h * std::cos(th);
            return s.norm * h * h * sn * sn * gpfp_coeff_sum(s, xt) / xt;
        };
        // ascending x corresponds to descending angle
        double acc = 0.0;
        for (int j = 0; j <= panels; ++j) {
            const double th = M_PI * (1.0 - static_cast<double>(j) / panels);
            x_[static_cast<std::size_t>(j)] = m + h * std::cos(th);
            if (j > 0) {
                const double thp = M_PI * (1.0 - static_cast<double>(j - 1) / panels);
                acc += gauss7(integrand, th, thp);
            }
            c_[static_cast<std::size_t>(j)] = acc;
            p_[static_cast<std::size_t>(j)] = gpfp_pdf(s, x_[static_cast<std::size_t>(j)]);
        }
        total_ = acc;
        for (auto& v : c_) v /= total_;
        for (auto& v : p_) v /= total_;
        c_.front() = 0.0;
        c_.back() = 1.0;
    }

    double mass() const { return total_; }

    double invert(double u) const {
        u = std::clamp(u, 1e-16, 1.0 - 1e-16);
        const auto it = std::upper_bound(c_.begin(), c_.end(), u);
        const std::size_t j = static_cast<std::size_t>(
            std::clamp<std::ptrdiff_t>(it - c_.begin() - 1, 0,
                                       static_cast<std::ptrdiff_t>(c_.size()) - 2));
        const double x0 = x_[j], x1 = x_[j + 1], dx = x1 - x0;
        const double c0 = c_[j], c1 = c_[j + 1];
        if (c1 <= c0) return 0.5 * (x0 + x1);
        // Hermite cubic for the cdf on [x0, x1], Newton in the local variable
        const double d0 = p_[j] * dx, d1 = p_[j + 1] * dx, dc = c1 - c0;
        double t = (u - c0) / dc;
        for (int it2 = 0; it2 < 4; ++it2) {
            const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
            const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
            const double val = c0 * h00 + d0 * h10 + c1 * h01 + d1 * h11 - u;
            const double dh00 = 6 * t * (t - 1), dh10 = (1 - t) * (1 - 3 * t);
            const double dh01 = 6 * t * (1 - t), dh11 = t * (3 * t - 2);
            const double der = c0 * dh00 + d0 * dh10 + c1 * dh01 + d1 * dh11;
            if (der <= 0.0) break;
            t -= val / der;
            t = std::clamp(t, 0.0, 1.0);
        }
        return x0 + t * dx;
    }

  private:
    template <class F>
    static double gauss7(F& f, double lo, double hi) {
        static constexpr double xs[4] = {0.0, 0.405845151377397, 0.741531185599394,
                                         0.949107912342759};
        static constexpr double ws[4] = {0.417959183673469, 0.381830050505119,
                                         0.279705391489277, 0.129484966168870};
        const double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        double acc = ws[0] * f(m);
        for (int i = 1; i < 4; ++i) acc += ws[i] * (f(m - h * xs[i]) + f(m + h * xs[i]));
        return h * acc;
    }

    GpfpSpec spec_;
    std::vector<double> x_, c_, p_;
    double total_ = 0.0;
};

// Deterministic i.i.d. draws by inverse cdf. The uniform variates come from
// an explicit 53-bit construction so streams are reproducible across
// standard libraries.
inline std::vector<double> sample(const GpfpSpec& s, std::uint64_t seed, std::size_t count) {
    validate_params(s);
    const double mass = gpfp_mass(s, 1e-10);
    if (std::fabs(mass - 1.0) > 1e-6)
        throw std::domain_error("sample: spec is not normalized (mass != 1)");
    std::vector<double> out;
    out.reserve(count);
    if (count == 0) return out;
    const InverseCdfTable table(s);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        out.push_back(table.invert(u));
    }
    return out;
}

}  // namespace gpfp
