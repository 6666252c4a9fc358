#pragma once

// Translated-Poisson approximation of integer distributions and two
// total-variation error bounds: a smoothing bound driven by the variance,
// and a second-order bound using factorial moments and the distribution's
// own smoothness.

#include <cmath>
#include <cstdint>
#include <optional>

#include "coh/spectral.hpp"

namespace coh {

inline constexpr double tail_eps = 1e-14;

// Poisson pmf truncated where the tail mass drops below tail_eps, then
// renormalized. Computed in log space for stability.
inline IntDist poisson_pmf(double lambda) {
    if (!(lambda > 0.0)) return IntDist::point_mass(0);
    const std::int64_t mode = std::int64_t(std::floor(lambda));
    auto logp = [&](std::int64_t n) {
        return -lambda + double(n) * std::log(lambda) - std::lgamma(double(n) + 1.0);
    };
    std::int64_t lo = mode, hi = mode;
    while (lo > 0 && std::exp(logp(lo - 1)) > tail_eps) --lo;
    while (std::exp(logp(hi + 1)) > tail_eps) ++hi;
    std::vector<double> w;
    w.reserve(std::size_t(hi - lo + 1));
    double s = 0.0;
    for (std::int64_t n = lo; n <= hi; ++n) {
        const double v = std::exp(logp(n));
        w.push_back(v);
        s += v;
    }
    for (auto& v : w) v /= s;
    return IntDist(lo, std::move(w));
}

// Translated Poisson TP(mu, sigma^2): integer shift s = floor(mu - sigma^2),
// fractional remainder folded into the Poisson rate.
inline IntDist translated_poisson(double mu, double var) {
    const double s = std::floor(mu - var);
    const double gamma = mu - var - s;
    return poisson_pmf(var + gamma).shifted(std::int64_t(s));
}

inline double tv_distance(const IntDist& a, const IntDist& b) {
    const std::int64_t lo = std::min(a.min_support(), b.min_support());
    const std::int64_t hi = std::max(a.max_support(), b.max_support());
    double s = 0.0;
    for (std::int64_t n = lo; n <= hi; ++n) s += std::abs(a.pmf(n) - b.pmf(n));
    return 0.5 * s;
}

// Smoothness of p: nu = min{1/2, 1 - d_TV(p, p shifted by 1)}.
inline double shift_smoothness(const IntDist& p) {
    return std::min(0.5, 1.0 - tv_distance(p, p.shifted(1)));
}

// TV bound between TP(mu, s^2) and TP(mu + x, s^2): the smaller of the
// direct shift count and the smoothed estimate sqrt(2/e)(sqrt(s^2+x) - s).
inline double adell_bound(double var, double x) {
    const double direct = x;
    const double smoothed = std::sqrt(2.0 / std::numbers::e) * (std::sqrt(var + x) - std::sqrt(var));
    return std::min(direct, smoothed);
}

// Second-order translated-Poisson bound for the m-fold convolution of p:
//   c / sqrt(m*b - 1/2) + 2 / (m*a),
// with a the variance of p, b its shift smoothness nu, and c = phi / a where
//   phi = a*E[X(X-1)] + |mu - a|*E[(X-1)(X-2)] + E|X(X-1)(X-2)|,
// all factorial moments summed exactly over the finite support.
// Inapplicable (nullopt) when the variance vanishes, nu = 0, or m*b <= 1/2.
inline std::optional<double> bc_bound(const IntDist& p, std::uint64_t m) {
    const double a = p.variance();
    if (a <= 0.0) return std::nullopt;
    const double b = shift_smoothness(p);
    if (b <= 0.0 || double(m) * b <= 0.5) return std::nullopt;

    const double mu = p.mean();
    double f1 = 0.0, f2 = 0.0, f3 = 0.0;
    for (std::int64_t n = p.min_support(); n <= p.max_support(); ++n) {
        const double x = double(n), w = p.pmf(n);
        f1 += w * x * (x - 1.0);
        f2 += w * (x - 1.0) * (x - 2.0);
        f3 += w * std::abs(x * (x - 1.0) * (x - 2.0));
    }
    const double phi = a * f1 + std::abs(mu - a) * f2 + f3;
    const double c = phi / a;
    return c / std::sqrt(double(m) * b - 0.5) + 2.0 / (double(m) * a);
}

} // namespace coh
