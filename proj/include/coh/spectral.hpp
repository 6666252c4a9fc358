#pragma once

// Periodic Hamiltonians with commensurate (integer-grid) spectra, state
// periods, integer energy distributions and their exact convolutions,
// and the Bezout search for the smallest copy count with two adjacent
// occupied energy levels.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <vector>

#include "coh/linalg.hpp"

namespace coh {

inline constexpr double tol_pmf = 1e-12;
inline constexpr std::size_t support_cap = 10'000'000;

// Finitely supported pmf over the integers, stored densely from
// min_support. First and last weights are nonzero after trimming.
class IntDist {
  public:
    IntDist() = default;
    IntDist(std::int64_t min_support, std::vector<double> weights)
        : min_(min_support), w_(std::move(weights)) {
        trim();
        double s = 0.0;
        for (double x : w_) {
            if (x < 0.0) throw Error("IntDist: negative weight");
            s += x;
        }
        if (std::abs(s - 1.0) > tol_pmf) throw Error("IntDist: weights do not sum to 1");
    }

    static IntDist point_mass(std::int64_t n) { return IntDist(n, {1.0}); }

    std::int64_t min_support() const { return min_; }
    std::int64_t max_support() const { return min_ + static_cast<std::int64_t>(w_.size()) - 1; }
    const std::vector<double>& weights() const { return w_; }

    double pmf(std::int64_t n) const {
        if (n < min_ || n > max_support()) return 0.0;
        return w_[static_cast<std::size_t>(n - min_)];
    }

    double mean() const {
        double m = 0.0;
        for (std::size_t i = 0; i < w_.size(); ++i) m += w_[i] * double(min_ + std::int64_t(i));
        return m;
    }
    double variance() const {
        const double m = mean();
        double v = 0.0;
        for (std::size_t i = 0; i < w_.size(); ++i) {
            const double d = double(min_ + std::int64_t(i)) - m;
            v += w_[i] * d * d;
        }
        return v;
    }

    std::vector<std::int64_t> support() const {
        std::vector<std::int64_t> s;
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] > 0.0) s.push_back(min_ + std::int64_t(i));
        return s;
    }

    IntDist shifted(std::int64_t k) const {
        IntDist d = *this;
        d.min_ += k;
        return d;
    }

  private:
    void trim() {
        std::size_t lo = 0, hi = w_.size();
        while (lo < hi && w_[lo] == 0.0) ++lo;
        while (hi > lo && w_[hi - 1] == 0.0) --hi;
        if (lo == hi) throw Error("IntDist: empty support");
        min_ += std::int64_t(lo);
        w_ = std::vector<double>(w_.begin() + lo, w_.begin() + hi);
    }

    std::int64_t min_ = 0;
    std::vector<double> w_;
};

inline IntDist convolve(const IntDist& p, const IntDist& q) {
    const std::size_t n = p.weights().size() + q.weights().size() - 1;
    if (n > support_cap) throw SupportOverflow("convolve: support exceeds cap");
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < p.weights().size(); ++i) {
        const double pi = p.weights()[i];
        if (pi == 0.0) continue;
        for (std::size_t j = 0; j < q.weights().size(); ++j) w[i + j] += pi * q.weights()[j];
    }
    // renormalize accumulated round-off
    double s = 0.0;
    for (double x : w) s += x;
    for (double& x : w) x /= s;
    return IntDist(p.min_support() + q.min_support(), std::move(w));
}

inline IntDist convolve_power(const IntDist& p, std::uint64_t m) {
    if (m < 1) throw Error("convolve_power: m must be >= 1");
    IntDist result = IntDist::point_mass(0);
    IntDist base = p;
    while (m > 0) {
        if (m & 1) result = convolve(result, base);
        m >>= 1;
        if (m > 0) base = convolve(base, base);
    }
    return result;
}

// Hermitian generator whose occupied spectrum sits on the integer grid
// E = E_0 + n * (2*pi/tau). level_of[i] is the grid integer of the i-th
// level-basis vector; the optional basis maps level basis -> working basis.
struct PeriodicHamiltonian {
    double tau = 1.0;
    double offset = 0.0;                 // E_0 shift applied so the grid passes through 0
    std::vector<std::int64_t> level_of;  // per level-basis column
    Matrix basis;                        // unitary; identity when trivial

    std::size_t dim() const { return level_of.size(); }

    static PeriodicHamiltonian from_levels(double tau, std::vector<std::int64_t> levels,
                                           double offset = 0.0, Matrix basis = {}) {
        PeriodicHamiltonian h;
        h.tau = tau;
        h.offset = offset;
        h.level_of = std::move(levels);
        h.basis = basis.rows() == 0 ? Matrix::identity(h.level_of.size()) : std::move(basis);
        if (h.basis.rows() != h.dim() || h.basis.cols() != h.dim())
            throw DimensionMismatch("PeriodicHamiltonian: basis shape");
        return h;
    }

    double unit() const { return 2.0 * std::numbers::pi / tau; }

    // H including the recorded offset, in the working basis.
    Matrix matrix() const {
        const std::size_t n = dim();
        Matrix d(n, n);
        for (std::size_t i = 0; i < n; ++i) d(i, i) = offset + double(level_of[i]) * unit();
        return basis * d * adjoint(basis);
    }

    // e^{-iHt} in the working basis, using the offset-free integer grid
    // (ground level pinned to zero; the offset only adds a global phase).
    Matrix evolution(double t) const {
        const std::size_t n = dim();
        Matrix d(n, n);
        for (std::size_t i = 0; i < n; ++i)
            d(i, i) = std::exp(cplx(0.0, -double(level_of[i]) * unit() * t));
        return basis * d * adjoint(basis);
    }
};

inline PeriodicHamiltonian snap_hermitian(const Matrix& h, double tau, double tol_snap = 1e-6) {
    auto eig = hermitian_eig(h);
    const double unit = 2.0 * std::numbers::pi / tau;
    const double e_min = eig.values.front();
    std::vector<std::int64_t> levels(eig.values.size());
    for (std::size_t i = 0; i < eig.values.size(); ++i) {
        const double x = (eig.values[i] - e_min) / unit;
        const double r = std::round(x);
        if (std::abs(x - r) * unit > tol_snap)
            throw NotCommensurate("snap_hermitian: level off the 2*pi/tau grid");
        levels[i] = static_cast<std::int64_t>(r);
    }
    return PeriodicHamiltonian::from_levels(tau, std::move(levels), e_min, eig.vectors);
}

inline IntDist energy_distribution(const PureState& psi, const PeriodicHamiltonian& h) {
    if (psi.dim() != h.dim()) throw DimensionMismatch("energy_distribution: dims differ");
    const PureState in_levels = apply(adjoint(h.basis), psi);
    std::int64_t lo = h.level_of.front(), hi = h.level_of.front();
    for (auto n : h.level_of) {
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    std::vector<double> w(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (std::size_t i = 0; i < h.dim(); ++i)
        w[static_cast<std::size_t>(h.level_of[i] - lo)] += std::norm(in_levels[i]);
    double s = 0.0;
    for (double x : w) s += x;
    for (double& x : w) x /= s;
    return IntDist(lo, std::move(w));
}

// Period of |psi> under h: tau / gcd of occupied level gaps.
// nullopt = stationary (single occupied level).
inline std::optional<double> state_period(const PureState& psi, const PeriodicHamiltonian& h) {
    const auto support = energy_distribution(psi, h).support();
    if (support.size() < 2) return std::nullopt;
    std::int64_t g = 0;
    for (auto n : support) g = std::gcd(g, n - support.front());
    return h.tau / double(g);
}

namespace detail {

// Chained extended gcd over a set; returns gcd and Bezout coefficients.
inline std::pair<std::int64_t, std::vector<std::int64_t>> bezout(const std::vector<std::int64_t>& a) {
    auto ext = [](std::int64_t x, std::int64_t y) {
        std::int64_t r0 = x, r1 = y, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
        while (r1 != 0) {
            const std::int64_t q = r0 / r1;
            std::swap(r0 -= q * r1, r1);
            std::swap(s0 -= q * s1, s1);
            std::swap(t0 -= q * t1, t1);
        }
        return std::array<std::int64_t, 3>{r0, s0, t0};
    };
    std::int64_t g = a[0];
    std::vector<std::int64_t> x{1};
    for (std::size_t i = 1; i < a.size(); ++i) {
        auto [g2, u, v] = ext(g, a[i]);
        for (auto& xi : x) xi *= u;
        x.push_back(v);
        g = g2;
    }
    if (g < 0) {
        g = -g;
        for (auto& xi : x) xi = -xi;
    }
    return {g, std::move(x)};
}

} // namespace detail

// Smallest L such that p^{*L} has two adjacent occupied integers.
// Occupancy is tracked combinatorially (boolean reachability), never by
// comparing float weights to a threshold. nullopt = no finite L.
inline std::optional<std::uint64_t> minimal_adjacent_L(const IntDist& p) {
    const auto support = p.support();
    if (support.size() < 2) return std::nullopt;

    std::vector<std::int64_t> gaps;
    for (std::size_t i = 1; i < support.size(); ++i) gaps.push_back(support[i] - support.front());
    auto [g, coeffs] = detail::bezout(gaps);
    if (g != 1) return std::nullopt;

    std::uint64_t l_bez = 0;
    for (auto x : coeffs) l_bez += static_cast<std::uint64_t>(std::abs(x));

    const std::int64_t span = support.back() - support.front();
    std::vector<char> occ(static_cast<std::size_t>(span) + 1, 0);
    for (auto n : support) occ[static_cast<std::size_t>(n - support.front())] = 1;
    std::vector<char> cur = occ;
    for (std::uint64_t l = 1; l <= l_bez; ++l) {
        for (std::size_t i = 0; i + 1 < cur.size(); ++i)
            if (cur[i] && cur[i + 1]) return l;
        if (l == l_bez) break;
        std::vector<char> next(cur.size() + occ.size() - 1, 0);
        for (std::size_t i = 0; i < cur.size(); ++i)
            if (cur[i])
                for (std::size_t j = 0; j < occ.size(); ++j)
                    if (occ[j]) next[i + j] = 1;
        cur = std::move(next);
    }
    // Bezout coefficients guarantee adjacency by L = sum |x_i|; reaching here means a bug.
    throw Error("minimal_adjacent_L: Bezout bound exhausted without adjacency");
}

} // namespace coh
