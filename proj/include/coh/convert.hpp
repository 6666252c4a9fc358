#pragma once

// State conversion under time-translation-invariant (TI) operations:
// single-copy conversion by integer energy shift, the many-copy conversion
// simulator, rate and converse bounds, a seeded TI-channel generator for
// monotonicity experiments, and the fidelity-gap stability inequality.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>

#include "coh/linalg.hpp"
#include "coh/qfi.hpp"
#include "coh/spectral.hpp"

namespace coh {

struct ConversionReport {
    std::uint64_t n_in = 1;
    std::uint64_t n_out = 1;
    double rate = 1.0;
    std::int64_t shift = 0;
    double overlap = 1.0;
    double trace_error = 0.0;
    double error_upper_bound = std::numeric_limits<double>::infinity();
    double converse_floor = 0.0;
};

// Best integer shift k maximizing the Bhattacharyya overlap
// sum_n sqrt(p1(n) p2(n+k)). Ties: smallest |k|, then smallest k.
inline std::pair<std::int64_t, double> optimal_shift(const IntDist& p1, const IntDist& p2) {
    const std::int64_t klo = p2.min_support() - p1.max_support();
    const std::int64_t khi = p2.max_support() - p1.min_support();
    std::int64_t best_k = klo;
    double best = -1.0;
    for (std::int64_t k = klo; k <= khi; ++k) {
        double s = 0.0;
        for (std::int64_t n = p1.min_support(); n <= p1.max_support(); ++n)
            s += std::sqrt(p1.pmf(n) * p2.pmf(n + k));
        const bool better =
            s > best + 1e-15 ||
            (s > best - 1e-15 &&
             (std::abs(k) < std::abs(best_k) || (std::abs(k) == std::abs(best_k) && k < best_k)));
        if (better) {
            best = s;
            best_k = k;
        }
    }
    return {best_k, std::min(best, 1.0)};
}

// g(T) = T^{T/(1-T)} - T^{1/(1-T)}; continuous limits g(0+) = 1, g(1-) = 0.
inline double monotonicity_gap(double t) {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    return std::pow(t, t / (1.0 - t)) - std::pow(t, 1.0 / (1.0 - t));
}

// Error floor for converting resources at ratio T = F_in/(R * F_out) < 1.
inline double min_error_floor(double f_in, double f_out, double rate) {
    const double t = f_in / (rate * f_out);
    if (t >= 1.0) return 0.0;
    const double g = monotonicity_gap(t);
    return (g / 4.0) * (g / 4.0);
}

namespace detail {

inline void check_common_period(const PeriodicHamiltonian& h1, const PeriodicHamiltonian& h2) {
    if (std::abs(h1.tau - h2.tau) > 1e-12 * std::max(h1.tau, h2.tau))
        throw PeriodMismatch("conversion: base periods differ");
}

inline ConversionReport report_from_dists(const IntDist& p1, const IntDist& p2) {
    ConversionReport r;
    std::tie(r.shift, r.overlap) = optimal_shift(p1, p2);
    r.trace_error = std::sqrt(std::max(0.0, 1.0 - r.overlap * r.overlap));
    double l1 = 0.0;
    const std::int64_t lo = std::min(p1.min_support(), p2.min_support() - r.shift);
    const std::int64_t hi = std::max(p1.max_support(), p2.max_support() - r.shift);
    for (std::int64_t n = lo; n <= hi; ++n) l1 += std::abs(p1.pmf(n) - p2.pmf(n + r.shift));
    r.error_upper_bound = std::sqrt(l1);
    return r;
}

} // namespace detail

// Single-copy conversion error between pure states on a common base period.
inline ConversionReport single_copy_error(const PureState& psi1, const PeriodicHamiltonian& h1,
                                          const PureState& psi2, const PeriodicHamiltonian& h2) {
    detail::check_common_period(h1, h2);
    return detail::report_from_dists(energy_distribution(psi1, h1),
                                     energy_distribution(psi2, h2));
}

// Many-copy conversion psi1^{x n} -> psi2^{x ceil(R n)} by distribution
// matching. The reported error is what this protocol class achieves — an
// upper bound on the optimum at finite n, not the optimum itself.
inline ConversionReport iid_convert(const PureState& psi1, const PeriodicHamiltonian& h1,
                                    const PureState& psi2, const PeriodicHamiltonian& h2,
                                    double rate, std::uint64_t n) {
    detail::check_common_period(h1, h2);
    const std::uint64_t n_out = std::uint64_t(std::ceil(rate * double(n) - 1e-12));
    const IntDist p_in = convolve_power(energy_distribution(psi1, h1), n);
    const IntDist p_out = convolve_power(energy_distribution(psi2, h2), n_out);

    ConversionReport r = detail::report_from_dists(p_in, p_out);
    r.n_in = n;
    r.n_out = n_out;
    r.rate = rate;

    const double v1 = variance(psi1, h1.matrix());
    const double v2 = variance(psi2, h2.matrix());
    r.converse_floor = min_error_floor(4.0 * v1, 4.0 * v2, rate);
    const double q = h1.tau * v1 / (2.0 * std::numbers::pi);
    if (rate <= v1 / v2 && q > 0.0)
        r.error_upper_bound = (q / rate + 2.0) / std::sqrt(q * double(n));
    else
        r.error_upper_bound = std::numeric_limits<double>::infinity();
    return r;
}

// Maximal conversion rate bound F_in / F_out; +inf when the target carries
// no coherence.
inline double rate_bound(const DensityOperator& rho1, const Matrix& h1,
                         const DensityOperator& rho2, const Matrix& h2) {
    const double f_out = qfi(rho2, h2).value;
    if (f_out <= 1e-12) return std::numeric_limits<double>::infinity();
    return qfi(rho1, h1).value / f_out;
}

struct TiChannel {
    std::vector<Matrix> kraus;
    PeriodicHamiltonian h_in;
    PeriodicHamiltonian h_out;

    Matrix apply(const Matrix& rho) const {
        Matrix out(kraus.front().rows(), kraus.front().rows());
        for (const Matrix& k : kraus) out = out + k * rho * adjoint(k);
        return out;
    }

    double completeness_defect() const {
        Matrix s(kraus.front().cols(), kraus.front().cols());
        for (const Matrix& k : kraus) s = s + adjoint(k) * k;
        return fro_norm(s - Matrix::identity(s.rows()));
    }
};

// Worst covariance residual ||U_out(t) E(rho) U_out(t)^† - E(U_in(t) rho U_in(t)^†)||_F
// over seeded random times and states.
inline double covariance_residual(const TiChannel& ch, std::uint64_t seed = 7,
                                  std::size_t n_times = 8, std::size_t n_states = 5) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut(0.0, ch.h_in.tau);
    double worst = 0.0;
    for (std::size_t i = 0; i < n_times; ++i) {
        const double t = ut(rng);
        const Matrix uin = ch.h_in.evolution(t);
        const Matrix uout = ch.h_out.evolution(t);
        for (std::size_t j = 0; j < n_states; ++j) {
            const Matrix rho = random_density(ch.h_in.dim(), ch.h_in.dim(), rng()).matrix();
            const Matrix lhs = uout * ch.apply(rho) * adjoint(uout);
            const Matrix rhs = ch.apply(uin * rho * adjoint(uin));
            worst = std::max(worst, fro_norm(lhs - rhs));
        }
    }
    return worst;
}

// Random TI channel: couple the system to a uniformly mixed diagonal
// ancilla, apply an independent Haar unitary on each total-energy
// eigenspace, and trace the ancilla out.
inline TiChannel make_ti_channel(const PeriodicHamiltonian& h_s,
                                 const std::vector<std::int64_t>& ancilla_levels,
                                 std::uint64_t seed) {
    const std::size_t d = h_s.dim();
    const std::size_t da = ancilla_levels.size();
    const double lam = 1.0 / double(da);

    // group joint level-basis indices (i, a) by total integer level
    std::map<std::int64_t, std::vector<std::pair<std::size_t, std::size_t>>> blocks;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t a = 0; a < da; ++a)
            blocks[h_s.level_of[i] + ancilla_levels[a]].emplace_back(i, a);

    // full joint unitary, block diagonal over total-energy eigenspaces
    std::mt19937_64 rng(seed);
    Matrix u(d * da, d * da);
    for (const auto& [lvl, idx] : blocks) {
        const Matrix ub = random_unitary(idx.size(), rng());
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c)
                u(idx[r].first * da + idx[r].second, idx[c].first * da + idx[c].second) = ub(r, c);
    }

    TiChannel ch;
    ch.h_in = h_s;
    ch.h_out = h_s;
    for (std::size_t a = 0; a < da; ++a)
        for (std::size_t b = 0; b < da; ++b) {
            Matrix k(d, d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) k(i, j) = std::sqrt(lam) * u(i * da + b, j * da + a);
            // conjugate back into the working basis
            ch.kraus.push_back(h_s.basis * k * adjoint(h_s.basis));
        }
    return ch;
}

// Full dephasing onto the energy eigenspaces — the simplest TI channel.
inline TiChannel dephasing_channel(const PeriodicHamiltonian& h_s) {
    std::vector<std::int64_t> levels = h_s.level_of;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    TiChannel ch;
    ch.h_in = h_s;
    ch.h_out = h_s;
    for (std::int64_t lvl : levels) {
        Matrix p(h_s.dim(), h_s.dim());
        for (std::size_t i = 0; i < h_s.dim(); ++i)
            if (h_s.level_of[i] == lvl) p(i, i) = 1.0;
        ch.kraus.push_back(h_s.basis * p * adjoint(h_s.basis));
    }
    return ch;
}

// Stability of root fidelity under a common unitary:
// |sqrtFid(U t1 U†, t1) - sqrtFid(U t2 U†, t2)| <= 4 sqrt(1 - sqrtFid(t1, t2)).
inline std::pair<double, double> lemma_fid_gap(const Matrix& u, const DensityOperator& tau1,
                                               const DensityOperator& tau2) {
    if (u.rows() != tau1.dim() || tau1.dim() != tau2.dim())
        throw DimensionMismatch("lemma_fid_gap: dims differ");
    auto rotated = [&](const DensityOperator& t) {
        return DensityOperator(u * t.matrix() * adjoint(u));
    };
    const double a = std::sqrt(fidelity(rotated(tau1), tau1));
    const double b = std::sqrt(fidelity(rotated(tau2), tau2));
    const double lhs = std::abs(a - b);
    const double rhs = 4.0 * std::sqrt(std::max(0.0, 1.0 - std::sqrt(fidelity(tau1, tau2))));
    return {lhs, rhs};
}

} // namespace coh
