#pragma once

// Coherence-cost accounting: the c-bit reference unit, the cost formula,
// the ensemble preparation rate, a typical-string preparation simulator,
// and a converse self-check.

#include <cmath>
#include <cstdint>
#include <random>

#include "coh/convert.hpp"
#include "coh/roof.hpp"

namespace coh {

// Reference coherence unit: (|0> + |1>)/sqrt(2) under H = pi sigma_z / tau,
// i.e. integer levels {0, 1} with offset -pi/tau. Variance (pi/tau)^2,
// information value (2 pi/tau)^2.
struct CBit {
    double tau;
    PureState state;
    PeriodicHamiltonian hamiltonian;

    explicit CBit(double tau_ = 2.0 * std::numbers::pi)
        : tau(tau_),
          state(std::vector<cplx>{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}),
          hamiltonian(PeriodicHamiltonian::from_levels(tau_, {0, 1}, -std::numbers::pi / tau_)) {}
};

struct ProtocolReport {
    std::uint64_t m = 0;
    double delta = 0.0;
    double p_err = 0.0;
    double cbit_rate = 0.0;
    double target_cost = 0.0;
    double achieved_error = 0.0;
};

// Cost in c-bits per copy: (tau_rho / 2 pi)^2 * qfi, with tau_rho the
// state's own period under h. Incoherent states cost nothing.
inline double coherence_cost(const DensityOperator& rho, const PeriodicHamiltonian& h) {
    const auto period = density_period(rho, h);
    if (!period) return 0.0;
    const double f = qfi(rho, h.matrix()).value;
    const double u = *period / (2.0 * std::numbers::pi);
    return u * u * f;
}

// Rate of the typical-set preparation protocol at slack delta:
// sum_l (q_l + delta) V(eta_l) / (pi/tau)^2. The base period tau must be
// the joint period of the ensemble (gap gcd 1 across members).
inline double protocol_rate(const Ensemble& e, const PeriodicHamiltonian& h, double delta,
                            double tau) {
    std::int64_t joint_gcd = 0;
    for (const auto& [q, eta] : e.members) {
        const auto support = energy_distribution(eta, h).support();
        for (std::size_t i = 1; i < support.size(); ++i)
            joint_gcd = std::gcd(joint_gcd, support[i] - support[0]);
    }
    if (joint_gcd > 1)
        throw EnsemblePeriodViolation("protocol_rate: ensemble period is a fraction of tau");

    const double v_cbit = std::pow(std::numbers::pi / tau, 2.0);
    double r = 0.0;
    for (const auto& [q, eta] : e.members) r += (q + delta) * variance(eta, h.matrix()) / v_cbit;
    return r;
}

namespace detail {

// P(some member frequency leaves [q_l - delta, q_l + delta]) under a
// multinomial(m, q) draw, summed exactly for small ensembles.
inline double atypical_prob_exact(const std::vector<double>& q, std::uint64_t m, double delta) {
    const std::size_t k = q.size();
    std::vector<double> lg(m + 1);
    for (std::uint64_t i = 1; i <= m; ++i) lg[i] = lg[i - 1] + std::log(double(i));
    auto typical = [&](std::uint64_t n, double ql) {
        return std::abs(double(n) / double(m) - ql) <= delta + 1e-15;
    };
    double p_typ = 0.0;
    if (k == 1) {
        p_typ = typical(m, q[0]) ? 1.0 : 0.0;
    } else if (k == 2) {
        for (std::uint64_t n1 = 0; n1 <= m; ++n1) {
            if (!typical(n1, q[0]) || !typical(m - n1, q[1])) continue;
            p_typ += std::exp(lg[m] - lg[n1] - lg[m - n1] + double(n1) * std::log(q[0]) +
                              double(m - n1) * std::log(q[1]));
        }
    } else {
        for (std::uint64_t n1 = 0; n1 <= m; ++n1)
            for (std::uint64_t n2 = 0; n1 + n2 <= m; ++n2) {
                const std::uint64_t n3 = m - n1 - n2;
                if (!typical(n1, q[0]) || !typical(n2, q[1]) || !typical(n3, q[2])) continue;
                p_typ += std::exp(lg[m] - lg[n1] - lg[n2] - lg[n3] + double(n1) * std::log(q[0]) +
                                  double(n2) * std::log(q[1]) + double(n3) * std::log(q[2]));
            }
    }
    return std::max(0.0, 1.0 - p_typ);
}

inline double atypical_prob_mc(const std::vector<double>& q, std::uint64_t m, double delta,
                               std::uint64_t trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::size_t> pick(q.begin(), q.end());
    std::uint64_t bad = 0;
    std::vector<std::uint64_t> counts(q.size());
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::uint64_t i = 0; i < m; ++i) ++counts[pick(rng)];
        for (std::size_t l = 0; l < q.size(); ++l)
            if (std::abs(double(counts[l]) / double(m) - q[l]) > delta + 1e-15) {
                ++bad;
                break;
            }
    }
    return double(bad) / double(trials);
}

} // namespace detail

// Simulate the typical-set preparation of rho^{x m}: sample a member
// string, fall back to a fixed incoherent state when atypical, and prepare
// each member block from c-bits. achieved_error stacks the atypicality
// probability on top of the per-block conversion errors.
inline ProtocolReport typicality_simulate(const DensityOperator& rho, const PeriodicHamiltonian& h,
                                          double delta, std::uint64_t m, std::uint64_t trials = 20000,
                                          std::uint64_t seed = 1) {
    const Ensemble e = yu_ensemble(rho, h.matrix());
    std::vector<double> q;
    for (const auto& [ql, eta] : e.members) q.push_back(ql);

    ProtocolReport r;
    r.m = m;
    r.delta = delta;
    r.target_cost = coherence_cost(rho, h);
    const double tau_rho = density_period(rho, h).value_or(h.tau);
    r.cbit_rate = protocol_rate(e, h, delta, tau_rho);
    r.p_err = (q.size() <= 3 && m <= 200) ? detail::atypical_prob_exact(q, m, delta)
                                          : detail::atypical_prob_mc(q, m, delta, trials, seed);

    // per-block preparation error: convert c-bits into ceil(m (q_l + delta))
    // copies of each coherent member at a rate just under the variance ratio
    const CBit cb(h.tau);
    const double v_cb = variance(cb.state, cb.hamiltonian.matrix());
    double conv_err = 0.0;
    for (const auto& [ql, eta] : e.members) {
        const double v = variance(eta, h.matrix());
        if (v <= 1e-14) continue; // stationary blocks are free
        const std::uint64_t m_l = std::uint64_t(std::ceil(double(m) * (ql + delta) - 1e-12));
        const std::uint64_t n_in =
            std::uint64_t(std::ceil(double(m_l) * v / v_cb * (1.0 + delta + 1.0 / double(m)))) + 1;
        const double rate = double(m_l) / double(n_in);
        conv_err += iid_convert(cb.state, cb.hamiltonian, eta, h, rate, n_in).trace_error;
    }
    r.achieved_error = std::min(1.0, r.p_err + conv_err);
    return r;
}

enum class ConverseVerdict { Consistent, Violation };

// Self-check against the preparation converse: spending c-bits at rate R
// below the cost forces an error of at least (g(T)/4)^2 with T = R / cost.
inline ConverseVerdict cost_converse(const DensityOperator& rho, const PeriodicHamiltonian& h,
                                     double rate, double delta_observed) {
    const double cost = coherence_cost(rho, h);
    if (rate >= cost) return ConverseVerdict::Consistent;
    const double g = monotonicity_gap(rate / cost);
    return delta_observed < (g / 4.0) * (g / 4.0) ? ConverseVerdict::Violation
                                                  : ConverseVerdict::Consistent;
}

} // namespace coh
