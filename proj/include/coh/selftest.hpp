#pragma once

// End-to-end property suite: every check the library must pass, shared by
// the acceptance test binary and the CLI `selftest` command.

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "coh/approx.hpp"
#include "coh/convert.hpp"
#include "coh/cost.hpp"
#include "coh/purify.hpp"
#include "coh/qfi.hpp"
#include "coh/roof.hpp"

namespace coh {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace selftest_detail {

inline DensityOperator random_mixed_floored(std::size_t dim, std::uint64_t seed) {
    const DensityOperator raw = random_density(dim, dim, seed);
    // lift the spectrum floor above 0.05
    const double c = 0.08;
    const Matrix m =
        (1.0 / (1.0 + c * double(dim))) * (raw.matrix() + c * Matrix::identity(dim));
    return DensityOperator(m);
}

inline CheckResult make(const std::string& name, bool pass, const std::string& detail) {
    return {name, pass, detail};
}

} // namespace selftest_detail

// 1. On pure states the information value is exactly four times the
//    energy variance.
inline CheckResult check_pure_state_identity() {
    using namespace selftest_detail;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const std::size_t d = 2 + i % 5;
        const PureState psi = random_pure(d, 1000 + i);
        const Matrix h = random_hermitian(d, 2000 + i);
        const double f = qfi(DensityOperator(psi.projector()), h).value;
        const double rel = std::abs(f - 4.0 * variance(psi, h)) / std::max(1.0, f);
        worst = std::max(worst, rel);
    }
    return make("pure_state_identity", worst <= 1e-9, "worst relative gap " + std::to_string(worst));
}

// 2. The eigen-decomposition formula agrees with the fidelity-derivative
//    oracle on well-conditioned mixed states.
inline CheckResult check_fd_oracle() {
    using namespace selftest_detail;
    bool ok = true;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        const std::size_t d = 2 + i % 3;
        const DensityOperator rho = random_mixed_floored(d, 3000 + i);
        const Matrix h = random_hermitian(d, 4000 + i);
        const double f = qfi(rho, h).value;
        const double gap = std::abs(f - qfi_fd_oracle(rho, h));
        worst = std::max(worst, gap);
        ok = ok && gap <= std::max(1e-4, 1e-3 * f);
    }
    return make("fidelity_derivative_oracle", ok, "worst gap " + std::to_string(worst));
}

// 3. The optimal purification attains the minimum: its total variance is
//    a quarter of the information value, and no numeric search beats it.
inline CheckResult check_min_purification() {
    using namespace selftest_detail;
    bool ok = true;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const std::size_t d = 2 + i % 3;
        const DensityOperator rho = random_mixed_floored(d, 5000 + i);
        const Matrix h = random_hermitian(d, 6000 + i);
        const double f = qfi(rho, h).value;
        const Matrix h_a = optimal_aux_hamiltonian(rho, h);
        const Purification pur = standard_purification(rho);
        const Matrix h_tot = tensor(h, Matrix::identity(d)) + tensor(Matrix::identity(d), h_a);
        const double f_tot = 4.0 * variance(pur.joint, h_tot);
        worst = std::max(worst, std::abs(f_tot - f));
        ok = ok && std::abs(f_tot - f) <= 1e-8;
    }
    for (std::uint64_t i = 0; i < 20 && ok; ++i) {
        const std::size_t d = 2 + i % 2;
        const DensityOperator rho = random_mixed_floored(d, 7000 + i);
        const Matrix h = random_hermitian(d, 8000 + i);
        ok = ok && numeric_min_oracle(rho, h, 9000 + i).best_variance >=
                       qfi(rho, h).value / 4.0 - 1e-6;
    }
    return make("minimum_purification", ok, "worst equality gap " + std::to_string(worst));
}

// 4. The canonical ensemble attains the convex roof; a brute-force search
//    cannot go lower; the block-diagonal extension is pinched between the
//    same two quantities.
inline CheckResult check_convex_roof() {
    using namespace selftest_detail;
    bool ok = true;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const std::size_t d = 2 + i % 3;
        const DensityOperator rho = random_mixed_floored(d, 10000 + i);
        const Matrix h = random_hermitian(d, 11000 + i);
        const double f = qfi(rho, h).value;
        const Ensemble e = yu_ensemble(rho, h);
        const double gap = std::abs(ensemble_avg_qfi(e, h) - f);
        worst = std::max(worst, gap);
        ok = ok && gap <= 1e-8;

        if (i < 20) {
            // sandwich: the classically flagged ensemble extension has the
            // same information value
            const std::size_t k = e.members.size();
            Matrix sig(d * k, d * k);
            for (std::size_t l = 0; l < k; ++l) {
                const auto& [q, eta] = e.members[l];
                const Matrix proj = eta.projector();
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = 0; b < d; ++b)
                        sig(a * k + l, b * k + l) = q * proj(a, b);
            }
            const Matrix h_ext = tensor(h, Matrix::identity(k));
            const double f_ext = qfi(DensityOperator(sig), h_ext).value;
            ok = ok && std::abs(f_ext - f) <= 1e-8;
            worst = std::max(worst, std::abs(f_ext - f));
        }
    }
    for (std::uint64_t i = 0; i < 20 && ok; ++i) {
        const DensityOperator rho = random_mixed_floored(2, 12000 + i);
        const Matrix h = random_hermitian(2, 13000 + i);
        const double f = qfi(rho, h).value;
        ok = ok && std::abs(bruteforce_roof_oracle(rho, h, 48, 14000 + i) - f) <= 5e-3;
    }
    return make("convex_roof", ok, "worst equality gap " + std::to_string(worst));
}

// 5. Closed-form qubit family: rho = p|+><+| + (1-p)|-><-| under sigma_z/2.
inline CheckResult check_qubit_family() {
    using namespace selftest_detail;
    bool ok = true;
    for (double p : {0.6, 0.75, 0.9}) {
        const double s = 1.0 / std::sqrt(2.0);
        Matrix v(2, 2);
        v(0, 0) = s;
        v(0, 1) = s;
        v(1, 0) = s;
        v(1, 1) = -s;
        Matrix diag(2, 2);
        diag(0, 0) = p;
        diag(1, 1) = 1.0 - p;
        const DensityOperator rho(v * diag * adjoint(v));
        Matrix h(2, 2);
        h(0, 0) = 0.5;
        h(1, 1) = -0.5;
        const double t = 2.0 * p - 1.0;
        ok = ok && std::abs(qfi(rho, h).value - t * t) <= 1e-10;
        ok = ok && std::abs(aux_qfi(rho, h) - 4.0 * p * (1.0 - p) * t * t) <= 1e-9;
        const double w = std::pow(std::sqrt(p) - std::sqrt(1.0 - p), 2.0) / 4.0;
        ok = ok && std::abs(wigner_yanase(rho, h) - w) <= 1e-10;
    }
    return make("qubit_family_closed_forms", ok, "p in {0.6, 0.75, 0.9}");
}

// 6. Worked integer-spectrum example: the three-level uniform state on
//    levels {0,2,5} and the two-level state on {0,2}.
inline CheckResult check_integer_spectrum_example() {
    using namespace selftest_detail;
    const double tau = 2.0 * std::numbers::pi;
    const PeriodicHamiltonian h = PeriodicHamiltonian::from_levels(tau, {0, 1, 2, 3, 4, 5});
    std::vector<cplx> a(6, 0.0);
    a[0] = a[2] = a[5] = 1.0 / std::sqrt(3.0);
    const PureState gamma(a);
    const IntDist pg = energy_distribution(gamma, h);

    bool ok = pg.support() == std::vector<std::int64_t>({0, 2, 5});
    for (auto n : pg.support()) ok = ok && std::abs(pg.pmf(n) - 1.0 / 3.0) <= 1e-12;

    const IntDist p2 = convolve_power(pg, 2);
    ok = ok && p2.support() == std::vector<std::int64_t>({0, 2, 4, 5, 7, 10});
    const std::vector<double> w{1, 2, 1, 2, 2, 1};
    const std::vector<std::int64_t> sup{0, 2, 4, 5, 7, 10};
    for (std::size_t i = 0; i < sup.size(); ++i)
        ok = ok && std::abs(p2.pmf(sup[i]) - w[i] / 9.0) <= 1e-12;

    ok = ok && minimal_adjacent_L(pg) == std::optional<std::uint64_t>(2);

    std::vector<cplx> b(6, 0.0);
    b[0] = b[2] = 1.0 / std::sqrt(2.0);
    const PureState eta(b);
    ok = ok && !minimal_adjacent_L(energy_distribution(eta, h)).has_value();
    const auto period = state_period(eta, h);
    ok = ok && period && std::abs(*period - tau / 2.0) <= 1e-12;
    return make("integer_spectrum_example", ok, "levels {0,2,5} and {0,2}");
}

namespace selftest_detail {

inline std::vector<ConversionReport> cbit_to_qutrit_sweep(double rate) {
    const CBit cb;
    const PeriodicHamiltonian h3 = PeriodicHamiltonian::from_levels(cb.tau, {0, 1, 2});
    const PureState q3(std::vector<cplx>(3, 1.0 / std::sqrt(3.0)));
    std::vector<ConversionReport> rows;
    for (std::uint64_t n : {100, 200, 400, 800})
        rows.push_back(iid_convert(cb.state, cb.hamiltonian, q3, h3, rate, n));
    return rows;
}

} // namespace selftest_detail

// 7. Below the variance ratio 3/8 the conversion error trends down and
//    stays under the analytic upper bound.
inline CheckResult check_conversion_achievability() {
    using namespace selftest_detail;
    const auto rows = cbit_to_qutrit_sweep(0.3);
    bool ok = true;
    for (std::size_t i = 1; i < rows.size(); ++i)
        ok = ok && rows[i].trace_error <= 1.1 * rows[i - 1].trace_error;
    ok = ok && rows.back().trace_error <= rows.back().error_upper_bound;
    return make("conversion_achievability", ok,
                "final error " + std::to_string(rows.back().trace_error) + " <= bound " +
                    std::to_string(rows.back().error_upper_bound));
}

// 8. Above the ratio the simulated error never dips below the converse
//    floor (g(0.75)/4)^2 and stays macroscopic at n = 800.
inline CheckResult check_conversion_converse() {
    using namespace selftest_detail;
    const auto rows = cbit_to_qutrit_sweep(0.5);
    const double floor = std::pow(monotonicity_gap(0.75) / 4.0, 2.0);
    bool ok = std::abs(floor - rows[0].converse_floor) <= 1e-12;
    for (const auto& r : rows) ok = ok && r.trace_error >= floor;
    ok = ok && rows.back().trace_error >= 0.01;
    return make("conversion_converse", ok,
                "floor " + std::to_string(floor) + ", error at n=800 " +
                    std::to_string(rows.back().trace_error));
}

// 9. Information value never increases under covariant channels, adds over
//    tensor products, and is convex.
inline CheckResult check_monotonicity_suite() {
    using namespace selftest_detail;
    bool ok = true;
    const PeriodicHamiltonian hs = PeriodicHamiltonian::from_levels(1.0, {0, 1, 2});
    for (std::uint64_t i = 0; i < 50 && ok; ++i) {
        const TiChannel ch = make_ti_channel(hs, {0, 1}, 20000 + i);
        ok = ok && ch.completeness_defect() <= 1e-9;
        ok = ok && covariance_residual(ch, 21000 + i) <= 1e-8;
        const DensityOperator rho = random_density(3, 3, 22000 + i);
        const double before = qfi(rho, hs.matrix()).value;
        const double after = qfi(DensityOperator(ch.apply(rho.matrix())), hs.matrix()).value;
        ok = ok && after <= before + 1e-9;
    }
    for (std::uint64_t i = 0; i < 20 && ok; ++i) {
        const DensityOperator r1 = random_mixed_floored(2, 23000 + i);
        const DensityOperator r2 = random_mixed_floored(3, 24000 + i);
        const Matrix h1 = random_hermitian(2, 25000 + i);
        const Matrix h2 = random_hermitian(3, 26000 + i);
        const Matrix h12 =
            tensor(h1, Matrix::identity(3)) + tensor(Matrix::identity(2), h2);
        const double joint = qfi(DensityOperator(tensor(r1.matrix(), r2.matrix())), h12).value;
        ok = ok && std::abs(joint - qfi(r1, h1).value - qfi(r2, h2).value) <= 1e-8;

        const DensityOperator r3 = random_mixed_floored(2, 27000 + i);
        const double lam = 0.3;
        const DensityOperator mixrho(lam * r1.matrix() + (1.0 - lam) * r3.matrix());
        ok = ok && qfi(mixrho, h1).value <=
                       lam * qfi(r1, h1).value + (1.0 - lam) * qfi(r3, h1).value + 1e-8;
    }
    return make("monotonicity_additivity_convexity", ok, "50 channels, 20 product/mixture cases");
}

// 10. Approximation bounds dominate the exact total-variation distances,
//     and the translated-Poisson variance lands within one unit above
//     target.
inline CheckResult check_approximation_suite() {
    using namespace selftest_detail;
    bool ok = true;
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> ul(1.0, 40.0), ux(0.0, 5.0);
    for (int i = 0; i < 50 && ok; ++i) {
        const double lam = ul(rng), x = ux(rng);
        const double tv = tv_distance(poisson_pmf(lam), poisson_pmf(lam + x));
        ok = ok && tv <= adell_bound(lam, x) + 1e-12;
    }

    const PeriodicHamiltonian h = PeriodicHamiltonian::from_levels(2.0 * std::numbers::pi,
                                                                   {0, 1, 2, 3, 4, 5});
    std::vector<cplx> a(6, 0.0);
    a[0] = a[2] = a[5] = 1.0 / std::sqrt(3.0);
    const IntDist pg2 = convolve_power(energy_distribution(PureState(a), h), 2);
    for (std::uint64_t m : {4, 16, 64, 256}) {
        const auto bound = bc_bound(pg2, m);
        // m = 4 sits below the m*nu > 1/2 applicability threshold (nu = 1/9)
        ok = ok && (m >= 16) == bound.has_value();
        if (!bound) continue;
        const IntDist pm = convolve_power(pg2, m);
        const double tv =
            tv_distance(pm, translated_poisson(double(m) * pg2.mean(), double(m) * pg2.variance()));
        ok = ok && tv <= *bound;
    }

    std::uniform_real_distribution<double> um(0.0, 50.0), uv(1.0, 30.0);
    for (int i = 0; i < 20 && ok; ++i) {
        const double mu = um(rng), var = uv(rng);
        const double excess = translated_poisson(mu, var).variance() - var;
        ok = ok && excess >= -1e-6 && excess < 1.0;
    }
    return make("approximation_suite", ok, "shift bound, convolution bound, variance window");
}

// 11. Cost accounting: the unit costs one unit, the closed-form qubit costs
//     its information value, the protocol rate ceiling holds, and the
//     atypicality probability falls with block size.
inline CheckResult check_cost_accounting() {
    using namespace selftest_detail;
    const CBit cb;
    bool ok = std::abs(coherence_cost(DensityOperator(cb.state.projector()), cb.hamiltonian) -
                       1.0) <= 1e-12;

    const double s = 1.0 / std::sqrt(2.0);
    Matrix v(2, 2);
    v(0, 0) = s;
    v(0, 1) = s;
    v(1, 0) = s;
    v(1, 1) = -s;
    Matrix diag(2, 2);
    diag(0, 0) = 0.9;
    diag(1, 1) = 0.1;
    const DensityOperator rho(v * diag * adjoint(v));
    const PeriodicHamiltonian h =
        PeriodicHamiltonian::from_levels(2.0 * std::numbers::pi, {0, 1}, -0.5);
    const double cost = coherence_cost(rho, h);
    ok = ok && std::abs(cost - 0.64) <= 1e-10;

    const Ensemble e = yu_ensemble(rho, h.matrix());
    const double delta = 0.05;
    const double rate = protocol_rate(e, h, delta, h.tau);
    const double hnorm = 0.5; // operator norm of sigma_z / 2
    ok = ok && rate - cost <= 2.0 * delta * hnorm * hnorm * std::pow(h.tau / std::numbers::pi, 2.0) + 1e-12;
    ok = ok && std::abs(protocol_rate(e, h, 0.0, h.tau) - cost) <= 1e-10;

    double prev = 1.0;
    bool first = true;
    for (std::uint64_t m : {50, 100, 200}) {
        const double p_err = typicality_simulate(rho, h, delta, m).p_err;
        ok = ok && (first || p_err < prev);
        first = false;
        prev = p_err;
    }
    return make("cost_accounting", ok, "unit cost, closed form, rate ceiling, tail decay");
}

// 12. Stability inequalities: the root-fidelity gap bound and the
//     trace-distance/fidelity sandwich.
inline CheckResult check_stability_inequalities() {
    using namespace selftest_detail;
    bool ok = true;
    for (std::uint64_t i = 0; i < 200 && ok; ++i) {
        const std::size_t d = 2 + i % 3;
        const Matrix u = random_unitary(d, 40000 + i);
        const DensityOperator t1 = random_density(d, d, 41000 + i);
        const DensityOperator t2 = random_density(d, d, 42000 + i);
        const auto [lhs, rhs] = lemma_fid_gap(u, t1, t2);
        ok = ok && lhs <= rhs + 1e-10;

        const double fid = fidelity(t1, t2);
        const double td = trace_distance(t1, t2);
        ok = ok && td >= 1.0 - std::sqrt(fid) - 1e-10;
        ok = ok && td <= std::sqrt(1.0 - fid) + 1e-10;
    }
    return make("stability_inequalities", ok, "200 random triples and pairs");
}

inline std::vector<CheckResult> run_all_checks() {
    return {check_pure_state_identity(), check_fd_oracle(),        check_min_purification(),
            check_convex_roof(),         check_qubit_family(),     check_integer_spectrum_example(),
            check_conversion_achievability(), check_conversion_converse(),
            check_monotonicity_suite(),  check_approximation_suite(), check_cost_accounting(),
            check_stability_inequalities()};
}

} // namespace coh
