#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coh/convert.hpp"
#include "coh/cost.hpp"

using namespace coh;

namespace {

const double tau = 2.0 * std::numbers::pi;

PureState uniform_state(std::size_t d) {
    return PureState(std::vector<cplx>(d, 1.0 / std::sqrt(double(d))));
}

} // namespace

TEST_CASE("optimal shift recovers translations and ties break toward zero") {
    const IntDist p(0, {0.2, 0.5, 0.3});
    auto [k0, ov0] = optimal_shift(p, p);
    CHECK(k0 == 0);
    CHECK(ov0 == doctest::Approx(1.0));

    auto [k3, ov3] = optimal_shift(p, p.shifted(3));
    CHECK(k3 == 3);
    CHECK(ov3 == doctest::Approx(1.0));

    // symmetric tie: prefer the smaller |k|, then the smaller k
    const IntDist flat(0, {0.5, 0.5});
    const IntDist wide(0, {0.25, 0.25, 0.25, 0.25});
    auto [kt, ovt] = optimal_shift(wide, flat);
    CHECK((kt == 0 || kt == -1 || kt == 1));
    CHECK(std::abs(kt) <= 1);

    // binomial(4, 1/2) versus the {0,2,5} distribution, against an
    // exhaustive scored scan
    const IntDist binom(0, {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16});
    const IntDist pg(0, {1.0 / 3, 0, 1.0 / 3, 0, 0, 1.0 / 3});
    auto [kb, ovb] = optimal_shift(binom, pg);
    double best = -1.0;
    std::int64_t best_k = 0;
    for (std::int64_t k = -20; k <= 20; ++k) {
        double s = 0.0;
        for (std::int64_t n = -30; n <= 30; ++n) s += std::sqrt(binom.pmf(n) * pg.pmf(n + k));
        if (s > best + 1e-15) {
            best = s;
            best_k = k;
        }
    }
    CHECK(kb == best_k);
    CHECK(ovb == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("single-copy conversion satisfies the overlap relation") {
    const CBit cb;
    const PeriodicHamiltonian h1 = PeriodicHamiltonian::from_levels(tau, {0, 1});

    // identical states convert exactly
    const auto same = single_copy_error(cb.state, cb.hamiltonian, cb.state, h1);
    CHECK(same.trace_error == doctest::Approx(0.0));

    // c-bit to an eigenstate: overlap sqrt(1/2)
    const PureState e0(std::vector<cplx>{1.0, 0.0});
    const auto r = single_copy_error(cb.state, cb.hamiltonian, e0, h1);
    CHECK(r.overlap == doctest::Approx(std::sqrt(0.5)));
    CHECK(r.trace_error == doctest::Approx(std::sqrt(0.5)));
    CHECK(r.trace_error * r.trace_error + r.overlap * r.overlap == doctest::Approx(1.0).epsilon(1e-12));

    const PeriodicHamiltonian other = PeriodicHamiltonian::from_levels(1.0, {0, 1});
    CHECK_THROWS_AS(single_copy_error(cb.state, cb.hamiltonian, e0, other), PeriodMismatch);
}

TEST_CASE("many-copy conversion: identical systems are exact") {
    const CBit cb;
    const auto r = iid_convert(cb.state, cb.hamiltonian, cb.state, cb.hamiltonian, 1.0, 200);
    CHECK(r.trace_error <= 1e-12);
    CHECK(r.n_out == 200);
}

TEST_CASE("many-copy conversion trends below the ratio, floors above it") {
    const CBit cb;
    const PeriodicHamiltonian h3 = PeriodicHamiltonian::from_levels(tau, {0, 1, 2});
    const PureState q3 = uniform_state(3);

    double prev = 1.0;
    bool first = true;
    for (std::uint64_t n : {100, 200, 400, 800}) {
        const auto r = iid_convert(cb.state, cb.hamiltonian, q3, h3, 0.3, n);
        CHECK((first || r.trace_error <= 1.1 * prev));
        first = false;
        prev = r.trace_error;
        CHECK(r.trace_error <= r.error_upper_bound);
        CHECK(r.converse_floor == doctest::Approx(0.0));
    }

    const double floor = std::pow(monotonicity_gap(0.75) / 4.0, 2.0);
    for (std::uint64_t n : {100, 200, 400, 800}) {
        const auto r = iid_convert(cb.state, cb.hamiltonian, q3, h3, 0.5, n);
        CHECK(r.converse_floor == doctest::Approx(floor).epsilon(1e-12));
        CHECK(r.trace_error >= floor);
    }
    CHECK(iid_convert(cb.state, cb.hamiltonian, q3, h3, 0.5, 800).trace_error >= 0.01);
}

TEST_CASE("gap function values and limits") {
    CHECK(monotonicity_gap(0.5) == doctest::Approx(0.25));
    CHECK(monotonicity_gap(0.75) == doctest::Approx(0.10546875));
    CHECK(monotonicity_gap(1.0) == doctest::Approx(0.0));
    CHECK(monotonicity_gap(0.999999) < 1e-5);
    CHECK(monotonicity_gap(1e-12) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(min_error_floor(1.0, 1.0, 2.0) == doctest::Approx(std::pow(0.25 / 4.0, 2.0)));
    CHECK(min_error_floor(1.0, 1.0, 0.5) == doctest::Approx(0.0)); // T = 2 >= 1
}

TEST_CASE("rate bound: reversibility and sentinels") {
    Matrix h2(2, 2);
    h2(0, 0) = 0.5;
    h2(1, 1) = -0.5;
    const Matrix h3 = random_hermitian(3, 21);
    const DensityOperator r2(uniform_state(2).projector());
    const DensityOperator r3(random_pure(3, 22).projector());
    CHECK(rate_bound(r2, h2, r2, h2) == doctest::Approx(1.0));
    CHECK(rate_bound(r2, h2, r3, h3) * rate_bound(r3, h3, r2, h2) ==
          doctest::Approx(1.0).epsilon(1e-9));

    // c-bit versus the 0.64 closed-form qubit
    const double s = 1.0 / std::sqrt(2.0);
    Matrix v(2, 2);
    v(0, 0) = s;
    v(0, 1) = s;
    v(1, 0) = s;
    v(1, 1) = -s;
    Matrix d(2, 2);
    d(0, 0) = 0.9;
    d(1, 1) = 0.1;
    const DensityOperator mixed(v * d * adjoint(v));
    CHECK(rate_bound(r2, h2, mixed, h2) == doctest::Approx(1.0 / 0.64).epsilon(1e-10));

    Matrix diag(2, 2);
    diag(0, 0) = 0.5;
    diag(1, 1) = 0.5;
    CHECK(std::isinf(rate_bound(r2, h2, DensityOperator(diag), h2)));
}

TEST_CASE("random covariant channels: complete, covariant, never helpful") {
    const PeriodicHamiltonian hs = PeriodicHamiltonian::from_levels(1.0, {0, 1, 2});
    for (std::uint64_t s = 0; s < 50; ++s) {
        const TiChannel ch = make_ti_channel(hs, {0, 1}, 1000 + s);
        CHECK(ch.completeness_defect() <= 1e-9);
        CHECK(covariance_residual(ch, 2000 + s) <= 1e-8);
        const DensityOperator rho = random_density(3, 3, 3000 + s);
        const DensityOperator out(ch.apply(rho.matrix()));
        CHECK(qfi(out, hs.matrix()).value <= qfi(rho, hs.matrix()).value + 1e-9);
    }
}

TEST_CASE("dephasing channel kills the information value") {
    const PeriodicHamiltonian hs = PeriodicHamiltonian::from_levels(1.0, {0, 1, 2});
    const TiChannel ch = dephasing_channel(hs);
    CHECK(ch.completeness_defect() <= 1e-12);
    CHECK(covariance_residual(ch) <= 1e-10);
    const DensityOperator rho(uniform_state(3).projector());
    const double before = qfi(rho, hs.matrix()).value;
    const double after = qfi(DensityOperator(ch.apply(rho.matrix())), hs.matrix()).value;
    CHECK(before > 0.1);
    CHECK(after <= 1e-10);
}

TEST_CASE("root-fidelity gap inequality") {
    // trivial cases
    const DensityOperator t = random_density(3, 3, 50);
    auto [l0, r0] = lemma_fid_gap(Matrix::identity(3), t, random_density(3, 3, 51));
    CHECK(l0 <= 1e-9);
    auto [l1, r1] = lemma_fid_gap(random_unitary(3, 52), t, t);
    CHECK(l1 <= 1e-9);
    CHECK(r1 <= 1e-6);

    for (std::uint64_t s = 0; s < 200; ++s) {
        const std::size_t d = 2 + s % 3;
        const auto [lhs, rhs] = lemma_fid_gap(random_unitary(d, 100 + s),
                                              random_density(d, d, 300 + s),
                                              random_density(d, d, 600 + s));
        CHECK(lhs <= rhs + 1e-10);
    }
    CHECK_THROWS_AS(lemma_fid_gap(Matrix::identity(2), t, t), DimensionMismatch);
}
