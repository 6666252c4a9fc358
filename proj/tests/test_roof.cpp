#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coh/qfi.hpp"
#include "coh/roof.hpp"

using namespace coh;

TEST_CASE("canonical ensemble reconstructs the state and attains the roof") {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const std::size_t d = 2 + s % 3;
        const DensityOperator rho = random_density(d, d, 100 + s);
        const Matrix h = random_hermitian(d, 200 + s);
        const Ensemble e = yu_ensemble(rho, h);
        CHECK(fro_norm(e.average() - rho.matrix()) < 1e-9);
        double total = 0.0;
        for (const auto& [q, eta] : e.members) {
            CHECK(q > 0.0);
            total += q;
        }
        CHECK(total == doctest::Approx(1.0));
        CHECK(std::abs(ensemble_avg_qfi(e, h) - qfi(rho, h).value) <= 1e-8);
    }
}

TEST_CASE("canonical ensemble is deterministic") {
    const DensityOperator rho = random_density(3, 3, 7);
    const Matrix h = random_hermitian(3, 8);
    const Ensemble a = yu_ensemble(rho, h), b = yu_ensemble(rho, h);
    REQUIRE(a.members.size() == b.members.size());
    for (std::size_t i = 0; i < a.members.size(); ++i) {
        CHECK(a.members[i].first == b.members[i].first);
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(a.members[i].second[j] == b.members[i].second[j]);
    }
}

TEST_CASE("incoherent states decompose into stationary members") {
    Matrix h(3, 3);
    h(0, 0) = 1.0;
    h(1, 1) = 2.0;
    h(2, 2) = 5.0;
    Matrix d(3, 3);
    d(0, 0) = 0.5;
    d(1, 1) = 0.3;
    d(2, 2) = 0.2;
    const Ensemble e = yu_ensemble(DensityOperator(d), h);
    CHECK(ensemble_avg_qfi(e, h) <= 1e-10);
}

TEST_CASE("brute-force roof search matches on qubits") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const DensityOperator rho = random_density(2, 2, 300 + s);
        const Matrix h = random_hermitian(2, 400 + s);
        const double f = qfi(rho, h).value;
        const double brute = bruteforce_roof_oracle(rho, h, 48, 500 + s);
        CHECK(brute >= f - 1e-9); // never below: every candidate is a valid ensemble
        CHECK(std::abs(brute - f) <= 5e-3);
    }
    CHECK_THROWS_AS(bruteforce_roof_oracle(random_density(3, 3, 1), random_hermitian(3, 2)),
                    DimensionMismatch);
}

TEST_CASE("block-diagonal ensemble extension has the same information value") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const std::size_t d = 2 + s % 2;
        const DensityOperator rho = random_density(d, d, 600 + s);
        const Matrix h = random_hermitian(d, 700 + s);
        const Ensemble e = yu_ensemble(rho, h);
        const std::size_t k = e.members.size();
        Matrix sig(d * k, d * k);
        for (std::size_t l = 0; l < k; ++l) {
            const auto& [q, eta] = e.members[l];
            const Matrix proj = eta.projector();
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b) sig(a * k + l, b * k + l) = q * proj(a, b);
        }
        const double f_ext = qfi(DensityOperator(sig), tensor(h, Matrix::identity(k))).value;
        CHECK(std::abs(f_ext - qfi(rho, h).value) <= 1e-8);
    }
}

TEST_CASE("level partitions follow the coherence structure") {
    const double tau = 2.0 * std::numbers::pi;
    const PeriodicHamiltonian h = PeriodicHamiltonian::from_levels(tau, {0, 1, 2, 3});

    // coherence only inside {0,2} and inside {1,3}: two classes
    Matrix m(4, 4);
    m(0, 0) = m(2, 2) = 0.25;
    m(1, 1) = m(3, 3) = 0.25;
    m(0, 2) = m(2, 0) = 0.25;
    m(1, 3) = m(3, 1) = 0.25;
    const DensityOperator rho(m);
    const PartitionSet ps = period_partitions(rho, h);
    CHECK(ps.projectors.size() == 2);

    Matrix sum(4, 4), pinched(4, 4);
    for (const Matrix& p : ps.projectors) {
        sum = sum + p;
        pinched = pinched + p * rho.matrix() * p;
        CHECK(fro_norm(p * p - p) < 1e-12);
    }
    CHECK(fro_norm(sum - Matrix::identity(4)) < 1e-12);
    CHECK(fro_norm(pinched - rho.matrix()) < 1e-10);

    CHECK(density_period(rho, h) == std::optional<double>(tau / 2.0));
    // fully dephased state is stationary
    Matrix diag(4, 4);
    for (int i = 0; i < 4; ++i) diag(i, i) = 0.25;
    CHECK(!density_period(DensityOperator(diag), h).has_value());
}

TEST_CASE("period refinement keeps the average and never raises the cost") {
    const double tau = 2.0 * std::numbers::pi;
    const PeriodicHamiltonian h = PeriodicHamiltonian::from_levels(tau, {0, 1, 2, 3});
    for (std::uint64_t s = 0; s < 10; ++s) {
        const DensityOperator rho = random_density(4, 4, 800 + s);
        const Ensemble e = yu_ensemble(rho, h.matrix());
        const PartitionSet ps = period_partitions(rho, h);
        const Ensemble refined = refine_ensemble_periods(e, ps, h);
        CHECK(fro_norm(refined.average() - rho.matrix()) < 1e-9);
        CHECK(ensemble_avg_qfi(refined, h.matrix()) <=
              ensemble_avg_qfi(e, h.matrix()) + 1e-9);
    }

    // block-structured state: members straddling the two classes are split
    Matrix m(4, 4);
    m(0, 0) = m(2, 2) = 0.25;
    m(1, 1) = m(3, 3) = 0.25;
    m(0, 2) = m(2, 0) = 0.2;
    m(1, 3) = m(3, 1) = 0.2;
    const DensityOperator rho(m);
    const Ensemble e = yu_ensemble(rho, h.matrix());
    const Ensemble refined = refine_ensemble_periods(e, period_partitions(rho, h), h);
    CHECK(fro_norm(refined.average() - rho.matrix()) < 1e-9);
    CHECK(ensemble_avg_qfi(refined, h.matrix()) <= ensemble_avg_qfi(e, h.matrix()) + 1e-9);
    for (const auto& [q, eta] : refined.members) {
        const auto period = state_period(eta, h);
        CHECK((!period || std::abs(*period - tau / 2.0) < 1e-12));
    }
}
