#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coh/purify.hpp"

using namespace coh;

TEST_CASE("standard purification reduces to the state") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const std::size_t d = 2 + s % 3;
        const DensityOperator rho = random_density(d, d, 100 + s);
        const Purification pur = standard_purification(rho);
        const Matrix reduced = partial_trace_b(pur.joint.projector(), d, d);
        CHECK(fro_norm(reduced - rho.matrix()) < 1e-10);
    }
}

TEST_CASE("optimal auxiliary Hamiltonian attains a quarter of the information value") {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const std::size_t d = 2 + s % 3;
        const DensityOperator rho = random_density(d, d, 300 + s);
        const Matrix h = random_hermitian(d, 400 + s);
        const Matrix h_a = optimal_aux_hamiltonian(rho, h);
        CHECK(hermiticity_defect(h_a) < 1e-12);
        const double v = purification_variance(rho, h, h_a);
        const double f4 = qfi(rho, h).value / 4.0;
        worst = std::max(worst, std::abs(v - f4));
        CHECK(std::abs(v - f4) <= 1e-8);

        // cross-check through the joint pure state
        const Purification pur = standard_purification(rho);
        const Matrix h_tot =
            tensor(h, Matrix::identity(d)) + tensor(Matrix::identity(d), h_a);
        CHECK(std::abs(variance(pur.joint, h_tot) - f4) <= 1e-8);
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("trivial auxiliary Hamiltonian leaves the bare variance") {
    const DensityOperator rho = random_density(3, 3, 11);
    const Matrix h = random_hermitian(3, 12);
    CHECK(purification_variance(rho, h, Matrix(3, 3)) ==
          doctest::Approx(variance(rho, h)).epsilon(1e-10));
}

TEST_CASE("conjugate auxiliary Hamiltonian doubles the skew information") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const std::size_t d = 2 + s % 3;
        const DensityOperator rho = random_density(d, d, 600 + s);
        const Matrix h = random_hermitian(d, 700 + s);
        const Matrix& v = rho.eigenvectors();
        const Matrix h_conj = v * (-1.0 * conj(adjoint(v) * h * v)) * adjoint(v);
        CHECK(purification_variance(rho, h, h_conj) ==
              doctest::Approx(2.0 * wigner_yanase(rho, h)).epsilon(1e-9));
    }
}

TEST_CASE("auxiliary-side information value closed form") {
    // qubit family: aux value 4 p (1-p) (2p-1)^2
    const double p = 0.9;
    const double sq = 1.0 / std::sqrt(2.0);
    Matrix v(2, 2);
    v(0, 0) = sq;
    v(0, 1) = sq;
    v(1, 0) = sq;
    v(1, 1) = -sq;
    Matrix diag(2, 2);
    diag(0, 0) = p;
    diag(1, 1) = 1.0 - p;
    const DensityOperator rho(v * diag * adjoint(v));
    Matrix h(2, 2);
    h(0, 0) = 0.5;
    h(1, 1) = -0.5;
    CHECK(aux_qfi(rho, h) == doctest::Approx(4.0 * p * (1.0 - p) * std::pow(2.0 * p - 1.0, 2.0))
                                 .epsilon(1e-9));

    // pure states need no auxiliary dynamics
    const PureState psi = random_pure(3, 900);
    CHECK(aux_qfi(DensityOperator(psi.projector()), random_hermitian(3, 901)) ==
          doctest::Approx(0.0));
}

TEST_CASE("numeric minimization never beats the closed form") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const std::size_t d = 2 + s % 2;
        const DensityOperator rho = random_density(d, d, 1100 + s);
        const Matrix h = random_hermitian(d, 1200 + s);
        const auto res = numeric_min_oracle(rho, h, 1300 + s);
        const double f4 = qfi(rho, h).value / 4.0;
        CHECK(res.best_variance >= f4 - 1e-6);
        // and it gets close from above
        CHECK(res.best_variance <= f4 + 0.05 * std::max(1.0, f4));
    }
}
