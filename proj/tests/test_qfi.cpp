#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coh/qfi.hpp"

using namespace coh;

namespace {

DensityOperator qubit_family(double p) {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix v(2, 2);
    v(0, 0) = s;
    v(0, 1) = s;
    v(1, 0) = s;
    v(1, 1) = -s;
    Matrix d(2, 2);
    d(0, 0) = p;
    d(1, 1) = 1.0 - p;
    return DensityOperator(v * d * adjoint(v));
}

Matrix sigma_z_half() {
    Matrix h(2, 2);
    h(0, 0) = 0.5;
    h(1, 1) = -0.5;
    return h;
}

} // namespace

TEST_CASE("pure states: information value is four times the variance") {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const std::size_t d = 2 + s % 5;
        const PureState psi = random_pure(d, 1000 + s);
        const Matrix h = random_hermitian(d, 2000 + s);
        const double f = qfi(DensityOperator(psi.projector()), h).value;
        CHECK(std::abs(f - 4.0 * variance(psi, h)) <= 1e-9 * std::max(1.0, f));
    }
}

TEST_CASE("closed-form qubit family") {
    for (double p : {0.6, 0.75, 0.9}) {
        const DensityOperator rho = qubit_family(p);
        const Matrix h = sigma_z_half();
        const double t = 2.0 * p - 1.0;
        CHECK(std::abs(qfi(rho, h).value - t * t) <= 1e-10);
        const double w = std::pow(std::sqrt(p) - std::sqrt(1.0 - p), 2.0) / 4.0;
        CHECK(std::abs(wigner_yanase(rho, h) - w) <= 1e-10);
    }
}

TEST_CASE("fidelity-derivative oracle agrees on well-conditioned states") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const std::size_t d = 2 + s % 3;
        const DensityOperator raw = random_density(d, d, 3000 + s);
        const Matrix m = (1.0 / (1.0 + 0.08 * double(d))) *
                         (raw.matrix() + 0.08 * Matrix::identity(d));
        const DensityOperator rho(m);
        const Matrix h = random_hermitian(d, 4000 + s);
        const double f = qfi(rho, h).value;
        CHECK(std::abs(f - qfi_fd_oracle(rho, h)) <= std::max(1e-4, 1e-3 * f));
    }
}

TEST_CASE("symmetric logarithmic derivative") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const std::size_t d = 2 + s % 3;
        const DensityOperator rho = random_density(d, d, 5000 + s);
        const Matrix h = random_hermitian(d, 6000 + s);
        const Matrix l = sld(rho, h);
        CHECK(hermiticity_defect(l) < 1e-10);
        CHECK(std::abs(trace(rho.matrix() * l).real()) < 1e-9);
        CHECK(trace(rho.matrix() * l * l).real() ==
              doctest::Approx(qfi(rho, h).value).epsilon(1e-9));
        // generator property: i[rho, H] = (L rho + rho L)/2 on the support
        const Matrix lhs = cplx(0.0, 1.0) * (rho.matrix() * h - h * rho.matrix());
        const Matrix rhs = 0.5 * (l * rho.matrix() + rho.matrix() * l);
        CHECK(fro_norm(lhs - rhs) < 1e-8);
    }
}

TEST_CASE("faithfulness: zero exactly on states commuting with H") {
    Matrix h(3, 3);
    h(0, 0) = 1.0;
    h(1, 1) = 2.0;
    h(2, 2) = 4.0;
    Matrix diag(3, 3);
    diag(0, 0) = 0.5;
    diag(1, 1) = 0.3;
    diag(2, 2) = 0.2;
    CHECK(qfi(DensityOperator(diag), h).value == doctest::Approx(0.0));
    // and strictly positive otherwise
    const DensityOperator coherent = qubit_family(0.8);
    CHECK(qfi(coherent, sigma_z_half()).value > 1e-3);
}

TEST_CASE("rank-deficient pairs are counted, not summed") {
    const PureState psi = random_pure(3, 77);
    const auto r = qfi(DensityOperator(psi.projector()), random_hermitian(3, 78));
    CHECK(r.dropped_pairs == 1); // the one zero-zero eigenvalue pair
}

TEST_CASE("skew information bounds") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const std::size_t d = 2 + s % 3;
        const DensityOperator rho = random_density(d, d, 7000 + s);
        const Matrix h = random_hermitian(d, 8000 + s);
        const double f = qfi(rho, h).value;
        const double w = wigner_yanase(rho, h);
        CHECK(2.0 * w >= f / 4.0 - 1e-10);
        CHECK(w <= variance(rho, h) + 1e-10);
        CHECK(f <= 4.0 * variance(rho, h) + 1e-9);
    }
}

TEST_CASE("convexity of the information value") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const DensityOperator a = random_density(3, 3, 9000 + s);
        const DensityOperator b = random_density(3, 3, 9500 + s);
        const Matrix h = random_hermitian(3, 9900 + s);
        const double lam = 0.4;
        const DensityOperator m(lam * a.matrix() + (1.0 - lam) * b.matrix());
        CHECK(qfi(m, h).value <=
              lam * qfi(a, h).value + (1.0 - lam) * qfi(b, h).value + 1e-8);
    }
}
