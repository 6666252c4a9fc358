#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coh/linalg.hpp"

using namespace coh;

TEST_CASE("matrix algebra basics") {
    Matrix a(2, 3);
    a(0, 0) = 1.0;
    a(1, 2) = cplx(0.0, 2.0);
    const Matrix at = adjoint(a);
    CHECK(at.rows() == 3);
    CHECK(at(2, 1) == cplx(0.0, -2.0));
    CHECK(trace(Matrix::identity(4)).real() == doctest::Approx(4.0));
    CHECK_THROWS_AS(a * a, DimensionMismatch);

    const Matrix t = tensor(Matrix::identity(2), Matrix::identity(3));
    CHECK(fro_norm(t - Matrix::identity(6)) == doctest::Approx(0.0));
}

TEST_CASE("hermitian eigensolver reproduces known spectra") {
    Matrix pauli_y(2, 2);
    pauli_y(0, 1) = cplx(0.0, -1.0);
    pauli_y(1, 0) = cplx(0.0, 1.0);
    auto eig = hermitian_eig(pauli_y);
    CHECK(eig.values[0] == doctest::Approx(-1.0));
    CHECK(eig.values[1] == doctest::Approx(1.0));

    for (std::uint64_t s = 0; s < 20; ++s) {
        const std::size_t d = 2 + s % 5;
        const Matrix h = random_hermitian(d, 100 + s);
        auto e = hermitian_eig(h);
        Matrix diag(d, d);
        for (std::size_t i = 0; i < d; ++i) diag(i, i) = e.values[i];
        CHECK(fro_norm(e.vectors * diag * adjoint(e.vectors) - h) < 1e-10);
        CHECK(fro_norm(adjoint(e.vectors) * e.vectors - Matrix::identity(d)) < 1e-10);
        for (std::size_t i = 0; i + 1 < d; ++i) CHECK(e.values[i] <= e.values[i + 1]);
    }
    Matrix skew(2, 2);
    skew(0, 1) = 0.5;
    CHECK_THROWS_AS(hermitian_eig(pauli_y + skew), NotHermitian);
}

TEST_CASE("density operator validation and spectral cache") {
    Matrix m(2, 2);
    m(0, 0) = 0.7;
    m(1, 1) = 0.3;
    m(0, 1) = 0.1;
    m(1, 0) = 0.1;
    const DensityOperator rho(m);
    CHECK(rho.eigenvalues()[0] + rho.eigenvalues()[1] == doctest::Approx(1.0));

    Matrix bad = m;
    bad(0, 0) = 0.8; // trace 1.1
    CHECK_THROWS(DensityOperator{bad});
    Matrix neg(2, 2);
    neg(0, 0) = 1.2;
    neg(1, 1) = -0.2;
    CHECK_THROWS_AS(DensityOperator{neg}, NotPsd);
}

TEST_CASE("partial traces of a product state recover the factors") {
    const DensityOperator a = random_density(2, 2, 7);
    const DensityOperator b = random_density(3, 3, 8);
    const Matrix joint = tensor(a.matrix(), b.matrix());
    CHECK(fro_norm(partial_trace_b(joint, 2, 3) - a.matrix()) < 1e-12);
    CHECK(fro_norm(partial_trace_a(joint, 2, 3) - b.matrix()) < 1e-12);
}

namespace {

// Independent qubit fidelity oracle: maximize |<a|(U x I)|b>|^2 over
// purifying unitaries U by scanning the closed form's search space
// directly — for 2x2 the optimum equals tr|sqrt(rho) sqrt(sigma)| via the
// polar decomposition, which we recover from the singular values of
// sqrt(rho) sqrt(sigma) computed through its Gram matrix.
double fidelity_oracle_2x2(const DensityOperator& rho, const DensityOperator& sigma) {
    const Matrix m = rho.sqrt_matrix() * sigma.sqrt_matrix();
    auto eig = hermitian_eig(adjoint(m) * m);
    double s = 0.0;
    for (double v : eig.values) s += std::sqrt(std::max(v, 0.0));
    return s * s;
}

} // namespace

TEST_CASE("fidelity agrees with the singular-value oracle and its axioms") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const DensityOperator rho = random_density(2, 2, 300 + s);
        const DensityOperator sig = random_density(2, 2, 400 + s);
        CHECK(fidelity(rho, sig) == doctest::Approx(fidelity_oracle_2x2(rho, sig)).epsilon(1e-9));
        CHECK(fidelity(rho, sig) == doctest::Approx(fidelity(sig, rho)).epsilon(1e-9));
        CHECK(fidelity(rho, rho) == doctest::Approx(1.0));
    }
}

TEST_CASE("trace distance and fidelity sandwich") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const std::size_t d = 2 + s % 3;
        const DensityOperator rho = random_density(d, d, 500 + s);
        const DensityOperator sig = random_density(d, d, 700 + s);
        const double td = trace_distance(rho, sig);
        const double f = fidelity(rho, sig);
        CHECK(td >= 1.0 - std::sqrt(f) - 1e-10);
        CHECK(td <= std::sqrt(1.0 - f) + 1e-10);
        CHECK(bures_distance(rho, sig) >= -1e-12);
    }
}

TEST_CASE("random generators are deterministic and well formed") {
    const PureState a = random_pure(4, 42), b = random_pure(4, 42), c = random_pure(4, 43);
    double diff = 0.0, same = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        same += std::abs(a[i] - b[i]);
        diff += std::abs(a[i] - c[i]);
    }
    CHECK(same == 0.0);
    CHECK(diff > 1e-3);

    const Matrix u = random_unitary(5, 11);
    CHECK(fro_norm(adjoint(u) * u - Matrix::identity(5)) < 1e-12);
    CHECK_THROWS_AS(random_density(2, 3, 1), BadRank);

    // single-qubit states drawn uniformly cover the sphere: the average
    // Bloch vector of many samples is near zero
    double bx = 0.0, by = 0.0, bz = 0.0;
    const int n = 2000;
    for (int i = 0; i < n; ++i) {
        const PureState psi = random_pure(2, 10000 + std::uint64_t(i));
        const cplx off = std::conj(psi[0]) * psi[1];
        bx += 2.0 * off.real();
        by += 2.0 * off.imag();
        bz += std::norm(psi[0]) - std::norm(psi[1]);
    }
    CHECK(std::abs(bx / n) < 0.05);
    CHECK(std::abs(by / n) < 0.05);
    CHECK(std::abs(bz / n) < 0.05);
}
