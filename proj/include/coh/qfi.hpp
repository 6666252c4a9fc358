#pragma once

// Quantum Fisher information of the time-evolved family e^{-iHt} rho e^{iHt},
// the symmetric logarithmic derivative, energy variance, Wigner-Yanase skew
// information, and a finite-difference fidelity oracle.

#include <cmath>
#include <cstdint>

#include "coh/linalg.hpp"

namespace coh {

inline constexpr double cutoff_rank = 1e-12;

struct QfiReport {
    double value = 0.0;
    std::size_t dropped_pairs = 0;
};

inline double variance(const PureState& psi, const Matrix& h) {
    if (psi.dim() != h.rows()) throw DimensionMismatch("variance: dims differ");
    std::vector<cplx> hpsi(h.rows(), 0.0);
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j) hpsi[i] += h(i, j) * psi[j];
    double e = 0.0, e2 = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        e += (std::conj(psi[i]) * hpsi[i]).real();
        e2 += std::norm(hpsi[i]);
    }
    return e2 - e * e;
}

inline double variance(const DensityOperator& rho, const Matrix& h) {
    if (rho.dim() != h.rows()) throw DimensionMismatch("variance: dims differ");
    const double e = trace(rho.matrix() * h).real();
    const double e2 = trace(rho.matrix() * h * h).real();
    return e2 - e * e;
}

// H transformed into rho's eigenbasis.
inline Matrix to_eigenbasis(const DensityOperator& rho, const Matrix& h) {
    return adjoint(rho.eigenvectors()) * h * rho.eigenvectors();
}

inline QfiReport qfi(const DensityOperator& rho, const Matrix& h, double cutoff = cutoff_rank) {
    if (rho.dim() != h.rows()) throw DimensionMismatch("qfi: dims differ");
    const auto& p = rho.eigenvalues();
    const Matrix he = to_eigenbasis(rho, h);
    QfiReport r;
    const std::size_t n = rho.dim();
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            if (p[j] + p[k] <= cutoff) {
                if (j < k) ++r.dropped_pairs;
                continue;
            }
            const double d = p[j] - p[k];
            r.value += 2.0 * d * d / (p[j] + p[k]) * std::norm(he(j, k));
        }
    return r;
}

// Symmetric logarithmic derivative L at t = 0, in the working basis:
// -i[H, rho] = (rho L + L rho)/2 on the support of rho.
inline Matrix sld(const DensityOperator& rho, const Matrix& h, double cutoff = cutoff_rank) {
    if (rho.dim() != h.rows()) throw DimensionMismatch("sld: dims differ");
    const auto& p = rho.eigenvalues();
    const Matrix he = to_eigenbasis(rho, h);
    const std::size_t n = rho.dim();
    Matrix le(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) {
            if (p[k] + p[j] <= cutoff) continue;
            le(k, j) = cplx(0.0, 2.0) * (p[k] - p[j]) / (p[k] + p[j]) * he(k, j);
        }
    return rho.eigenvectors() * le * adjoint(rho.eigenvectors());
}

inline double wigner_yanase(const DensityOperator& rho, const Matrix& h) {
    if (rho.dim() != h.rows()) throw DimensionMismatch("wigner_yanase: dims differ");
    const Matrix sr = rho.sqrt_matrix();
    const double t1 = trace(rho.matrix() * h * h).real();
    const double t2 = trace(sr * h * sr * h).real();
    return t1 - t2;
}

// Finite-difference oracle: F = -4 d^2/dt^2 sqrt(Fid(rho, rho_t)) at t = 0,
// central second difference with Richardson refinement on (h, h/2).
inline double qfi_fd_oracle(const DensityOperator& rho, const Matrix& ham, double step = 1e-3) {
    auto eig = hermitian_eig(ham);
    auto evolve = [&](double t) {
        const std::size_t n = ham.rows();
        Matrix d(n, n);
        for (std::size_t i = 0; i < n; ++i) d(i, i) = std::exp(cplx(0.0, -eig.values[i] * t));
        const Matrix u = eig.vectors * d * adjoint(eig.vectors);
        Matrix m = u * rho.matrix() * adjoint(u);
        m = 0.5 * (m + adjoint(m));
        return DensityOperator(std::move(m));
    };
    auto second_diff = [&](double h) {
        const double fp = std::sqrt(fidelity(rho, evolve(h)));
        const double fm = std::sqrt(fidelity(rho, evolve(-h)));
        return -4.0 * (fp - 2.0 + fm) / (h * h);
    };
    const double a = second_diff(step);
    const double b = second_diff(step / 2.0);
    return (4.0 * b - a) / 3.0;
}

} // namespace coh
