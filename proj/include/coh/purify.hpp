#pragma once

// Minimum-variance purification machinery: the canonical purification,
// the closed-form optimal auxiliary Hamiltonian, purification variances
// computed in the system eigenbasis, the auxiliary-system QFI, and a
// seeded gradient-descent oracle.

#include <cmath>
#include <cstdint>
#include <random>

#include "coh/linalg.hpp"
#include "coh/qfi.hpp"

namespace coh {

struct Purification {
    PureState joint; // on S (x) A, index s*dim_a + a
    std::size_t dim_s = 0, dim_a = 0;
};

// |Phi> = sum_i sqrt(p_i) |phi_i>_S |phi_i>_A. Both reduced states equal rho.
inline Purification standard_purification(const DensityOperator& rho) {
    const std::size_t n = rho.dim();
    const auto& p = rho.eigenvalues();
    const Matrix& v = rho.eigenvectors();
    std::vector<cplx> joint(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double sp = std::sqrt(std::max(p[i], 0.0));
        if (sp == 0.0) continue;
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t a = 0; a < n; ++a) joint[s * n + a] += sp * v(s, i) * v(a, i);
    }
    double n2 = 0.0;
    for (const auto& x : joint) n2 += std::norm(x);
    const double nn = std::sqrt(n2);
    for (auto& x : joint) x /= nn;
    return Purification{PureState(std::move(joint)), n, n};
}

// H_A = -2 sum_{i,j} sqrt(p_i p_j)/(p_i + p_j) |phi_j><phi_i| H_S |phi_j><phi_i|.
// Pairs below the rank cutoff contribute 0, extending H_A by zeros off-support.
inline Matrix optimal_aux_hamiltonian(const DensityOperator& rho, const Matrix& h_s,
                                      double cutoff = cutoff_rank) {
    if (rho.dim() != h_s.rows()) throw DimensionMismatch("optimal_aux_hamiltonian: dims differ");
    const auto& p = rho.eigenvalues();
    const Matrix he = to_eigenbasis(rho, h_s);
    const std::size_t n = rho.dim();
    Matrix ha(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (p[a] + p[b] <= cutoff) continue;
            const double w = std::sqrt(p[a] * p[b]) / (p[a] + p[b]);
            ha(a, b) = -2.0 * w * std::conj(he(a, b));
        }
    return rho.eigenvectors() * ha * adjoint(rho.eigenvectors());
}

// Variance of the canonical purification under H_S (x) I + I (x) H_A,
// evaluated in rho's eigenbasis (transposes are taken there).
inline double purification_variance(const DensityOperator& rho, const Matrix& h_s,
                                    const Matrix& h_a) {
    if (h_a.rows() != rho.dim() || h_s.rows() != rho.dim())
        throw DimensionMismatch("purification_variance: dims differ");
    const auto& p = rho.eigenvalues();
    const Matrix hse = to_eigenbasis(rho, h_s);
    const Matrix hae = to_eigenbasis(rho, h_a);
    const std::size_t n = rho.dim();
    double e = 0.0, e2 = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        e += p[i] * (hse(i, i).real() + hae(i, i).real());
        for (std::size_t j = 0; j < n; ++j) {
            e2 += p[i] * (std::norm(hse(i, j)) + std::norm(hae(i, j)));
            // <Phi| H_S (x) H_A |Phi> = sum_{ij} sqrt(p_i p_j) (H_S)_{ji} (H_A)_{ji}
            cross += std::sqrt(p[i] * p[j]) * (hse(j, i) * hae(j, i)).real();
        }
    }
    return e2 + 2.0 * cross - e * e;
}

// F_{H_A}(rho) for the optimal auxiliary Hamiltonian, in closed form.
inline double aux_qfi(const DensityOperator& rho, const Matrix& h_s, double cutoff = cutoff_rank) {
    const auto& p = rho.eigenvalues();
    const Matrix he = to_eigenbasis(rho, h_s);
    const std::size_t n = rho.dim();
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (p[i] + p[j] <= cutoff) continue;
            const double d = p[i] - p[j];
            const double s = p[i] + p[j];
            f += 8.0 * p[i] * p[j] * d * d / (s * s * s) * std::norm(he(i, j));
        }
    return f;
}

struct MinVarianceResult {
    double best_variance = 0.0;
    Matrix best_h_a;
    bool converged = false;
};

// Independent oracle: gradient descent (finite-difference gradient) over
// Hermitian H_A from several seeds, minimizing purification_variance.
inline MinVarianceResult numeric_min_oracle(const DensityOperator& rho, const Matrix& h_s,
                                            std::uint64_t seed, int iters = 400) {
    const std::size_t n = rho.dim();
    const std::size_t nparam = n * n; // real parameters of a Hermitian matrix
    auto unpack = [&](const std::vector<double>& x) {
        Matrix m(n, n);
        std::size_t t = 0;
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = x[t++];
            for (std::size_t j = i + 1; j < n; ++j) {
                m(i, j) = cplx(x[t], x[t + 1]);
                m(j, i) = std::conj(m(i, j));
                t += 2;
            }
        }
        return m;
    };
    auto objective = [&](const std::vector<double>& x) {
        return purification_variance(rho, h_s, unpack(x));
    };

    MinVarianceResult best;
    best.best_variance = purification_variance(rho, h_s, Matrix(n, n));
    best.best_h_a = Matrix(n, n);

    const double scale = std::max(1.0, fro_norm(h_s));
    for (int trial = 0; trial < 4; ++trial) {
        std::mt19937_64 rng(seed + std::uint64_t(trial) * 7919);
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<double> x(nparam);
        if (trial > 0)
            for (auto& v : x) v = 0.5 * scale * g(rng);
        double fx = objective(x);
        double step = 0.2;
        const double fd = 1e-6 * scale;
        bool converged = false;
        for (int it = 0; it < iters; ++it) {
            std::vector<double> grad(nparam);
            double gnorm2 = 0.0;
            for (std::size_t k = 0; k < nparam; ++k) {
                std::vector<double> xp = x, xm = x;
                xp[k] += fd;
                xm[k] -= fd;
                grad[k] = (objective(xp) - objective(xm)) / (2.0 * fd);
                gnorm2 += grad[k] * grad[k];
            }
            if (std::sqrt(gnorm2) < 1e-9 * std::max(1.0, fx)) {
                converged = true;
                break;
            }
            // backtracking line search
            bool moved = false;
            for (int bt = 0; bt < 40; ++bt) {
                std::vector<double> xn = x;
                for (std::size_t k = 0; k < nparam; ++k) xn[k] -= step * grad[k];
                const double fn = objective(xn);
                if (fn < fx - 1e-15) {
                    x = std::move(xn);
                    fx = fn;
                    step *= 1.5;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) {
                converged = true;
                break;
            }
        }
        if (fx < best.best_variance) {
            best.best_variance = fx;
            best.best_h_a = unpack(x);
            best.converged = converged;
        }
    }
    return best;
}

} // namespace coh
