#pragma once

// Convex-roof machinery: the optimal (Yu) ensemble obtained from the
// eigenbasis of the optimal auxiliary Hamiltonian, period partitioning of
// energy levels, ensemble refinement, and a brute-force qubit roof oracle
// over exact Stiefel-parametrized decompositions.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>

#include "coh/linalg.hpp"
#include "coh/purify.hpp"
#include "coh/qfi.hpp"
#include "coh/spectral.hpp"

namespace coh {

inline constexpr double tol_link = 1e-10;

struct Ensemble {
    std::vector<std::pair<double, PureState>> members;

    Matrix average() const {
        Matrix m(members.front().second.dim(), members.front().second.dim());
        for (const auto& [q, eta] : members) m = m + q * eta.projector();
        return m;
    }
};

struct PartitionSet {
    std::vector<Matrix> projectors;
};

namespace detail {

// Phase convention for deterministic ensembles: first component of each
// eigenvector with nonnegligible magnitude is made real positive.
inline void canonicalize_columns(Matrix& v) {
    for (std::size_t j = 0; j < v.cols(); ++j)
        for (std::size_t i = 0; i < v.rows(); ++i)
            if (std::abs(v(i, j)) > 1e-12) {
                const cplx ph = std::conj(v(i, j)) / std::abs(v(i, j));
                for (std::size_t k = 0; k < v.rows(); ++k) v(k, j) *= ph;
                break;
            }
}

// Ensemble from row-orthonormal mixing coefficients: members
// eta_k = sum_j V_kj sqrt(p_j) |phi_j> / sqrt(q_k).
inline Ensemble ensemble_from_mixing(const DensityOperator& rho,
                                     const std::vector<std::vector<cplx>>& u,
                                     double drop = 1e-14) {
    const auto& p = rho.eigenvalues();
    const Matrix& v = rho.eigenvectors();
    const std::size_t n = rho.dim();
    Ensemble e;
    double total = 0.0;
    for (const auto& row : u) {
        double q = 0.0;
        for (std::size_t j = 0; j < n; ++j) q += p[j] * std::norm(row[j]);
        if (q <= drop) continue;
        std::vector<cplx> amps(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const cplx c = row[j] * std::sqrt(std::max(p[j], 0.0)) / std::sqrt(q);
            for (std::size_t s = 0; s < n; ++s) amps[s] += c * v(s, j);
        }
        double n2 = 0.0;
        for (const auto& a : amps) n2 += std::norm(a);
        const double nn = std::sqrt(n2);
        for (auto& a : amps) a /= nn;
        const PureState eta(std::move(amps));
        // merge members equal up to a global phase (degenerate mixing rows)
        bool merged = false;
        for (auto& [q0, eta0] : e.members)
            if (std::abs(std::abs(inner(eta0, eta)) - 1.0) < 1e-12) {
                q0 += q;
                merged = true;
                break;
            }
        if (!merged) e.members.emplace_back(q, eta);
        total += q;
    }
    for (auto& [q, eta] : e.members) q /= total;
    return e;
}

} // namespace detail

// Yu's optimal ensemble: mixing unitary U_kj = <E_k|phi_j> where {|E_k>}
// diagonalizes the optimal auxiliary Hamiltonian.
inline Ensemble yu_ensemble(const DensityOperator& rho, const Matrix& h_s) {
    const Matrix h_a = optimal_aux_hamiltonian(rho, h_s);
    auto eig = hermitian_eig(h_a);
    detail::canonicalize_columns(eig.vectors);
    const std::size_t n = rho.dim();
    std::vector<std::vector<cplx>> u(n, std::vector<cplx>(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t x = 0; x < n; ++x)
                s += std::conj(eig.vectors(x, k)) * rho.eigenvectors()(x, j);
            u[k][j] = s;
        }
    return detail::ensemble_from_mixing(rho, u);
}

inline double ensemble_avg_qfi(const Ensemble& e, const Matrix& h) {
    double s = 0.0;
    for (const auto& [q, eta] : e.members) s += q * 4.0 * variance(eta, h);
    return s;
}

// Disjoint level partitions linked by the coherence structure of rho:
// levels E1, E2 join one class when ||Pi_1 rho Pi_2||_F > tol.
inline PartitionSet period_partitions(const DensityOperator& rho, const PeriodicHamiltonian& h,
                                      double tol = tol_link) {
    if (rho.dim() != h.dim()) throw DimensionMismatch("period_partitions: dims differ");
    const Matrix rho_lv = adjoint(h.basis) * rho.matrix() * h.basis;

    std::vector<std::int64_t> levels = h.level_of;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    const std::size_t nl = levels.size();

    auto block_norm = [&](std::int64_t e1, std::int64_t e2) {
        double s = 0.0;
        for (std::size_t i = 0; i < h.dim(); ++i)
            for (std::size_t j = 0; j < h.dim(); ++j)
                if (h.level_of[i] == e1 && h.level_of[j] == e2) s += std::norm(rho_lv(i, j));
        return std::sqrt(s);
    };

    std::vector<std::size_t> parent(nl);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    std::int64_t gap_gcd = 0;
    for (std::size_t a = 0; a < nl; ++a)
        for (std::size_t b = a + 1; b < nl; ++b)
            if (block_norm(levels[a], levels[b]) > tol) {
                parent[find(a)] = find(b);
                gap_gcd = std::gcd(gap_gcd, levels[b] - levels[a]);
            }

    std::vector<std::vector<std::size_t>> classes;
    {
        std::vector<std::size_t> root_index(nl, SIZE_MAX);
        for (std::size_t a = 0; a < nl; ++a) {
            const std::size_t r = find(a);
            if (root_index[r] == SIZE_MAX) {
                root_index[r] = classes.size();
                classes.emplace_back();
            }
            classes[root_index[r]].push_back(a);
        }
    }

    // Within each class all gaps must be multiples of the coherence gcd
    // (2*pi/tau_rho in energy units).
    if (gap_gcd > 1)
        for (const auto& cls : classes)
            for (std::size_t i = 1; i < cls.size(); ++i)
                if ((levels[cls[i]] - levels[cls[0]]) % gap_gcd != 0)
                    throw PeriodMismatch("period_partitions: class gap off the period grid");

    PartitionSet ps;
    for (const auto& cls : classes) {
        Matrix p(h.dim(), h.dim());
        for (std::size_t i = 0; i < h.dim(); ++i)
            for (std::size_t a : cls)
                if (h.level_of[i] == levels[a]) p(i, i) = 1.0;
        ps.projectors.push_back(h.basis * p * adjoint(h.basis));
    }
    return ps;
}

// Period of rho under h: tau / gcd of level gaps carrying coherence.
// nullopt = stationary ([rho, H] = 0).
inline std::optional<double> density_period(const DensityOperator& rho,
                                            const PeriodicHamiltonian& h, double tol = tol_link) {
    const Matrix rho_lv = adjoint(h.basis) * rho.matrix() * h.basis;
    std::int64_t g = 0;
    for (std::size_t i = 0; i < h.dim(); ++i)
        for (std::size_t j = 0; j < h.dim(); ++j) {
            if (h.level_of[i] == h.level_of[j]) continue;
            if (std::abs(rho_lv(i, j)) > tol) g = std::gcd(g, std::abs(h.level_of[i] - h.level_of[j]));
        }
    if (g == 0) return std::nullopt;
    return h.tau / double(g);
}

// Project every member onto the partitions; weights multiply, the average
// variance never increases, and reconstruction is preserved.
inline Ensemble refine_ensemble_periods(const Ensemble& e, const PartitionSet& parts,
                                        const PeriodicHamiltonian& h) {
    (void)h;
    Ensemble out;
    for (const auto& [q, eta] : e.members)
        for (const Matrix& p : parts.projectors) {
            std::vector<cplx> amps(eta.dim(), 0.0);
            double w = 0.0;
            for (std::size_t i = 0; i < eta.dim(); ++i) {
                cplx s = 0.0;
                for (std::size_t j = 0; j < eta.dim(); ++j) s += p(i, j) * eta[j];
                amps[i] = s;
                w += std::norm(s);
            }
            if (w <= 1e-14) continue;
            const double nn = std::sqrt(w);
            for (auto& a : amps) a /= nn;
            out.members.emplace_back(q * w, PureState(std::move(amps)));
        }
    double total = 0.0;
    for (const auto& [q, eta] : out.members) total += q;
    for (auto& [q, eta] : out.members) q /= total;
    return out;
}

// Brute-force convex-roof oracle for qubits: exhaustive grid plus local
// refinement over 2-member decompositions (exact Stiefel parametrization),
// plus seeded random 3- and 4-member searches. Every evaluated ensemble
// reconstructs rho exactly by construction.
inline double bruteforce_roof_oracle(const DensityOperator& rho, const Matrix& h,
                                     std::size_t grid = 64, std::uint64_t seed = 1) {
    if (rho.dim() != 2) throw DimensionMismatch("bruteforce_roof_oracle: qubit only");
    const auto& p = rho.eigenvalues();

    if (p.front() <= cutoff_rank) {
        // pure state: the single-member ensemble is optimal
        std::vector<std::vector<cplx>> u{{0.0, 1.0}};
        return ensemble_avg_qfi(detail::ensemble_from_mixing(rho, u), h);
    }

    auto eval2 = [&](double theta, double phi) {
        const double c = std::cos(theta), s = std::sin(theta);
        const cplx e = std::exp(cplx(0.0, phi));
        std::vector<std::vector<cplx>> u{{c, s * e}, {-s * std::conj(e), c}};
        return ensemble_avg_qfi(detail::ensemble_from_mixing(rho, u), h);
    };

    double best = eval2(0.0, 0.0);
    double bt = 0.0, bp = 0.0;
    const double pi = std::numbers::pi;
    for (std::size_t i = 0; i <= grid; ++i)
        for (std::size_t j = 0; j < 2 * grid; ++j) {
            const double theta = 0.5 * pi * double(i) / double(grid);
            const double phi = 2.0 * pi * double(j) / double(2 * grid);
            const double v = eval2(theta, phi);
            if (v < best) {
                best = v;
                bt = theta;
                bp = phi;
            }
        }
    // local refinement by shrinking grid
    double ht = 0.5 * pi / double(grid), hp = pi / double(grid);
    for (int it = 0; it < 40; ++it) {
        bool improved = false;
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                const double v = eval2(bt + di * ht, bp + dj * hp);
                if (v < best - 1e-15) {
                    best = v;
                    bt += di * ht;
                    bp += dj * hp;
                    improved = true;
                }
            }
        if (!improved) {
            ht *= 0.5;
            hp *= 0.5;
        }
    }

    // random K-member searches (K = 3, 4) via QR-orthonormalized Gaussians
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::size_t k : {std::size_t{3}, std::size_t{4}}) {
        for (int trial = 0; trial < 200; ++trial) {
            Matrix m(k, 2);
            for (auto& v : m.data()) v = cplx(g(rng), g(rng));
            // orthonormalize the two columns
            for (std::size_t j = 0; j < 2; ++j) {
                for (std::size_t l = 0; l < j; ++l) {
                    cplx proj = 0.0;
                    for (std::size_t i = 0; i < k; ++i) proj += std::conj(m(i, l)) * m(i, j);
                    for (std::size_t i = 0; i < k; ++i) m(i, j) -= proj * m(i, l);
                }
                double n2 = 0.0;
                for (std::size_t i = 0; i < k; ++i) n2 += std::norm(m(i, j));
                const double nn = std::sqrt(n2);
                for (std::size_t i = 0; i < k; ++i) m(i, j) /= nn;
            }
            std::vector<std::vector<cplx>> u(k, std::vector<cplx>(2));
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < 2; ++j) u[i][j] = m(i, j);
            const double v = ensemble_avg_qfi(detail::ensemble_from_mixing(rho, u), h);
            best = std::min(best, v);
        }
    }
    return best;
}

} // namespace coh
