#pragma once

// Dense complex linear algebra, quantum states, and state-distance
// primitives. Dimensions here are small (<= ~64), so everything is
// straightforward dense arithmetic; the Hermitian eigensolver is a
// cyclic Jacobi iteration with a deterministic sweep order.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "coh/errors.hpp"

namespace coh {

using cplx = std::complex<double>;

inline constexpr double tol_herm = 1e-9;
inline constexpr double tol_trace = 1e-9;
inline constexpr double tol_psd = 1e-9;
inline constexpr double tol_eig = 1e-10;
inline constexpr double tol_norm = 1e-9;

class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cplx{0.0, 0.0}) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static Matrix diag(const std::vector<double>& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<cplx>& data() const { return a_; }
    std::vector<cplx>& data() { return a_; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

inline Matrix operator+(const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw DimensionMismatch("matrix add: shape mismatch");
    Matrix r = x;
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] += y.data()[i];
    return r;
}

inline Matrix operator-(const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw DimensionMismatch("matrix sub: shape mismatch");
    Matrix r = x;
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] -= y.data()[i];
    return r;
}

inline Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols() != y.rows()) throw DimensionMismatch("matrix mul: shape mismatch");
    Matrix r(x.rows(), y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t k = 0; k < x.cols(); ++k) {
            const cplx xik = x(i, k);
            if (xik == cplx{}) continue;
            for (std::size_t j = 0; j < y.cols(); ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

inline Matrix operator*(cplx s, const Matrix& x) {
    Matrix r = x;
    for (auto& v : r.data()) v *= s;
    return r;
}
inline Matrix operator*(double s, const Matrix& x) { return cplx(s, 0.0) * x; }

inline Matrix adjoint(const Matrix& x) {
    Matrix r(x.cols(), x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) r(j, i) = std::conj(x(i, j));
    return r;
}

inline Matrix transpose(const Matrix& x) {
    Matrix r(x.cols(), x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) r(j, i) = x(i, j);
    return r;
}

inline Matrix conj(const Matrix& x) {
    Matrix r = x;
    for (auto& v : r.data()) v = std::conj(v);
    return r;
}

inline cplx trace(const Matrix& x) {
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(x.rows(), x.cols()); ++i) t += x(i, i);
    return t;
}

inline double fro_norm(const Matrix& x) {
    double s = 0.0;
    for (const auto& v : x.data()) s += std::norm(v);
    return std::sqrt(s);
}

inline Matrix tensor(const Matrix& x, const Matrix& y) {
    Matrix r(x.rows() * y.rows(), x.cols() * y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const cplx xij = x(i, j);
            if (xij == cplx{}) continue;
            for (std::size_t k = 0; k < y.rows(); ++k)
                for (std::size_t l = 0; l < y.cols(); ++l)
                    r(i * y.rows() + k, j * y.cols() + l) = xij * y(k, l);
        }
    return r;
}

inline double hermiticity_defect(const Matrix& m) {
    double d = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) d += std::norm(m(i, j) - std::conj(m(j, i)));
    return std::sqrt(d);
}

inline bool is_hermitian(const Matrix& m, double tol = tol_herm) {
    if (m.rows() != m.cols()) return false;
    return hermiticity_defect(m) <= tol * std::max(1.0, fro_norm(m));
}

struct EigResult {
    std::vector<double> values; // ascending
    Matrix vectors;             // columns are eigenvectors
};

// Cyclic Jacobi for Hermitian matrices. Deterministic (p, q) sweep order,
// so repeated runs on the same input are bitwise reproducible.
inline EigResult hermitian_eig(const Matrix& m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw DimensionMismatch("hermitian_eig: matrix not square");
    if (!is_hermitian(m)) throw NotHermitian("hermitian_eig: symmetry violated beyond tolerance");

    Matrix a = m;
    // Symmetrize round-off before iterating.
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = cplx(a(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }
    Matrix v = Matrix::identity(n);
    const double scale = std::max(1.0, fro_norm(a));

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    const int max_sweeps = 100;
    int sweep = 0;
    while (off_norm() > 1e-14 * scale) {
        if (++sweep > max_sweeps) throw NoConvergence("hermitian_eig: sweep cap exceeded");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-18 * scale) continue;
                const cplx phase = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * cs;
                const cplx jpq = sn * phase;          // J(p,q)
                const cplx jqp = -sn * std::conj(phase); // J(q,p)
                // a <- J^dag a J ; v <- v J
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = cs * akp + jqp * akq;
                    a(k, q) = jpq * akp + cs * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = cs * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + cs * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = cs * vkp + jqp * vkq;
                    v(k, q) = jpq * vkp + cs * vkq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cplx(a(p, p).real(), 0.0);
                a(q, q) = cplx(a(q, q).real(), 0.0);
            }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigResult r;
    r.values.resize(n);
    r.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        r.values[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) r.vectors(i, j) = v(i, order[j]);
    }
    return r;
}

// -------- states --------

class PureState {
  public:
    PureState() = default;
    explicit PureState(std::vector<cplx> amps) : a_(std::move(amps)) {
        double n2 = 0.0;
        for (const auto& v : a_) n2 += std::norm(v);
        if (std::abs(std::sqrt(n2) - 1.0) > tol_norm)
            throw Error("PureState: amplitudes not normalized");
    }
    static PureState basis(std::size_t dim, std::size_t k) {
        std::vector<cplx> a(dim, 0.0);
        a[k] = 1.0;
        return PureState(std::move(a));
    }

    std::size_t dim() const { return a_.size(); }
    const std::vector<cplx>& amplitudes() const { return a_; }
    cplx operator[](std::size_t i) const { return a_[i]; }

    Matrix projector() const {
        Matrix p(dim(), dim());
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < dim(); ++j) p(i, j) = a_[i] * std::conj(a_[j]);
        return p;
    }

  private:
    std::vector<cplx> a_;
};

inline cplx inner(const PureState& x, const PureState& y) {
    if (x.dim() != y.dim()) throw DimensionMismatch("inner: dims differ");
    cplx s = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

inline PureState apply(const Matrix& m, const PureState& s) {
    if (m.cols() != s.dim()) throw DimensionMismatch("apply: dims differ");
    std::vector<cplx> out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * s[j];
    double n = 0.0;
    for (const auto& v : out) n += std::norm(v);
    n = std::sqrt(n);
    for (auto& v : out) v /= n;
    return PureState(std::move(out));
}

inline PureState tensor(const PureState& x, const PureState& y) {
    std::vector<cplx> a(x.dim() * y.dim());
    for (std::size_t i = 0; i < x.dim(); ++i)
        for (std::size_t j = 0; j < y.dim(); ++j) a[i * y.dim() + j] = x[i] * y[j];
    return PureState(std::move(a));
}

class DensityOperator {
  public:
    DensityOperator() = default;
    explicit DensityOperator(Matrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) throw DimensionMismatch("DensityOperator: not square");
        if (!is_hermitian(m_, tol_herm)) throw NotHermitian("DensityOperator: not Hermitian");
        if (std::abs(trace(m_).real() - 1.0) > tol_trace || std::abs(trace(m_).imag()) > tol_trace)
            throw Error("DensityOperator: trace != 1");
        auto eig = hermitian_eig(m_);
        if (eig.values.front() < -tol_psd) throw NotPsd("DensityOperator: negative eigenvalue");
        eig_ = std::move(eig);
        // clip tiny negatives from round-off
        for (auto& p : eig_.values) p = std::max(p, 0.0);
    }
    explicit DensityOperator(const PureState& s) : DensityOperator(s.projector()) {}

    std::size_t dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    const std::vector<double>& eigenvalues() const { return eig_.values; }
    const Matrix& eigenvectors() const { return eig_.vectors; }

    Matrix sqrt_matrix() const {
        const std::size_t n = dim();
        Matrix s(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                cplx v = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    v += std::sqrt(eig_.values[k]) * eig_.vectors(i, k) * std::conj(eig_.vectors(j, k));
                s(i, j) = v;
            }
        return s;
    }

  private:
    Matrix m_;
    EigResult eig_;
};

inline DensityOperator mix(double p, const DensityOperator& a, const DensityOperator& b) {
    return DensityOperator(p * a.matrix() + (1.0 - p) * b.matrix());
}

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
    return DensityOperator(tensor(a.matrix(), b.matrix()));
}

// Partial trace over the second (subsystem B) factor of an (dA*dB)-dim matrix.
inline Matrix partial_trace_b(const Matrix& m, std::size_t da, std::size_t db) {
    Matrix r(da, da);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j) {
            cplx s = 0.0;
            for (std::size_t b = 0; b < db; ++b) s += m(i * db + b, j * db + b);
            r(i, j) = s;
        }
    return r;
}

inline Matrix partial_trace_a(const Matrix& m, std::size_t da, std::size_t db) {
    Matrix r(db, db);
    for (std::size_t i = 0; i < db; ++i)
        for (std::size_t j = 0; j < db; ++j) {
            cplx s = 0.0;
            for (std::size_t a = 0; a < da; ++a) s += m(a * db + i, a * db + j);
            r(i, j) = s;
        }
    return r;
}

// -------- distances --------

inline Matrix psd_sqrt(const Matrix& m) {
    auto eig = hermitian_eig(m);
    const std::size_t n = m.rows();
    Matrix s(n, n);
    for (auto& p : eig.values) {
        if (p < -tol_psd) throw NotPsd("psd_sqrt: matrix not PSD");
        p = std::max(p, 0.0);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx v = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                v += std::sqrt(eig.values[k]) * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
            s(i, j) = v;
        }
    return s;
}

inline double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) throw DimensionMismatch("fidelity: dims differ");
    const Matrix sr = rho.sqrt_matrix();
    const Matrix inner = sr * sigma.matrix() * sr;
    auto eig = hermitian_eig(inner);
    double s = 0.0;
    for (double p : eig.values) s += std::sqrt(std::max(p, 0.0));
    return std::clamp(s * s, 0.0, 1.0);
}

inline double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) throw DimensionMismatch("trace_distance: dims differ");
    auto eig = hermitian_eig(rho.matrix() - sigma.matrix());
    double s = 0.0;
    for (double p : eig.values) s += std::abs(p);
    return 0.5 * s;
}

inline double bures_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    const double f = fidelity(rho, sigma);
    return std::sqrt(std::max(0.0, 2.0 * (1.0 - std::sqrt(f))));
}

// -------- seeded random sampling --------

inline PureState random_pure(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> a(dim);
    double n2 = 0.0;
    for (auto& v : a) {
        v = cplx(g(rng), g(rng));
        n2 += std::norm(v);
    }
    const double n = std::sqrt(n2);
    for (auto& v : a) v /= n;
    return PureState(std::move(a));
}

inline Matrix random_unitary(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(dim, dim);
    for (auto& v : m.data()) v = cplx(g(rng), g(rng));
    // Gram-Schmidt with positive-real diagonal phase fix.
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            cplx proj = 0.0;
            for (std::size_t i = 0; i < dim; ++i) proj += std::conj(m(i, k)) * m(i, j);
            for (std::size_t i = 0; i < dim; ++i) m(i, j) -= proj * m(i, k);
        }
        double n2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) n2 += std::norm(m(i, j));
        const double n = std::sqrt(n2);
        for (std::size_t i = 0; i < dim; ++i) m(i, j) /= n;
        const cplx d = m(j, j);
        if (std::abs(d) > 1e-14) {
            const cplx ph = std::conj(d) / std::abs(d);
            for (std::size_t i = 0; i < dim; ++i) m(i, j) *= ph;
        }
    }
    return m;
}

// Partial trace of a Haar-like pure state on dim x rank.
inline DensityOperator random_density(std::size_t dim, std::size_t rank, std::uint64_t seed) {
    if (rank < 1 || rank > dim) throw BadRank("random_density: rank must be in [1, dim]");
    const PureState joint = random_pure(dim * rank, seed);
    Matrix rho = partial_trace_b(joint.projector(), dim, rank);
    // symmetrize round-off
    rho = 0.5 * (rho + adjoint(rho));
    const double tr = trace(rho).real();
    rho = (1.0 / tr) * rho;
    return DensityOperator(std::move(rho));
}

inline Matrix random_hermitian(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = g(rng);
        for (std::size_t j = i + 1; j < dim; ++j) {
            m(i, j) = cplx(g(rng), g(rng)) * std::sqrt(0.5);
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

} // namespace coh
