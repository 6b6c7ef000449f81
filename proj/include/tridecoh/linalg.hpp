// linalg.hpp: dense complex matrices, Hermitian eigensolver and propagators
//
// Dimensions in this project never exceed a few hundred, so everything is a
// plain row-major std::vector and the eigensolver is cyclic complex Jacobi.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tridecoh/errors.hpp"

namespace tridecoh {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

class ComplexMatrix {
public:
    ComplexMatrix() = default;

    explicit ComplexMatrix(std::size_t dim, std::string basis_tag = {})
        : dim_(dim), entries_(dim * dim), basis_tag_(std::move(basis_tag)) {}

    ComplexMatrix(std::size_t dim, std::vector<cplx> entries, std::string basis_tag = {})
        : dim_(dim), entries_(std::move(entries)), basis_tag_(std::move(basis_tag)) {
        if (entries_.size() != dim_ * dim_)
            throw DimensionMismatch("ComplexMatrix: entries length " + std::to_string(entries_.size()) +
                                    " != dim^2 = " + std::to_string(dim_ * dim_));
    }

    static ComplexMatrix identity(std::size_t dim, std::string basis_tag = {}) {
        ComplexMatrix m(dim, std::move(basis_tag));
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const double> values, std::string basis_tag = {}) {
        ComplexMatrix m(values.size(), std::move(basis_tag));
        for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
        return m;
    }

    /// |v><v|
    static ComplexMatrix outer(std::span<const cplx> v, std::string basis_tag = {}) {
        ComplexMatrix m(v.size(), std::move(basis_tag));
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
        return m;
    }

    std::size_t dim() const noexcept { return dim_; }
    const std::string& basis_tag() const noexcept { return basis_tag_; }
    void set_basis_tag(std::string tag) { basis_tag_ = std::move(tag); }

    cplx& operator()(std::size_t i, std::size_t j) noexcept { return entries_[i * dim_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * dim_ + j]; }

    std::span<cplx> entries() noexcept { return entries_; }
    std::span<const cplx> entries() const noexcept { return entries_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_dim(o);
        for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_dim(o);
        for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
        return *this;
    }
    ComplexMatrix& operator*=(cplx s) noexcept {
        for (auto& e : entries_) e *= s;
        return *this;
    }

private:
    void check_same_dim(const ComplexMatrix& o) const {
        if (o.dim_ != dim_)
            throw DimensionMismatch("matrix dimensions differ: " + std::to_string(dim_) + " vs " +
                                    std::to_string(o.dim_));
    }

    std::size_t dim_ = 0;
    std::vector<cplx> entries_;
    std::string basis_tag_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
inline ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("matrix product: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    const std::size_t n = a.dim();
    ComplexMatrix c(n, a.basis_tag());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline CVector operator*(const ComplexMatrix& a, std::span<const cplx> v) {
    if (a.dim() != v.size()) throw DimensionMismatch("matrix-vector product: dimension mismatch");
    CVector out(v.size());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        cplx acc{};
        for (std::size_t j = 0; j < a.dim(); ++j) acc += a(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix out(m.dim(), m.basis_tag());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) out(j, i) = std::conj(m(i, j));
    return out;
}

inline cplx trace(const ComplexMatrix& m) {
    cplx acc{};
    for (std::size_t i = 0; i < m.dim(); ++i) acc += m(i, i);
    return acc;
}

inline double max_abs(const ComplexMatrix& m) {
    double out = 0.0;
    for (const auto& e : m.entries()) out = std::max(out, std::abs(e));
    return out;
}

inline double frobenius_norm(const ComplexMatrix& m) {
    double acc = 0.0;
    for (const auto& e : m.entries()) acc += std::norm(e);
    return std::sqrt(acc);
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("max_abs_diff: dimension mismatch");
    double out = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k)
        out = std::max(out, std::abs(a.entries()[k] - b.entries()[k]));
    return out;
}

/// Largest |M_ij - conj(M_ji)|.
inline double hermiticity_defect(const ComplexMatrix& m) {
    double out = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = i; j < m.dim(); ++j)
            out = std::max(out, std::abs(m(i, j) - std::conj(m(j, i))));
    return out;
}

inline bool is_hermitian(const ComplexMatrix& m, double rel_tol = 1e-12) {
    return hermiticity_defect(m) <= rel_tol * std::max(1.0, max_abs(m));
}

inline cplx inner(std::span<const cplx> u, std::span<const cplx> v) {
    cplx acc{};
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::conj(u[i]) * v[i];
    return acc;
}

struct HermitianEigenSystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column k is the eigenvector for values[k]

    CVector vector(std::size_t k) const {
        CVector v(vectors.dim());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = vectors(i, k);
        return v;
    }

    /// V diag(f(lambda)) V^dagger
    template <class F>
    ComplexMatrix apply(F&& f) const {
        const std::size_t n = vectors.dim();
        std::vector<cplx> fv(n);
        for (std::size_t k = 0; k < n; ++k) fv[k] = f(values[k]);
        ComplexMatrix out(n, vectors.basis_tag());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                cplx acc{};
                for (std::size_t k = 0; k < n; ++k) acc += vectors(i, k) * fv[k] * std::conj(vectors(j, k));
                out(i, j) = acc;
            }
        return out;
    }

    ComplexMatrix reconstruct() const {
        return apply([](double x) { return cplx{x, 0.0}; });
    }
};

struct JacobiOptions {
    int max_sweeps = 100;
    double off_tol = 1e-13;  // relative to the Frobenius norm of the input
};

/// Cyclic complex Jacobi. Each (p, q) rotation is a phase change that makes
/// the pivot real followed by an ordinary real Jacobi rotation.
inline HermitianEigenSystem hermitian_eigensystem(const ComplexMatrix& m, JacobiOptions opts = {}) {
    if (!is_hermitian(m, 1e-12))
        throw NonHermitianInput("hermitian_eigensystem: Hermiticity defect " +
                                std::to_string(hermiticity_defect(m)));
    const std::size_t n = m.dim();
    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = m(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
            a(j, i) = std::conj(a(i, j));
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n, m.basis_tag());

    const double scale = frobenius_norm(a);
    const double target = opts.off_tol * scale;
    auto off_norm = [&] {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) acc += std::norm(a(i, j));
        return std::sqrt(acc);
    };

    int sweep = 0;
    for (double off = off_norm(); off > target; off = off_norm()) {
        if (++sweep > opts.max_sweeps)
            throw NoConvergence("hermitian_eigensystem: off-diagonal norm " + std::to_string(off) +
                                " after " + std::to_string(opts.max_sweeps) + " sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mod = std::abs(a(p, q));
                if (mod == 0.0) continue;
                const cplx phase = a(p, q) / mod;  // e^{i theta}
                const cplx phase_c = std::conj(phase);
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mod);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // J: col p = c e_p - s e^{-i theta} e_q, col q = s e_p + c e^{-i theta} e_q
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q) * phase_c;
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                    a(p, k) = std::conj(a(k, p));
                    a(q, k) = std::conj(a(k, q));
                }
                a(p, p) = app - t * mod;
                a(q, q) = aqq + t * mod;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q) * phase_c;
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    HermitianEigenSystem out{std::vector<double>(n), ComplexMatrix(n, m.basis_tag())};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

/// exp(i * scale * M) for Hermitian M.
inline ComplexMatrix hermitian_expm(const ComplexMatrix& m, double scale) {
    const auto eig = hermitian_eigensystem(m);
    return eig.apply([scale](double lambda) { return std::polar(1.0, scale * lambda); });
}

} // namespace tridecoh
