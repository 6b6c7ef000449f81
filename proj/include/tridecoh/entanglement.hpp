// entanglement.hpp: three-qubit index algebra, partial transpose / trace,
// negativity and linear entropy.
//
// Subsystems: A = ion internal state, B = phonon span {m-1, m},
// C = photon span {n-1, n}. Flat index = 4 a + 2 b + c.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "tridecoh/evolution.hpp"
#include "tridecoh/linalg.hpp"
#include "tridecoh/model.hpp"

namespace tridecoh {

inline constexpr const char* kTripartiteBasisTag = "tripartite:A(ion)xB(phonon)xC(photon)";

enum class Subsystem : std::size_t { A = 0, B = 1, C = 2 };

inline constexpr char subsystem_name(Subsystem s) noexcept { return "ABC"[static_cast<std::size_t>(s)]; }

struct TripartiteIndex {
    static constexpr std::size_t d_a = 2;
    static constexpr std::size_t d_b = 2;
    static constexpr std::size_t d_c = 2;
    static constexpr std::size_t dim = d_a * d_b * d_c;

    static constexpr std::size_t flat(std::size_t a, std::size_t b, std::size_t c) noexcept {
        return (a * d_b + b) * d_c + c;
    }

    /// Bit of subsystem s inside a flat index.
    static constexpr std::size_t digit(std::size_t k, Subsystem s) noexcept {
        return (k >> (2 - static_cast<std::size_t>(s))) & 1u;
    }

    static constexpr std::size_t with_digit(std::size_t k, Subsystem s, std::size_t value) noexcept {
        const std::size_t shift = 2 - static_cast<std::size_t>(s);
        return (k & ~(std::size_t{1} << shift)) | (value << shift);
    }

    /// Model-basis position -> tripartite flat index.
    static constexpr std::array<std::size_t, 4> embed{
        0,  // |g,m-1,n-1> = (0,0,0)
        4,  // |e,m-1,n-1> = (1,0,0)
        3,  // |g,m,n>     = (0,1,1)
        7,  // |e,m,n>     = (1,1,1)
    };
};

inline DensityOperator embed_tripartite(const DensityOperator& rho4, const TripartiteIndex& = {}) {
    if (rho4.dim() != 4)
        throw DimensionMismatch("embed_tripartite: expected dim 4, got " + std::to_string(rho4.dim()));
    ComplexMatrix out(TripartiteIndex::dim, kTripartiteBasisTag);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) out(TripartiteIndex::embed[i], TripartiteIndex::embed[j]) = rho4(i, j);
    return DensityOperator(std::move(out));
}

namespace detail {
inline void require_tripartite(const DensityOperator& rho, const char* who) {
    if (rho.dim() != TripartiteIndex::dim)
        throw DimensionMismatch(std::string(who) + ": expected dim 8, got " + std::to_string(rho.dim()));
}
} // namespace detail

/// <i,m,n|rho|j,r,s> |j,m,n><i,r,s| for the transposed party.
inline ComplexMatrix partial_transpose(const ComplexMatrix& rho, Subsystem party) {
    if (rho.dim() != TripartiteIndex::dim)
        throw DimensionMismatch("partial_transpose: expected dim 8, got " + std::to_string(rho.dim()));
    ComplexMatrix out(TripartiteIndex::dim, rho.basis_tag());
    for (std::size_t row = 0; row < TripartiteIndex::dim; ++row)
        for (std::size_t col = 0; col < TripartiteIndex::dim; ++col) {
            const std::size_t i = TripartiteIndex::digit(row, party);
            const std::size_t j = TripartiteIndex::digit(col, party);
            out(TripartiteIndex::with_digit(row, party, j), TripartiteIndex::with_digit(col, party, i)) =
                rho(row, col);
        }
    return out;
}

inline ComplexMatrix partial_transpose(const DensityOperator& rho, const TripartiteIndex&, Subsystem party) {
    detail::require_tripartite(rho, "partial_transpose");
    return partial_transpose(rho.matrix(), party);
}

/// Eigenvalues above this (negative) threshold are treated as zero.
inline constexpr double kNegativityFloor = 1e-10;

inline double negativity(const DensityOperator& rho, const TripartiteIndex& idx, Subsystem party) {
    const auto pt = partial_transpose(rho, idx, party);
    const auto eig = hermitian_eigensystem(pt);
    double acc = 0.0;
    for (double v : eig.values)
        if (v < -kNegativityFloor) acc -= v;
    return acc;
}

inline DensityOperator reduced_density(const DensityOperator& rho, const TripartiteIndex&, Subsystem keep) {
    detail::require_tripartite(rho, "reduced_density");
    ComplexMatrix out(2, std::string("reduced:") + subsystem_name(keep));
    for (std::size_t row = 0; row < TripartiteIndex::dim; ++row)
        for (std::size_t col = 0; col < TripartiteIndex::dim; ++col) {
            // traced parties must agree between row and column
            if (TripartiteIndex::with_digit(row, keep, 0) != TripartiteIndex::with_digit(col, keep, 0)) continue;
            out(TripartiteIndex::digit(row, keep), TripartiteIndex::digit(col, keep)) += rho(row, col);
        }
    return DensityOperator(std::move(out));
}

/// d/(d-1) (1 - Tr rho^2)
inline double linear_entropy(const DensityOperator& rho_red) {
    const double d = static_cast<double>(rho_red.dim());
    if (rho_red.dim() < 2) throw DimensionMismatch("linear_entropy: dimension must be >= 2");
    return std::clamp(d / (d - 1.0) * (1.0 - rho_red.purity()), 0.0, 1.0);
}

} // namespace tridecoh
