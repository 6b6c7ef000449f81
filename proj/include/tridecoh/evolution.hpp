// evolution.hpp: decohered model-space state rho(t)
//
// Three routes to the same object:
//   evolve_dephasing  general eigenbasis dephasing map, any initial state
//   rho_closed_form   explicit expansion for the initial state |g,m-1,n-1>
//   unitary_evolve    U rho U^dagger, the kappa = 0 reference

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "tridecoh/bath.hpp"
#include "tridecoh/errors.hpp"
#include "tridecoh/linalg.hpp"
#include "tridecoh/model.hpp"

namespace tridecoh {

struct StateTolerances {
    double hermiticity = 1e-12;
    double trace = 1e-10;
    double negative_eigenvalue = 1e-10;
};

class DensityOperator {
public:
    DensityOperator() = default;

    /// Validates trace, Hermiticity and positivity. Eigenvalues in
    /// [-tol, 0) are clamped to zero and the result renormalized.
    explicit DensityOperator(ComplexMatrix m, StateTolerances tol = {}) : matrix_(std::move(m)) {
        if (matrix_.dim() == 0) throw InvalidState("DensityOperator: empty matrix");
        const double herm = hermiticity_defect(matrix_);
        if (herm > tol.hermiticity)
            throw InvalidState("DensityOperator: Hermiticity defect " + std::to_string(herm));
        const cplx tr = trace(matrix_);
        if (std::abs(tr - 1.0) > tol.trace)
            throw InvalidState("DensityOperator: trace " + std::to_string(tr.real()) + " != 1");

        // exact Hermitian part before the spectral check
        for (std::size_t i = 0; i < matrix_.dim(); ++i) {
            matrix_(i, i) = matrix_(i, i).real();
            for (std::size_t j = i + 1; j < matrix_.dim(); ++j) {
                const cplx h = 0.5 * (matrix_(i, j) + std::conj(matrix_(j, i)));
                matrix_(i, j) = h;
                matrix_(j, i) = std::conj(h);
            }
        }
        const auto eig = hermitian_eigensystem(matrix_);
        if (eig.values.front() < -tol.negative_eigenvalue)
            throw InvalidState("DensityOperator: negative eigenvalue " + std::to_string(eig.values.front()));
        if (eig.values.front() < 0.0) {
            double kept = 0.0;
            for (double v : eig.values) kept += std::max(0.0, v);
            const std::string tag = matrix_.basis_tag();
            matrix_ = eig.apply([kept](double v) { return cplx{std::max(0.0, v) / kept, 0.0}; });
            matrix_.set_basis_tag(tag);
        }
    }

    static DensityOperator pure(std::span<const cplx> psi, std::string basis_tag = {}) {
        const double nrm = std::sqrt(std::real(inner(psi, psi)));
        if (!(nrm > 0.0)) throw InvalidState("DensityOperator::pure: zero vector");
        CVector v(psi.begin(), psi.end());
        for (auto& x : v) x /= nrm;
        return DensityOperator(ComplexMatrix::outer(v, std::move(basis_tag)));
    }

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return matrix_.dim(); }
    const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return matrix_(i, j); }
    const std::string& basis_tag() const noexcept { return matrix_.basis_tag(); }

    double purity() const {
        double acc = 0.0;
        for (const auto& e : matrix_.entries()) acc += std::norm(e);
        return acc;
    }

private:
    ComplexMatrix matrix_;
};

struct InitialState {
    ModelState label = ModelState::g_lower;

    DensityOperator density() const {
        CVector psi(4);
        psi[index(label)] = 1.0;
        return DensityOperator::pure(psi, kModelBasisTag);
    }
};

namespace detail {

inline void require_model_dim(const DensityOperator& rho, const char* who) {
    if (rho.dim() != 4)
        throw DimensionMismatch(std::string(who) + ": expected a 4x4 model-space state, got dim " +
                                std::to_string(rho.dim()));
}

/// rho(t) = sum_ij <Phi_i|rho0|Phi_j> exp(-(Ei-Ej)^2 Gamma/4) exp(-i[(Ei-Ej)t + (Ei^2-Ej^2)C]) |Phi_i><Phi_j|
inline ComplexMatrix dephase(const ComplexMatrix& rho0, const AnalyticEigenSystem& eig, double t, double gamma,
                             double c) {
    const auto& T = eig.transform;
    const auto& E = eig.energies;
    // to the eigenbasis: r_ij = sum_kl T_ki rho0_kl T_lj
    ComplexMatrix r(4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            cplx acc{};
            for (std::size_t k = 0; k < 4; ++k)
                for (std::size_t l = 0; l < 4; ++l) acc += T[k][i] * rho0(k, l) * T[l][j];
            const double de = E[i] - E[j];
            const double de2 = E[i] * E[i] - E[j] * E[j];
            r(i, j) = acc * std::exp(-de * de * gamma / 4.0) * std::polar(1.0, -(de * t + de2 * c));
        }
    ComplexMatrix out(4, kModelBasisTag);
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t l = 0; l < 4; ++l) {
            cplx acc{};
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j) acc += T[k][i] * r(i, j) * T[l][j];
            out(k, l) = acc;
        }
    return out;
}

} // namespace detail

inline DensityOperator evolve_dephasing(const DensityOperator& rho0, const AnalyticEigenSystem& eig,
                                        const DephasingProfile& profile, double t,
                                        TimeLookup lookup = TimeLookup::exact) {
    detail::require_model_dim(rho0, "evolve_dephasing");
    const auto s = profile.at(t, lookup);
    return DensityOperator(detail::dephase(rho0.matrix(), eig, t, s.gamma, s.c));
}

/// Closed-form rho(t) for rho(0) = |g,m-1,n-1><g,m-1,n-1|, assembled term by term in the Phi basis.
inline DensityOperator rho_closed_form(const SystemParams& params, const DephasingProfile& profile, double t,
                                       TimeLookup lookup = TimeLookup::exact) {
    require_derived(params, "rho_closed_form");
    const auto s = profile.at(t, lookup);
    const double mu = params.mu_mn;
    const double a = params.a_mn;
    const double A = params.amp_a;
    const double B = params.amp_b;
    const double g = s.gamma;
    const double phi = s.phi;
    const double plus2 = (A + B) * (A + B) / 2.0;
    const double minus2 = (A - B) * (A - B) / 2.0;
    const double cross = (A * A - B * B) / 2.0;
    auto e = [](double arg) { return std::polar(1.0, arg); };

    // Phi-basis matrix, indices 0..3 <-> Phi_1..Phi_4
    ComplexMatrix r(4);
    r(0, 0) = r(3, 3) = plus2;
    r(1, 1) = r(2, 2) = minus2;

    const double d14 = std::exp(-(mu - a) * (mu - a) * g);
    r(0, 3) = -plus2 * d14 * e(-2.0 * (mu - a) * t);
    r(3, 0) = -plus2 * d14 * e(2.0 * (mu - a) * t);

    const double d23 = std::exp(-(mu + a) * (mu + a) * g);
    r(1, 2) = minus2 * d23 * e(2.0 * (mu + a) * t);
    r(2, 1) = minus2 * d23 * e(-2.0 * (mu + a) * t);

    const double dmu = std::exp(-mu * mu * g);
    r(0, 1) = cross * dmu * e(-(2.0 * mu * t - phi));
    r(1, 0) = cross * dmu * e(2.0 * mu * t - phi);
    r(2, 3) = -cross * dmu * e(-(2.0 * mu * t + phi));
    r(3, 2) = -cross * dmu * e(2.0 * mu * t + phi);

    const double da = std::exp(-a * a * g);
    r(0, 2) = cross * da * e(2.0 * a * t + phi);
    r(2, 0) = cross * da * e(-(2.0 * a * t + phi));
    r(1, 3) = -cross * da * e(2.0 * a * t - phi);
    r(3, 1) = -cross * da * e(-(2.0 * a * t - phi));

    const auto T = analytic_eigensystem(params).transform;
    ComplexMatrix out(4, kModelBasisTag);
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t l = 0; l < 4; ++l) {
            cplx acc{};
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j) acc += T[k][i] * r(i, j) * T[l][j];
            out(k, l) = acc;
        }
    return DensityOperator(std::move(out));
}

inline DensityOperator unitary_evolve(const DensityOperator& rho0, const ComplexMatrix& h, double t) {
    if (rho0.dim() != h.dim()) throw DimensionMismatch("unitary_evolve: state and Hamiltonian dims differ");
    const ComplexMatrix u = hermitian_expm(h, -t);
    ComplexMatrix out = u * rho0.matrix() * adjoint(u);
    out.set_basis_tag(rho0.basis_tag());
    return DensityOperator(std::move(out));
}

} // namespace tridecoh
