// observables.hpp: GHZ targets, GHZ generation probability, population inversion
//
// Direct traces against rho(t) are the reference values. The closed forms
// below are the m = n = 1 specializations of those traces; the *_uncorrected
// variants reproduce the uncorrected closed-form expressions, which disagree
// with the traces (see docs/physics_notes.md).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "tridecoh/bath.hpp"
#include "tridecoh/evolution.hpp"
#include "tridecoh/model.hpp"

namespace tridecoh {

enum class GhzSign { minus, plus };

struct GhzTarget {
    GhzSign sign = GhzSign::minus;
    CVector state;  // (|g,0,0> -/+ i|e,1,1>)/sqrt(2) in the model basis
    DensityOperator projector;

    static GhzTarget make(GhzSign sign) {
        const double s = 1.0 / std::sqrt(2.0);
        CVector psi(4);
        psi[index(ModelState::g_lower)] = s;
        psi[index(ModelState::e_upper)] = (sign == GhzSign::minus ? cplx{0.0, -s} : cplx{0.0, s});
        return GhzTarget{sign, psi, DensityOperator::pure(psi, kModelBasisTag)};
    }
};

inline double ghz_probability(const DensityOperator& rho, const GhzTarget& target) {
    if (rho.dim() != target.state.size())
        throw DimensionMismatch("ghz_probability: state dim " + std::to_string(rho.dim()) + " vs target dim " +
                                std::to_string(target.state.size()));
    const CVector rv = rho.matrix() * std::span<const cplx>(target.state);
    return std::clamp(std::real(inner(target.state, rv)), 0.0, 1.0);
}

/// Ion ground minus excited population; works in the 4-dim model basis
/// (even indices are |g,..>) or any Fock-ordered basis whose first half is g.
inline double population_inversion(const DensityOperator& rho) {
    if (rho.dim() == 4) {
        return (rho(0, 0) + rho(2, 2) - rho(1, 1) - rho(3, 3)).real();
    }
    if (rho.dim() == 8) {  // tripartite qubit basis, ion is the leading bit
        double acc = 0.0;
        for (std::size_t k = 0; k < 8; ++k) acc += (k < 4 ? 1.0 : -1.0) * rho(k, k).real();
        return acc;
    }
    throw DimensionMismatch("population_inversion: expected dim 4 or 8, got " + std::to_string(rho.dim()));
}

namespace detail {

inline void require_lowest_labels(const SystemParams& p, const char* who) {
    require_derived(p, who);
    if (p.m != 1 || p.n != 1) throw InvalidParams(std::string(who) + ": closed form requires m = n = 1");
}

} // namespace detail

/// P_GHZ(t) against the GHZ^- target for rho(0) = |g,0,0><g,0,0|.
inline double ghz_probability_closed_form(const SystemParams& p, const DephasingProfile& profile, double t,
                                          TimeLookup lookup = TimeLookup::exact) {
    detail::require_lowest_labels(p, "ghz_probability_closed_form");
    const auto s = profile.at(t, lookup);
    const double mu = p.mu_mn, a = p.a_mn, om = p.omega_rabi, g = s.gamma, phi = s.phi;
    const double k = om * om / (4.0 * mu * mu);
    const double wp = (mu + a) / (2.0 * mu);
    const double wm = (mu - a) / (2.0 * mu);
    return 0.5 + k * std::exp(-mu * mu * g) * std::cos(2.0 * mu * t) * std::cos(phi) +
           k * (std::exp(-a * a * g) * std::sin(2.0 * a * t) * std::cos(phi) - 1.0) -
           0.5 * wp * wp * std::exp(-(mu - a) * (mu - a) * g) * std::sin(2.0 * (mu - a) * t) +
           0.5 * wm * wm * std::exp(-(mu + a) * (mu + a) * g) * std::sin(2.0 * (mu + a) * t);
}

/// The uncorrected P_GHZ expression, kept verbatim for comparison.
inline double ghz_probability_uncorrected(const SystemParams& p, double gamma, double phi, double t) {
    detail::require_lowest_labels(p, "ghz_probability_uncorrected");
    const double mu = p.mu_mn, a = p.a_mn, om = p.omega_rabi;
    const double k = om * om / (4.0 * mu * mu);
    const double wp = (mu + a) / (2.0 * mu);
    const double wm = (mu - a) / (2.0 * mu);
    return 0.5 + k * (std::exp(-mu * mu * gamma / 4.0) * std::cos(2.0 * mu * t) * std::cos(phi)) +
           k * (std::exp(-a * a * gamma / 4.0) * std::sin(2.0 * a * t) * std::cos(phi) - 1.0) +
           0.5 * wm * wm * std::exp(-(mu - a) * (mu - a) * gamma / 4.0) * std::sin(2.0 * (mu - a) * t) -
           0.5 * wp * wp * std::exp(-(mu + a) * (mu + a) * gamma / 4.0) * std::sin(2.0 * (mu + a) * t);
}

inline double inversion_closed_form(const SystemParams& p, const DephasingProfile& profile, double t,
                                    TimeLookup lookup = TimeLookup::exact) {
    detail::require_lowest_labels(p, "inversion_closed_form");
    const auto s = profile.at(t, lookup);
    const double mu = p.mu_mn, a = p.a_mn, g = s.gamma;
    return (mu + a) / (2.0 * mu) * std::exp(-(mu - a) * (mu - a) * g) * std::cos(2.0 * (mu - a) * t) +
           (mu - a) / (2.0 * mu) * std::exp(-(mu + a) * (mu + a) * g) * std::cos(2.0 * (mu + a) * t);
}

/// Uncorrected inversion expression: both coefficients read (mu + a)/(2 mu).
inline double inversion_uncorrected(const SystemParams& p, double gamma, double t) {
    detail::require_lowest_labels(p, "inversion_uncorrected");
    const double mu = p.mu_mn, a = p.a_mn;
    return (mu + a) / (2.0 * mu) * std::exp(-(mu - a) * (mu - a) * gamma) * std::cos(2.0 * (mu - a) * t) +
           (mu + a) / (2.0 * mu) * std::exp(-(mu + a) * (mu + a) * gamma) * std::cos(2.0 * (mu + a) * t);
}

} // namespace tridecoh
