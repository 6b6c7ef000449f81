#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "tridecoh/bath.hpp"
#include "tridecoh/evolution.hpp"
#include "tridecoh/units.hpp"

using namespace tridecoh;

namespace {

constexpr double kCutoff = 519.2826833;
constexpr double kBeta = 5.883679794e-4;

DephasingProfile profile(double kappa, const std::vector<double>& grid) {
    BathSpec s;
    s.kappa = kappa;
    s.cutoff = kCutoff;
    s.beta = kBeta;
    return build_profile(s, scaled_params(4.0), grid);
}

std::vector<double> degree_grid(int points, double max_deg) {
    std::vector<double> g;
    for (int k = 0; k < points; ++k) g.push_back(units::deg_to_rad(max_deg * k / (points - 1)));
    return g;
}

double fidelity(const DensityOperator& rho, const CVector& psi) {
    const auto rv = rho.matrix() * std::span<const cplx>(psi);
    return std::real(inner(psi, rv));
}

/// Phi-basis matrix <Phi_i|rho|Phi_j>.
ComplexMatrix in_eigenbasis(const DensityOperator& rho, const AnalyticEigenSystem& eig) {
    const auto t = eig.transform_matrix();
    return adjoint(t) * rho.matrix() * t;
}

} // namespace

TEST(DensityOperator, ValidatesInput) {
    ComplexMatrix m(2);
    m(0, 0) = 0.7;
    m(1, 1) = 0.2;
    EXPECT_THROW(DensityOperator{m}, InvalidState);
    m(1, 1) = 0.3;
    m(0, 1) = cplx{0.1, 0.0};
    EXPECT_THROW(DensityOperator{m}, InvalidState);
    m(1, 0) = cplx{0.1, 0.0};
    EXPECT_NO_THROW(DensityOperator{m});
    ComplexMatrix neg(2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    EXPECT_THROW(DensityOperator{neg}, InvalidState);
}

TEST(DensityOperator, ClampsTinyNegativeEigenvalues) {
    ComplexMatrix m(2);
    m(0, 0) = 1.0 + 5e-11;
    m(1, 1) = -5e-11;
    const DensityOperator rho(m);
    EXPECT_NEAR(rho(0, 0).real(), 1.0, 1e-15);
    EXPECT_GE(rho(1, 1).real(), 0.0);
}

TEST(Evolution, TimeZeroReturnsInitialState) {
    const auto grid = degree_grid(5, 20.0);
    const auto eig = analytic_eigensystem(scaled_params(4.0));
    const auto rho0 = InitialState{}.density();
    for (double kappa : {0.0, 0.1}) {
        const auto prof = profile(kappa, grid);
        EXPECT_LE(max_abs_diff(evolve_dephasing(rho0, eig, prof, 0.0).matrix(), rho0.matrix()), 1e-15);
        EXPECT_LE(max_abs_diff(rho_closed_form(scaled_params(4.0), prof, 0.0).matrix(), rho0.matrix()), 1e-15);
    }
}

TEST(Evolution, ZeroCouplingIsUnitary) {
    const auto p = scaled_params(4.0);
    const auto grid = degree_grid(73, 360.0);
    const auto prof = profile(0.0, grid);
    const auto eig = analytic_eigensystem(p);
    const auto h = build_h_is(p);
    const auto rho0 = InitialState{}.density();
    for (double t : grid) {
        const auto psi = oracle::taylor_propagate(h, {1.0, 0.0, 0.0, 0.0}, t);
        const auto rho_ref = ComplexMatrix::outer(psi);
        EXPECT_LE(max_abs_diff(evolve_dephasing(rho0, eig, prof, t).matrix(), rho_ref), 1e-10) << t;
        EXPECT_LE(max_abs_diff(unitary_evolve(rho0, h, t).matrix(), rho_ref), 1e-10) << t;
    }
}

TEST(Evolution, ClosedFormMatchesDephasingMap) {
    const auto p = scaled_params(4.0);
    const auto grid = degree_grid(181, 180.0);
    const auto eig = analytic_eigensystem(p);
    const auto rho0 = InitialState{}.density();
    for (double kappa : {0.0, 0.001, 0.1}) {
        const auto prof = profile(kappa, grid);
        for (double t : grid)
            EXPECT_LE(max_abs_diff(rho_closed_form(p, prof, t).matrix(), evolve_dephasing(rho0, eig, prof, t).matrix()),
                      1e-12);
    }
}

TEST(Evolution, ClosedFormAtOtherAlpha) {
    // the expansion is written for general mu, a; check away from alpha = 4
    for (double alpha : {1.3, 2.5, 7.0}) {
        const auto p = scaled_params(alpha);
        BathSpec s;
        s.kappa = 1e-5;
        s.cutoff = 3.0;
        s.beta = 0.7;
        const auto grid = degree_grid(37, 180.0);
        const auto prof = build_profile(s, p, grid);
        const auto eig = analytic_eigensystem(p);
        for (double t : grid)
            EXPECT_LE(max_abs_diff(rho_closed_form(p, prof, t).matrix(),
                                   evolve_dephasing(InitialState{}.density(), eig, prof, t).matrix()),
                      1e-12)
                << alpha;
    }
}

TEST(Evolution, GhzStateAtQuarterPeriod) {
    const auto p = scaled_params(4.0);
    const double t = std::numbers::pi / 4.0;
    const auto prof = profile(0.0, {0.0, t});
    const double s = 1.0 / std::sqrt(2.0);
    const CVector ghz_minus{s, 0.0, 0.0, cplx{0.0, -s}};
    EXPECT_NEAR(fidelity(rho_closed_form(p, prof, t), ghz_minus), 1.0, 1e-9);
}

TEST(Evolution, UnitaryStatesAtMultiplesOfPi) {
    // mu t = p pi: cos(a t)|g,0,0> - i sin(a t)|e,1,1> up to a global phase
    const auto p = scaled_params(4.0);
    const auto h = build_h_is(p);
    const auto rho0 = InitialState{}.density();
    for (int q = 1; q <= 4; ++q) {
        const double t = q * std::numbers::pi / 4.0;
        const CVector expected{std::cos(t), 0.0, 0.0, cplx{0.0, -std::sin(t)}};
        EXPECT_NEAR(fidelity(unitary_evolve(rho0, h, t), expected), 1.0, 1e-9) << q;
    }
    const double s = 1.0 / std::sqrt(2.0);
    const CVector ghz_plus{s, 0.0, 0.0, cplx{0.0, s}};
    EXPECT_NEAR(fidelity(unitary_evolve(rho0, h, 3.0 * std::numbers::pi / 4.0), ghz_plus), 1.0, 1e-9);
}

TEST(Evolution, LongTimeDephasedLimit) {
    const auto p = scaled_params(4.0);
    const auto eig = analytic_eigensystem(p);
    const auto grid = degree_grid(5, 180.0);
    const auto prof = profile(0.1, grid);
    const auto rho = evolve_dephasing(InitialState{}.density(), eig, prof, grid.back());
    const auto r = in_eigenbasis(rho, eig);
    const double plus2 = (p.amp_a + p.amp_b) * (p.amp_a + p.amp_b) / 2.0;
    const double minus2 = (p.amp_a - p.amp_b) * (p.amp_a - p.amp_b) / 2.0;
    const double diag[] = {plus2, minus2, minus2, plus2};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(r(i, i).real(), diag[i], 1e-12);
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j) {
                EXPECT_LE(std::abs(r(i, j)), 1e-6);
            }
    }
}

TEST(Evolution, ArbitraryInitialStateStaysValid) {
    std::mt19937_64 rng(23);
    const auto p = scaled_params(4.0);
    const auto eig = analytic_eigensystem(p);
    const auto grid = degree_grid(25, 180.0);
    const auto prof = profile(0.001, grid);
    for (int draw = 0; draw < 5; ++draw) {
        const DensityOperator rho0(oracle::random_density(4, rng, 2));
        for (double t : grid) {
            const auto rho = evolve_dephasing(rho0, eig, prof, t);
            EXPECT_NEAR(trace(rho.matrix()).real(), 1.0, 1e-12);
            EXPECT_LE(rho.purity(), rho0.purity() + 1e-12);
        }
    }
}

TEST(Evolution, RejectsWrongDimensionAndOffGridTime) {
    const auto eig = analytic_eigensystem(scaled_params(4.0));
    const auto grid = degree_grid(5, 20.0);
    const auto prof = profile(0.01, grid);
    ComplexMatrix m(2);
    m(0, 0) = 1.0;
    EXPECT_THROW(evolve_dephasing(DensityOperator(m), eig, prof, 0.0), DimensionMismatch);
    EXPECT_THROW(evolve_dephasing(InitialState{}.density(), eig, prof, 0.123), GridMiss);
    EXPECT_NO_THROW(evolve_dephasing(InitialState{}.density(), eig, prof, 0.123, TimeLookup::interpolate));
}
