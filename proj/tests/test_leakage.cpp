#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "tridecoh/evolution.hpp"
#include "tridecoh/leakage.hpp"

using namespace tridecoh;

namespace {

std::vector<double> leakage_times() {
    std::vector<double> t;
    for (int k = 1; k <= 10; ++k) t.push_back(0.01 * k);
    return t;
}

} // namespace

TEST(Leakage, InitialStateAndZeroTime) {
    const auto p = scaled_params(4.0);
    const FockSpace space{6, 6};
    const auto rho = full_space_evolve(p, space, 0.0);
    EXPECT_NEAR(rho(space.flat(0, 0, 0), space.flat(0, 0, 0)).real(), 1.0, 1e-12);
    EXPECT_NEAR(leakage_probability(p, space, 0.0), 0.0, 1e-20);
}

TEST(Leakage, NormConserved) {
    const FullSpacePropagator prop(scaled_params(4.0), FockSpace{6, 6});
    for (double t : {0.1, 0.5, 1.0, 3.0}) {
        double norm = 0.0;
        for (auto z : prop.state(t)) norm += std::norm(z);
        EXPECT_NEAR(norm, 1.0, 1e-10) << t;
    }
}

TEST(Leakage, StateMatchesTaylorPropagation) {
    const auto p = scaled_params(4.0);
    const FockSpace space{5, 5};
    const auto h = build_h_full(p, 5, 5);
    std::vector<cplx> psi0(space.dim());
    psi0[space.flat(0, 0, 0)] = 1.0;
    const FullSpacePropagator prop(p, space);
    for (double t : {0.2, std::numbers::pi / 4.0}) {
        const auto ref = oracle::taylor_propagate(h, psi0, t);
        const auto got = prop.state(t);
        for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(std::abs(got[k] - ref[k]), 0.0, 1e-10);
    }
}

TEST(Leakage, ShortTimeProjectionMatchesModelDynamics) {
    const auto p = scaled_params(4.0);
    const FockSpace space{6, 6};
    const FullSpacePropagator prop(p, space);
    const auto idx = model_space_indices(p, space);
    const auto h = build_h_is(p);
    for (double t : {0.01, 0.03, 0.05}) {
        const auto full = prop.state(t);
        const auto model = oracle::taylor_propagate(h, {1.0, 0.0, 0.0, 0.0}, t);
        cplx overlap{};
        for (std::size_t k = 0; k < 4; ++k) overlap += std::conj(model[k]) * full[idx[k]];
        EXPECT_LE(1.0 - std::norm(overlap), 1e-8) << t;
    }
}

TEST(Leakage, CutoffConvergence) {
    // The (4,4) truncation reflects from its top level, so its error grows
    // with t: below 1e-10 only up to a_11 t ~ 0.05, about 1e-9 at 0.1 and
    // percent level at pi/4. (6,6) against (12,12) is converged throughout.
    const auto p = scaled_params(4.0);
    const FullSpacePropagator p4(p, {4, 4}), p8(p, {8, 8});
    const FockSpace s4{4, 4}, s8{8, 8};
    auto state_gap = [&](double t) {
        const auto a = p4.state(t), b = p8.state(t);
        double worst = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            const auto l = s4.label(k);
            worst = std::max(worst, std::abs(a[k] - b[s8.flat(l.ion, l.phonon, l.photon)]));
        }
        return worst;
    };
    EXPECT_LE(state_gap(0.02), 1e-10);
    EXPECT_LE(state_gap(0.05), 1e-10);
    EXPECT_LE(state_gap(0.1), 1e-8);
    EXPECT_GE(state_gap(std::numbers::pi / 4.0), 1e-3);  // (4,4) is not converged at pi/4

    const FullSpacePropagator p6(p, {6, 6}), p12(p, {12, 12});
    for (double t : {0.05, 0.2, 0.5, std::numbers::pi / 4.0}) {
        const double l6 = p6.leakage(t), l12 = p12.leakage(t);
        EXPECT_LE(std::abs(l6 - l12), 0.01 * l12) << t;
    }
}

TEST(Leakage, MonotoneGrowthAtShortTimes) {
    const FullSpacePropagator prop(scaled_params(4.0), FockSpace{6, 6});
    double prev = 0.0;
    for (int k = 1; k <= 40; ++k) {
        const double l = prop.leakage(0.005 * k);
        EXPECT_GT(l, prev) << k;
        prev = l;
    }
}

TEST(Leakage, EighthPowerLaw) {
    const FullSpacePropagator prop(scaled_params(4.0), FockSpace{6, 6});
    const auto t = leakage_times();
    std::vector<double> p;
    for (double x : t) p.push_back(prop.leakage(x));
    const auto fit = fit_power_law(t, p);
    EXPECT_GE(fit.exponent, 7.8);
    EXPECT_LE(fit.exponent, 8.2);
    EXPECT_GT(fit.r2, 0.9999);
}

TEST(Leakage, SmallCutoffRejected) {
    EXPECT_THROW(FullSpacePropagator(scaled_params(4.0), FockSpace{3, 6}), CutoffTooSmall);
    EXPECT_THROW(leakage_probability(scaled_params(4.0), FockSpace{6, 2}, 0.1), CutoffTooSmall);
}

TEST(PowerLaw, ExactSeries) {
    std::vector<double> t, p3, p8;
    for (int k = 1; k <= 8; ++k) {
        t.push_back(0.1 * k);
        p3.push_back(2.5 * std::pow(0.1 * k, 3));
        p8.push_back(0.7 * std::pow(0.1 * k, 8));
    }
    const auto f3 = fit_power_law(t, p3);
    EXPECT_NEAR(f3.exponent, 3.0, 1e-9);
    EXPECT_NEAR(f3.r2, 1.0, 1e-12);
    EXPECT_NEAR(fit_power_law(t, p8).exponent, 8.0, 1e-9);
}

TEST(PowerLaw, DegenerateInputs) {
    const std::vector<double> same(6, 0.5), ok{0.1, 0.2, 0.3, 0.4, 0.5, 0.6}, pos(6, 1.0);
    EXPECT_THROW(fit_power_law(same, pos), DegenerateFit);
    std::vector<double> bad = pos;
    bad[2] = 0.0;
    EXPECT_THROW(fit_power_law(ok, bad), DegenerateFit);
    EXPECT_THROW(fit_power_law(std::vector<double>{0.1, 0.2}, std::vector<double>{1.0, 2.0}), DegenerateFit);
}
