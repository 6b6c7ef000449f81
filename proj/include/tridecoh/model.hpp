// model.hpp: ion/laser/cavity interaction Hamiltonians and the analytic
// eigensystem of the four-state model space.
//
// Convention: hbar = 1, every energy is stored as an angular frequency.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "tridecoh/errors.hpp"
#include "tridecoh/linalg.hpp"

namespace tridecoh {

inline constexpr const char* kModelBasisTag = "model:|g,m-1,n-1>,|e,m-1,n-1>,|g,m,n>,|e,m,n>";

/// Fixed ordering of the four model-space kets.
enum class ModelState : std::size_t {
    g_lower = 0,  // |g, m-1, n-1>
    e_lower = 1,  // |e, m-1, n-1>
    g_upper = 2,  // |g, m, n>
    e_upper = 3,  // |e, m, n>
};

inline constexpr std::size_t index(ModelState s) noexcept { return static_cast<std::size_t>(s); }

struct SystemParams {
    double omega_rabi = 0.0;    // Omega
    double ion_cavity_g = 0.0;  // g
    double eta_c = 0.0;
    double eta_l = 0.0;  // carried for completeness; no operation consumes it
    int m = 1;           // phonon label
    int n = 1;           // photon label
    double trap_freq = 0.0;
    double ion_freq = 0.0;
    double laser_freq = 0.0;
    double cavity_freq = 0.0;

    // derived
    double a_mn = 0.0;
    double mu_mn = 0.0;
    double amp_a = 0.0;  // A
    double amp_b = 0.0;  // B
    double alpha = 0.0;  // mu_mn / a_mn
    bool derived = false;
};

/// Fills a_mn, mu_mn, A, B and alpha. Idempotent.
inline SystemParams derived_params(SystemParams p) {
    auto bad = [](const std::string& what) { throw InvalidParams("derived_params: " + what); };
    if (!(p.omega_rabi >= 0.0)) bad("omega_rabi must be >= 0");
    if (!(p.ion_cavity_g > 0.0)) bad("ion_cavity_g must be > 0");
    if (!(p.eta_c > 0.0)) bad("eta_c must be > 0");
    if (!(p.eta_l >= 0.0)) bad("eta_l must be >= 0");
    if (p.m < 1 || p.n < 1) bad("m and n must be >= 1");
    if (!(p.trap_freq >= 0.0) || !(p.ion_freq >= 0.0) || !(p.laser_freq >= 0.0) || !(p.cavity_freq >= 0.0))
        bad("frequencies must be non-negative");

    // resonance: laser on the ion transition, cavity on the red sideband
    const double fscale = std::max({1.0, p.ion_freq, p.laser_freq, p.trap_freq, p.cavity_freq});
    if (std::abs(p.laser_freq - p.ion_freq) > 1e-12 * fscale) bad("laser_freq must equal ion_freq");
    if (std::abs(p.cavity_freq - (p.ion_freq - p.trap_freq)) > 1e-12 * fscale)
        bad("cavity_freq must equal ion_freq - trap_freq");

    p.a_mn = 0.5 * p.ion_cavity_g * p.eta_c * std::sqrt(static_cast<double>(p.m) * p.n);
    p.mu_mn = std::hypot(p.a_mn, p.omega_rabi);
    p.amp_a = std::sqrt((p.mu_mn + p.omega_rabi) / (4.0 * p.mu_mn));
    p.amp_b = std::sqrt(std::max(0.0, p.mu_mn - p.omega_rabi) / (4.0 * p.mu_mn));
    p.alpha = p.mu_mn / p.a_mn;
    p.derived = true;
    return p;
}

/// Parameters in units where a_11 = 1 for a given ratio alpha = mu_11 / a_11 (m = n = 1).
inline SystemParams scaled_params(double alpha) {
    if (!(alpha >= 1.0)) throw InvalidParams("scaled_params: alpha must be >= 1");
    SystemParams p;
    p.omega_rabi = std::sqrt(alpha * alpha - 1.0);
    p.ion_cavity_g = 2.0;
    p.eta_c = 1.0;
    return derived_params(p);
}

inline void require_derived(const SystemParams& p, const char* who) {
    if (!p.derived) throw InvalidParams(std::string(who) + ": derived parameters not filled");
}

/// The 4x4 model-space interaction matrix.
inline ComplexMatrix build_h_is(const SystemParams& p) {
    require_derived(p, "build_h_is");
    ComplexMatrix h(4, kModelBasisTag);
    const double om = p.omega_rabi;
    const double cav = 2.0 * p.a_mn;  // g eta_c sqrt(mn)
    h(0, 1) = h(1, 0) = om;
    h(1, 2) = h(2, 1) = cav;
    h(2, 3) = h(3, 2) = om;
    return h;
}

struct AnalyticEigenSystem {
    std::array<double, 4> energies{};  // E_1..E_4
    // |computational_i> = sum_p transform[i][p] |Phi_p>; column p holds Phi_p.
    std::array<std::array<double, 4>, 4> transform{};

    /// Phi_p in the model basis.
    CVector eigenvector(std::size_t p) const {
        CVector v(4);
        for (std::size_t i = 0; i < 4; ++i) v[i] = transform[i][p];
        return v;
    }

    ComplexMatrix transform_matrix() const {
        ComplexMatrix t(4, kModelBasisTag);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) t(i, j) = transform[i][j];
        return t;
    }
};

inline AnalyticEigenSystem analytic_eigensystem(const SystemParams& p) {
    require_derived(p, "analytic_eigensystem");
    const double mu = p.mu_mn;
    const double a = p.a_mn;
    const double s = 1.0 / std::sqrt(2.0);
    const double pl = (p.amp_a + p.amp_b) * s;
    const double mi = (p.amp_a - p.amp_b) * s;

    AnalyticEigenSystem out;
    out.energies = {mu - a, -(mu + a), mu + a, a - mu};
    out.transform = {{
        {pl, mi, mi, -pl},
        {mi, -pl, pl, mi},
        {-mi, pl, pl, mi},
        {-pl, -mi, mi, -pl},
    }};
    return out;
}

/// Truncated Fock space |ion, phonon, photon> with lexicographic flat index.
struct FockSpace {
    int phonon_cut = 6;
    int photon_cut = 6;

    std::size_t dim() const noexcept { return 2u * phonon_cut * photon_cut; }

    std::size_t flat(int ion, int phonon, int photon) const noexcept {
        return (static_cast<std::size_t>(ion) * phonon_cut + phonon) * photon_cut + photon;
    }

    struct Label {
        int ion, phonon, photon;
    };
    Label label(std::size_t k) const noexcept {
        const int photon = static_cast<int>(k % photon_cut);
        const int phonon = static_cast<int>((k / photon_cut) % phonon_cut);
        const int ion = static_cast<int>(k / (static_cast<std::size_t>(photon_cut) * phonon_cut));
        return {ion, phonon, photon};
    }
};

inline ComplexMatrix build_h_full(const SystemParams& p, int phonon_cut, int photon_cut) {
    require_derived(p, "build_h_full");
    if (phonon_cut < 2 || photon_cut < 2)
        throw CutoffTooSmall("build_h_full: cutoffs must be >= 2, got (" + std::to_string(phonon_cut) + ", " +
                             std::to_string(photon_cut) + ")");
    const FockSpace space{phonon_cut, photon_cut};
    ComplexMatrix h(space.dim(), "fock:ion,phonon,photon");
    const double g_eta = p.ion_cavity_g * p.eta_c;
    for (int k = 0; k < phonon_cut; ++k)
        for (int l = 0; l < photon_cut; ++l) {
            const auto g = space.flat(0, k, l);
            const auto e = space.flat(1, k, l);
            h(g, e) = h(e, g) = p.omega_rabi;
            if (k >= 1 && l >= 1) {
                const auto lowered = space.flat(1, k - 1, l - 1);
                h(g, lowered) = h(lowered, g) = g_eta * std::sqrt(static_cast<double>(k) * l);
            }
        }
    return h;
}

/// Flat Fock indices of the four model-space kets.
inline std::array<std::size_t, 4> model_space_indices(const SystemParams& p, const FockSpace& space) {
    return {space.flat(0, p.m - 1, p.n - 1), space.flat(1, p.m - 1, p.n - 1), space.flat(0, p.m, p.n),
            space.flat(1, p.m, p.n)};
}

} // namespace tridecoh
