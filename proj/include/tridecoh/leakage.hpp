// leakage.hpp: population escaping the four-state model space under the
// full (untruncated-in-principle) interaction Hamiltonian.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tridecoh/evolution.hpp"
#include "tridecoh/linalg.hpp"
#include "tridecoh/model.hpp"

namespace tridecoh {

inline void require_leakage_space(const FockSpace& space) {
    if (space.phonon_cut < 4 || space.photon_cut < 4)
        throw CutoffTooSmall("leakage: cutoffs must be >= 4, got (" + std::to_string(space.phonon_cut) + ", " +
                             std::to_string(space.photon_cut) + ")");
}

/// Evolves |g,0,0> with the full Hamiltonian; reuses one eigendecomposition
/// for every requested time.
class FullSpacePropagator {
public:
    FullSpacePropagator(const SystemParams& params, const FockSpace& space)
        : params_(params), space_(space) {
        require_leakage_space(space);
        eig_ = hermitian_eigensystem(build_h_full(params, space.phonon_cut, space.photon_cut));
        const std::size_t start = space.flat(0, 0, 0);
        overlap_.resize(space.dim());
        for (std::size_t k = 0; k < space.dim(); ++k) overlap_[k] = std::conj(eig_.vectors(start, k));
    }

    CVector state(double t) const {
        const std::size_t n = space_.dim();
        CVector coeff(n);
        for (std::size_t k = 0; k < n; ++k) coeff[k] = std::polar(1.0, -eig_.values[k] * t) * overlap_[k];
        CVector psi(n);
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc{};
            for (std::size_t k = 0; k < n; ++k) acc += eig_.vectors(i, k) * coeff[k];
            psi[i] = acc;
        }
        return psi;
    }

    /// Summed directly over the out-of-model states so that tiny leakage
    /// is not lost to cancellation in 1 - sum(model populations).
    double leakage(double t) const {
        const auto psi = state(t);
        const auto model = model_space_indices(lowest(), space_);
        double acc = 0.0;
        for (std::size_t k = 0; k < psi.size(); ++k) {
            bool inside = false;
            for (auto m : model) inside = inside || (m == k);
            if (!inside) acc += std::norm(psi[k]);
        }
        return std::clamp(acc, 0.0, 1.0);
    }

    const FockSpace& space() const noexcept { return space_; }

private:
    SystemParams lowest() const {
        SystemParams p = params_;
        p.m = 1;
        p.n = 1;
        return p;
    }

    SystemParams params_;
    FockSpace space_;
    HermitianEigenSystem eig_;
    CVector overlap_;
};

inline DensityOperator full_space_evolve(const SystemParams& params, const FockSpace& space, double t) {
    const FullSpacePropagator prop(params, space);
    const auto psi = prop.state(t);
    return DensityOperator(ComplexMatrix::outer(psi, "fock:ion,phonon,photon"));
}

inline double leakage_probability(const SystemParams& params, const FockSpace& space, double t) {
    return FullSpacePropagator(params, space).leakage(t);
}

struct PowerLawFit {
    double exponent = 0.0;
    double r2 = 0.0;
};

/// Least-squares line through (ln t, ln p).
inline PowerLawFit fit_power_law(std::span<const double> t, std::span<const double> p) {
    if (t.size() != p.size()) throw DegenerateFit("fit_power_law: t and p differ in length");
    if (t.size() < 5) throw DegenerateFit("fit_power_law: need at least 5 samples");
    std::vector<double> x(t.size()), y(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (!(t[k] > 0.0) || !(p[k] > 0.0)) throw DegenerateFit("fit_power_law: samples must be positive");
        x[k] = std::log(t[k]);
        y[k] = std::log(p[k]);
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (sxx == 0.0) throw DegenerateFit("fit_power_law: all t equal");
    const double slope = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double r = y[k] - (my + slope * (x[k] - mx));
        ss_res += r * r;
    }
    const double r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    return {slope, r2};
}

} // namespace tridecoh
