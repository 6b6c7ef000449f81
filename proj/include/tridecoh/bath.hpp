// bath.hpp: ohmic-bath dephasing integrals Gamma(t), C(t) and sampled profiles
//
//   Gamma(t) = 8 kappa  int_0^{3 wc} dw e^{-w/wc}/w coth(beta w/2) sin^2(w t/2)
//   C(t)     =   kappa  int_0^{3 wc} dw e^{-w/wc}/w (sin(w t) - w t)
//
// Units are whatever the caller uses consistently (the scenario layer works
// with a_11 = 1). Both integrals are invariant under w -> w/s, t -> s t,
// beta -> s beta, wc -> wc/s.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "tridecoh/errors.hpp"
#include "tridecoh/model.hpp"
#include "tridecoh/quadrature.hpp"

namespace tridecoh {

struct BathSpec {
    double kappa = 0.0;
    double cutoff = 1.0;  // bath cutoff w_c, not the cavity mode
    double beta = 1.0;    // hbar / (k_B T) in the caller's time unit
    double quad_rel_tol = 1e-8;
    int quad_max_depth = 40;
};

inline void validate(const BathSpec& spec) {
    if (!(spec.kappa >= 0.0)) throw InvalidParams("BathSpec: kappa must be >= 0");
    if (!(spec.cutoff > 0.0)) throw InvalidParams("BathSpec: cutoff must be > 0");
    if (!(spec.beta > 0.0)) throw InvalidParams("BathSpec: beta must be > 0");
    if (!(spec.quad_rel_tol > 0.0)) throw InvalidParams("BathSpec: quad_rel_tol must be > 0");
}

/// Upper limit of the frequency integrals.
inline double integration_limit(const BathSpec& spec) { return 3.0 * spec.cutoff; }

namespace detail {

inline quad::SimpsonOptions simpson_options(const BathSpec& spec, double t) {
    quad::SimpsonOptions o;
    o.rel_tol = spec.quad_rel_tol;
    o.max_depth = spec.quad_max_depth;
    o.max_panel_width = std::numbers::pi / (4.0 * t);
    return o;
}

/// e^{-w/wc}/w coth(beta w/2) sin^2(w t/2); limit t^2/(2 beta) at w = 0.
inline double gamma_integrand(double w, double t, double cutoff, double beta) {
    if (w == 0.0) return t * t / (2.0 * beta);
    const double s = std::sin(0.5 * w * t);
    return std::exp(-w / cutoff) * s * s / (w * std::tanh(0.5 * beta * w));
}

/// e^{-w/wc}/w (sin(w t) - w t); limit 0 at w = 0.
inline double c_integrand(double w, double t, double cutoff) {
    if (w == 0.0) return 0.0;
    const double x = w * t;
    double bracket;
    if (x < 1e-3) {
        const double x2 = x * x;
        bracket = -x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    } else {
        bracket = std::sin(x) - x;
    }
    return std::exp(-w / cutoff) * bracket / w;
}

} // namespace detail

inline double gamma_of_t(const BathSpec& spec, double t) {
    validate(spec);
    if (!(t >= 0.0)) throw InvalidParams("gamma_of_t: t must be >= 0");
    if (spec.kappa == 0.0 || t == 0.0) return 0.0;
    const double wc = spec.cutoff;
    const double beta = spec.beta;
    const double integral = quad::adaptive_simpson(
        [&](double w) { return detail::gamma_integrand(w, t, wc, beta); }, 0.0, integration_limit(spec),
        detail::simpson_options(spec, t));
    return std::max(0.0, 8.0 * spec.kappa * integral);
}

inline double c_of_t(const BathSpec& spec, double t) {
    validate(spec);
    if (!(t >= 0.0)) throw InvalidParams("c_of_t: t must be >= 0");
    if (spec.kappa == 0.0 || t == 0.0) return 0.0;
    const double wc = spec.cutoff;
    const double integral = quad::adaptive_simpson([&](double w) { return detail::c_integrand(w, t, wc); }, 0.0,
                                                   integration_limit(spec), detail::simpson_options(spec, t));
    return std::min(0.0, spec.kappa * integral);
}

enum class TimeLookup {
    exact,        // t must be a grid sample
    interpolate,  // monotone cubic between samples (approximate)
};

struct DephasingSample {
    double gamma = 0.0;
    double c = 0.0;
    double phi = 0.0;
};

class DephasingProfile {
public:
    DephasingProfile() = default;

    DephasingProfile(std::vector<double> grid, std::vector<double> gamma, std::vector<double> c, double kappa,
                     double phase_scale)
        : grid_(std::move(grid)), gamma_(std::move(gamma)), c_(std::move(c)), kappa_(kappa),
          phase_scale_(phase_scale) {
        if (gamma_.size() != grid_.size() || c_.size() != grid_.size())
            throw DimensionMismatch("DephasingProfile: sample arrays differ in length");
        phi_.resize(c_.size());
        for (std::size_t k = 0; k < c_.size(); ++k) phi_[k] = phase_scale_ * c_[k];
    }

    const std::vector<double>& grid() const noexcept { return grid_; }
    const std::vector<double>& gamma() const noexcept { return gamma_; }
    const std::vector<double>& c() const noexcept { return c_; }
    const std::vector<double>& phi() const noexcept { return phi_; }
    double kappa() const noexcept { return kappa_; }
    /// 4 mu_mn a_mn
    double phase_scale() const noexcept { return phase_scale_; }
    std::size_t size() const noexcept { return grid_.size(); }

    DephasingSample sample(std::size_t k) const { return {gamma_.at(k), c_.at(k), phi_.at(k)}; }

    /// Both integrals are linear in kappa, so a profile computed once can be
    /// rescaled to any other coupling.
    DephasingProfile with_kappa(double kappa) const {
        if (!(kappa >= 0.0)) throw InvalidParams("with_kappa: kappa must be >= 0");
        if (kappa_ == 0.0 && kappa != 0.0)
            throw InvalidParams("with_kappa: cannot rescale a kappa = 0 profile");
        const double r = kappa_ == 0.0 ? 0.0 : kappa / kappa_;
        std::vector<double> g(gamma_), c(c_);
        for (auto& x : g) x *= r;
        for (auto& x : c) x *= r;
        return DephasingProfile(grid_, std::move(g), std::move(c), kappa, phase_scale_);
    }

    DephasingSample at(double t, TimeLookup mode = TimeLookup::exact) const {
        if (grid_.empty()) throw GridMiss("DephasingProfile: empty grid");
        const double span = std::max(1.0, std::abs(grid_.back()));
        const double tol = 1e-12 * span;
        if (t < grid_.front() - tol || t > grid_.back() + tol)
            throw GridMiss("DephasingProfile: t = " + std::to_string(t) + " outside [" +
                           std::to_string(grid_.front()) + ", " + std::to_string(grid_.back()) + "]");
        auto it = std::lower_bound(grid_.begin(), grid_.end(), t - tol);
        std::size_t k = static_cast<std::size_t>(it - grid_.begin());
        if (k < grid_.size() && std::abs(grid_[k] - t) <= tol) return sample(k);
        if (mode == TimeLookup::exact)
            throw GridMiss("DephasingProfile: t = " + std::to_string(t) + " is not a grid sample");
        const double g = monotone_cubic(gamma_, k, t);
        const double c = monotone_cubic(c_, k, t);
        return {g, c, phase_scale_ * c};
    }

private:
    // Fritsch-Carlson interpolation on [grid[k-1], grid[k]].
    double monotone_cubic(const std::vector<double>& y, std::size_t k, double t) const {
        const std::size_t n = grid_.size();
        auto secant = [&](std::size_t i) { return (y[i + 1] - y[i]) / (grid_[i + 1] - grid_[i]); };
        auto tangent = [&](std::size_t i) {
            if (i == 0) return secant(0);
            if (i == n - 1) return secant(n - 2);
            const double d0 = secant(i - 1);
            const double d1 = secant(i);
            if (d0 * d1 <= 0.0) return 0.0;
            const double h0 = grid_[i] - grid_[i - 1];
            const double h1 = grid_[i + 1] - grid_[i];
            const double w1 = 2.0 * h1 + h0;
            const double w2 = h1 + 2.0 * h0;
            return (w1 + w2) / (w1 / d0 + w2 / d1);
        };
        const std::size_t i = k - 1;
        const double h = grid_[k] - grid_[i];
        const double s = (t - grid_[i]) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        const double h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s);
        const double h11 = s * s * (s - 1);
        return h00 * y[i] + h10 * h * tangent(i) + h01 * y[k] + h11 * h * tangent(k);
    }

    std::vector<double> grid_;
    std::vector<double> gamma_;
    std::vector<double> c_;
    std::vector<double> phi_;
    double kappa_ = 0.0;
    double phase_scale_ = 0.0;
};

namespace detail {

template <class F>
void parallel_for(std::size_t count, F&& body) {
    const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k) body(k);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t k = w; k < count; k += workers) body(k);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace detail

inline DephasingProfile build_profile(const BathSpec& spec, const SystemParams& params,
                                      const std::vector<double>& grid) {
    validate(spec);
    require_derived(params, "build_profile");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] >= 0.0)) throw InvalidParams("build_profile: negative time sample");
        if (k > 0 && !(grid[k] > grid[k - 1])) throw InvalidParams("build_profile: grid must be ascending");
    }
    std::vector<double> gamma(grid.size(), 0.0), c(grid.size(), 0.0);
    if (spec.kappa != 0.0)
        detail::parallel_for(grid.size(), [&](std::size_t k) {
            gamma[k] = gamma_of_t(spec, grid[k]);
            c[k] = c_of_t(spec, grid[k]);
        });
    return DephasingProfile(grid, std::move(gamma), std::move(c), spec.kappa,
                            4.0 * params.mu_mn * params.a_mn);
}

} // namespace tridecoh
