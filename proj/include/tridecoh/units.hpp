// units.hpp: physical constants and the a_11 = 1 scaled unit system
//
// Frequencies quoted in "MHz" are read as 1e6 rad/s. Internally a_11 = 1,
// so the scaled time T = a_11 t is the plotted abscissa.

#pragma once

#include <cmath>
#include <numbers>

#include "tridecoh/errors.hpp"

namespace tridecoh::units {

inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J / K
inline constexpr double mega = 1e6;

/// beta = hbar / (k_B T) in seconds.
inline double beta_seconds(double temperature_k) {
    if (!(temperature_k > 0.0)) throw InvalidParams("beta_seconds: temperature must be > 0");
    return hbar / (k_boltzmann * temperature_k);
}

/// a_11 in rad/s from Omega (rad/s) and alpha = mu_11 / a_11 (mu^2 = a^2 + Omega^2).
inline double a11_rad_per_s(double omega_rabi_rad_s, double alpha) {
    if (!(alpha > 1.0)) throw InvalidParams("a11_rad_per_s: alpha must be > 1");
    return omega_rabi_rad_s / std::sqrt(alpha * alpha - 1.0);
}

/// Interaction time with a_11 t = pi/4 (first GHZ^- point when alpha = 4), seconds.
inline double ghz_generation_time(double omega_rabi_rad_s, double alpha) {
    return std::numbers::pi / (4.0 * a11_rad_per_s(omega_rabi_rad_s, alpha));
}

inline constexpr double deg_to_rad(double deg) noexcept { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / std::numbers::pi; }

} // namespace tridecoh::units
