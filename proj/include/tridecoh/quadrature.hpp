// quadrature.hpp: adaptive Simpson on a pre-split interval

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "tridecoh/errors.hpp"

namespace tridecoh::quad {

struct SimpsonOptions {
    double rel_tol = 1e-8;
    int max_depth = 40;
    double max_panel_width = std::numeric_limits<double>::infinity();
};

namespace detail {

struct Node {
    double a, fa, m, fm, b, fb, whole;
};

template <class F>
double simpson_recurse(F& f, const Node& n, double tol, int depth, int max_depth) {
    const double lm = 0.5 * (n.a + n.m);
    const double rm = 0.5 * (n.m + n.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (n.m - n.a) / 6.0 * (n.fa + 4.0 * flm + n.fm);
    const double right = (n.b - n.m) / 6.0 * (n.fm + 4.0 * frm + n.fb);
    const double delta = left + right - n.whole;
    // stop once the correction drops under the tolerance or rounding level
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
    if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= floor) return left + right + delta / 15.0;
    if (depth >= max_depth)
        throw QuadratureNoConvergence("adaptive Simpson: depth limit " + std::to_string(max_depth) +
                                      " reached on [" + std::to_string(n.a) + ", " + std::to_string(n.b) + "]");
    return simpson_recurse(f, Node{n.a, n.fa, lm, flm, n.m, n.fm, left}, 0.5 * tol, depth + 1, max_depth) +
           simpson_recurse(f, Node{n.m, n.fm, rm, frm, n.b, n.fb, right}, 0.5 * tol, depth + 1, max_depth);
}

} // namespace detail

/// Integral of f over [a, b]. The interval is first cut into panels no wider
/// than opts.max_panel_width; the absolute tolerance rel_tol * sum|panel|
/// is shared among panels in proportion to their width.
template <class F>
double adaptive_simpson(F&& f, double a, double b, const SimpsonOptions& opts = {}) {
    if (!(b > a)) return 0.0;
    const double width = b - a;
    std::size_t panels = 1;
    if (std::isfinite(opts.max_panel_width) && opts.max_panel_width > 0.0)
        panels = static_cast<std::size_t>(std::max(1.0, std::ceil(width / opts.max_panel_width)));
    const double h = width / static_cast<double>(panels);

    std::vector<detail::Node> nodes;
    nodes.reserve(panels);
    double coarse_abs = 0.0;
    double fa = f(a);
    for (std::size_t k = 0; k < panels; ++k) {
        const double lo = a + h * static_cast<double>(k);
        const double hi = (k + 1 == panels) ? b : a + h * static_cast<double>(k + 1);
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        const double fb = f(hi);
        const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        nodes.push_back({lo, fa, mid, fm, hi, fb, whole});
        coarse_abs += std::abs(whole);
        fa = fb;
    }

    const double tol_total = opts.rel_tol * coarse_abs;
    double acc = 0.0;
    for (const auto& n : nodes) {
        const double tol = tol_total * (n.b - n.a) / width;
        acc += detail::simpson_recurse(f, n, tol, 0, opts.max_depth);
    }
    return acc;
}

} // namespace tridecoh::quad
