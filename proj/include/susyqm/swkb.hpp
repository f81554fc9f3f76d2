#pragma once

// Supersymmetric WKB quantisation: ∫_a^b √(E − W²) dx = nπη between the
// turning points W(a)² = W(b)² = E.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "analytic.hpp"
#include "numerics.hpp"

namespace susyqm {

struct SwkbProblem {
    std::function<double(double)> w;
    double eta = 1.0;
    double x_lo = -100.0;  // turning-point search interval
    double x_hi = 100.0;
};

struct TurningPoints {
    double a;
    double b;
};

class turning_point_error : public numerical_error {
public:
    turning_point_error() : numerical_error("turning-point structure not two-point") {}
};

namespace detail {
inline constexpr std::size_t turning_scan_samples = 4001;

/// Bisection on a sign change of g, down to adjacent doubles.
template <typename G>
double bisect_root(G&& g, double lo, double hi) {
    double glo = g(lo);
    if (glo == 0.0) return lo;
    if (g(hi) == 0.0) return hi;
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm >= 0.0) == (glo >= 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
}
}  // namespace detail

/// Scans the search interval for the two sign changes of W² − E. When the
/// classically allowed region falls between samples the scan zooms in on the
/// smallest sample of W² − E.
inline TurningPoints turning_points(const SwkbProblem& p, double energy) {
    if (!(energy > 0.0)) throw numerical_error("turning points need positive energy");
    if (!(p.x_lo < p.x_hi)) throw numerical_error("empty turning-point search interval");
    auto g = [&](double x) {
        const double w = p.w(x);
        return w * w - energy;
    };
    const std::size_t m = detail::turning_scan_samples;
    double lo = p.x_lo, hi = p.x_hi;
    for (int zoom = 0; zoom < 40; ++zoom) {
        const double step = (hi - lo) / static_cast<double>(m - 1);
        std::vector<double> xs(m), gs(m);
        for (std::size_t i = 0; i < m; ++i) {
            xs[i] = i + 1 == m ? hi : lo + static_cast<double>(i) * step;
            gs[i] = g(xs[i]);
            if (!std::isfinite(gs[i])) throw numerical_error("superpotential not finite on search interval");
        }
        std::vector<std::size_t> changes;
        for (std::size_t i = 0; i + 1 < m; ++i)
            if ((gs[i] >= 0.0) != (gs[i + 1] >= 0.0)) changes.push_back(i);
        if (changes.size() == 2) {
            if (zoom > 0 && (gs.front() < 0.0 || gs.back() < 0.0)) throw turning_point_error();
            if (!(gs[changes[0]] >= 0.0 && gs[changes[1]] < 0.0)) throw turning_point_error();
            TurningPoints tp{detail::bisect_root(g, xs[changes[0]], xs[changes[0] + 1]),
                             detail::bisect_root(g, xs[changes[1]], xs[changes[1] + 1])};
            return tp;
        }
        if (!changes.empty()) throw turning_point_error();
        if (gs.front() < 0.0) throw turning_point_error();  // allowed everywhere
        std::size_t best = 0;
        for (std::size_t i = 1; i < m; ++i)
            if (gs[i] < gs[best]) best = i;
        lo = xs[best == 0 ? 0 : best - 1];
        hi = xs[best + 1 == m ? m - 1 : best + 1];
        if (!(lo < hi)) break;
    }
    throw turning_point_error();
}

/// ∫_a^b √(E − W²) dx. With x = c + d cos θ the integrand becomes
/// d sin θ √(E − W²), integrated by Gauss-Chebyshev (second kind) nodes; the
/// node count doubles until the relative change drops below 1e-12.
inline double swkb_action(const SwkbProblem& p, double energy) {
    if (energy <= 0.0) return 0.0;
    const auto tp = turning_points(p, energy);
    const double c = 0.5 * (tp.a + tp.b);
    const double d = 0.5 * (tp.b - tp.a);
    auto rule = [&](std::size_t n) {
        double s = 0.0;
        const double h = std::numbers::pi / static_cast<double>(n + 1);
        for (std::size_t k = 1; k <= n; ++k) {
            const double theta = h * static_cast<double>(k);
            const double w = p.w(c + d * std::cos(theta));
            s += std::sin(theta) * std::sqrt(std::max(0.0, energy - w * w));
        }
        return h * d * s;
    };
    std::size_t n = 16;
    double prev = rule(n);
    for (int it = 0; it < 14; ++it) {
        n = 2 * n + 1;  // nests the previous nodes
        const double cur = rule(n);
        if (std::abs(cur - prev) <= 1e-12 * std::abs(cur)) return cur;
        prev = cur;
    }
    throw numerical_error("SWKB action quadrature did not converge");
}

/// Energy E_n solving action(E) = nπη; n = 0 gives 0.
inline double swkb_energy_level(const SwkbProblem& p, unsigned n, double initial_energy = 1.0) {
    if (n == 0) return 0.0;
    if (!(p.eta > 0.0)) throw numerical_error("eta must be positive");
    const double target = static_cast<double>(n) * std::numbers::pi * p.eta;

    auto valid = [&](double e) {
        try {
            (void)turning_points(p, e);
            return true;
        } catch (const turning_point_error&) {
            return false;
        }
    };

    // Bracket: double E until the action passes the target. If E leaves the
    // range with a two-point structure, settle on the largest valid E below.
    double lo = 0.0, action_lo = 0.0;
    double hi = initial_energy;
    double action_hi = 0.0;
    bool bracketed = false;
    for (int it = 0; it < 200 && !bracketed; ++it) {
        if (valid(hi)) {
            action_hi = swkb_action(p, hi);
            if (action_hi >= target) {
                bracketed = true;
                break;
            }
            if (action_hi < action_lo) throw numerical_error("SWKB action is not monotone in energy");
            lo = hi;
            action_lo = action_hi;
            hi *= 2.0;
        } else {
            double good = lo, bad = hi;
            for (int k = 0; k < 100; ++k) {
                const double mid = 0.5 * (good + bad);
                if (mid <= good || mid >= bad) break;
                (valid(mid) ? good : bad) = mid;
            }
            if (good <= lo) throw numerical_error("no bracketing interval for SWKB level " + std::to_string(n));
            hi = good;
            action_hi = swkb_action(p, hi);
            if (action_hi < target)
                throw numerical_error("no bracketing interval for SWKB level " + std::to_string(n));
            bracketed = true;
        }
    }
    if (!bracketed) throw numerical_error("no bracketing interval for SWKB level " + std::to_string(n));

    // Illinois false position on action(E) − target.
    double f_lo = action_lo - target, f_hi = action_hi - target;
    int side = 0;
    const double slack = 1e-12 * target;
    for (int it = 0; it < 300; ++it) {
        double e = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if (!(e > lo && e < hi)) e = 0.5 * (lo + hi);
        if (e <= lo || e >= hi) break;
        const double a = swkb_action(p, e);
        if (a < action_lo - slack || a > action_hi + slack)
            throw numerical_error("SWKB action is not monotone in energy");
        const double f = a - target;
        if (std::abs(f) <= 1e-10) return e;
        if (f < 0.0) {
            lo = e;
            f_lo = f;
            action_lo = a;
            if (side == -1) f_hi *= 0.5;
            side = -1;
        } else {
            hi = e;
            f_hi = f;
            action_hi = a;
            if (side == 1) f_lo *= 0.5;
            side = 1;
        }
    }
    return 0.5 * (lo + hi);
}

/// SWKB problem for a closed-form family with a search interval that holds
/// the turning points of the low levels.
inline SwkbProblem swkb_problem(const ShapeInvariantFamily& fam) {
    SwkbProblem p;
    p.eta = fam.eta;
    p.w = [fam](double x) { return fam.w(x); };
    if (fam.name == "hydrogen_radial") {
        // W → A as r → ∞; (l+1)η/A is the radius where W changes sign.
        const double scale = (fam.param + 1.0) * fam.eta / fam.w(1e300);
        p.x_lo = 1e-6 * scale;
        p.x_hi = 1e4 * scale;
    } else if (fam.name == "box") {
        const double h = 1e-9 * fam.param;
        p.x_lo = h;
        p.x_hi = fam.param - h;
    } else if (fam.name == "harmonic") {
        p.x_lo = -100.0 / std::sqrt(fam.param);
        p.x_hi = 100.0 / std::sqrt(fam.param);
    } else {
        p.x_lo = -100.0;
        p.x_hi = 100.0;
    }
    return p;
}

}  // namespace susyqm
