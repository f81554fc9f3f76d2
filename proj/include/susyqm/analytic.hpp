#pragma once

// Closed-form potentials: harmonic oscillator, particle in a box, sech well,
// inverse square, hydrogen radial and constant potentials, with their
// superpotentials, partners, spectra, eigenstates and scattering data.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "numerics.hpp"

namespace susyqm {

/// A family V1(x; p), V2(x; p) generated by W(x; p). When the parameter map
/// f and remainder R are present, V2(x, p) = V1(x, f(p)) + R(p).
struct ShapeInvariantFamily {
    using Closed = std::function<double(double x, double param)>;
    using ParamMap = std::function<double(double param)>;

    std::string name;
    double param = 0.0;
    double eta = 1.0;
    Closed w_closed;
    Closed v1_closed;
    Closed v2_closed;
    ParamMap f_map;        // empty when the family has no parameter map
    ParamMap r_remainder;  // empty when the family has no parameter map
    double e0 = 0.0;       // ground energy of the unshifted problem
    std::function<double(unsigned n)> closed_spectrum;  // shifted levels, for families without f/R
    std::size_t bound_states = std::numeric_limits<std::size_t>::max();
    std::pair<double, double> domain;  // open interval on which W is defined

    double w(double x) const { return w_closed(x, param); }
    double v1(double x) const { return v1_closed(x, param); }
    double v2(double x) const { return v2_closed(x, param); }
    bool has_parameter_map() const noexcept { return static_cast<bool>(f_map) && static_cast<bool>(r_remainder); }
};

using FamilyParams = std::map<std::string, double>;

namespace detail {
inline double take_param(FamilyParams& p, const std::string& key, std::optional<double> fallback = {}) {
    auto it = p.find(key);
    if (it == p.end()) {
        if (fallback) return *fallback;
        throw numerical_error("missing family parameter " + key);
    }
    const double v = it->second;
    p.erase(it);
    return v;
}

inline void require_consumed(const FamilyParams& p, const std::string& family) {
    if (!p.empty()) throw numerical_error("unknown parameter " + p.begin()->first + " for family " + family);
}

inline double sech(double x) { return 1.0 / std::cosh(x); }
}  // namespace detail

inline ShapeInvariantFamily harmonic_family(double a, double eta = 1.0) {
    if (!(a > 0.0)) throw numerical_error("harmonic family requires a > 0");
    ShapeInvariantFamily f;
    f.name = "harmonic";
    f.param = a;
    f.eta = eta;
    // W = 2aηx keeps the ground state e^{-ax²} for every η.
    f.w_closed = [eta](double x, double p) { return 2.0 * p * eta * x; };
    f.v1_closed = [eta](double x, double p) { return eta * eta * (4.0 * p * p * x * x - 2.0 * p); };
    f.v2_closed = [eta](double x, double p) { return eta * eta * (4.0 * p * p * x * x + 2.0 * p); };
    f.f_map = [](double p) { return p; };
    f.r_remainder = [eta](double p) { return 4.0 * p * eta * eta; };
    f.e0 = 2.0 * a * eta * eta;
    f.domain = {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    return f;
}

inline ShapeInvariantFamily sech_family(double a, double eta = 1.0) {
    if (!(a > 0.0)) throw numerical_error("sech family requires a > 0");
    ShapeInvariantFamily f;
    f.name = "sech";
    f.param = a;
    f.eta = eta;
    f.w_closed = [eta](double x, double p) { return eta * p * std::tanh(p * x); };
    f.v1_closed = [eta](double x, double p) {
        const double s = detail::sech(p * x);
        return eta * eta * p * p * (1.0 - 2.0 * s * s);
    };
    f.v2_closed = [eta](double, double p) { return eta * eta * p * p; };
    // The partner is the free particle: the a → 0 member plus the constant a²η².
    f.f_map = [](double) { return 0.0; };
    f.r_remainder = [eta](double p) { return eta * eta * p * p; };
    f.e0 = -eta * eta * a * a;
    f.bound_states = 1;
    f.domain = {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    return f;
}

inline ShapeInvariantFamily box_family(double length, double eta = 1.0) {
    if (!(length > 0.0)) throw numerical_error("box family requires L > 0");
    ShapeInvariantFamily f;
    f.name = "box";
    f.param = length;
    f.eta = eta;
    f.w_closed = [eta](double x, double l) {
        const double k = std::numbers::pi / l;
        return -eta * k / std::tan(k * x);
    };
    f.v1_closed = [eta](double, double l) {
        const double k = std::numbers::pi / l;
        return -eta * eta * k * k;
    };
    f.v2_closed = [eta](double x, double l) {
        const double k = std::numbers::pi / l;
        const double c = 1.0 / std::tan(k * x);
        return eta * eta * k * k * (1.0 + 2.0 * c * c);
    };
    f.e0 = eta * eta * std::numbers::pi * std::numbers::pi / (length * length);
    f.closed_spectrum = [length, eta](unsigned n) {
        const double nn = static_cast<double>(n);
        return eta * eta * nn * (nn + 2.0) * std::numbers::pi * std::numbers::pi / (length * length);
    };
    f.domain = {0.0, length};
    return f;
}

/// V1 = k(k+1)η²/x² with W = -(k+1)η/x, whose partner is the k+1 member.
inline ShapeInvariantFamily inverse_square_family(double k, double eta = 1.0) {
    ShapeInvariantFamily f;
    f.name = "inverse_square";
    f.param = k;
    f.eta = eta;
    f.w_closed = [eta](double x, double p) { return -(p + 1.0) * eta / x; };
    f.v1_closed = [eta](double x, double p) { return p * (p + 1.0) * eta * eta / (x * x); };
    f.v2_closed = [eta](double x, double p) { return (p + 1.0) * (p + 2.0) * eta * eta / (x * x); };
    f.f_map = [](double p) { return p + 1.0; };
    f.r_remainder = [](double) { return 0.0; };
    f.e0 = 0.0;
    f.bound_states = 0;
    f.domain = {0.0, std::numeric_limits<double>::infinity()};
    return f;
}

/// Radial hydrogen problem in u(r) = r R(r) for angular momentum l.
inline ShapeInvariantFamily hydrogen_family(int l, const PhysicalParams& phys) {
    if (l < 0) throw numerical_error("hydrogen family requires integer l >= 0");
    const double eta = phys.eta;
    const double lam = phys.lambda_coulomb;
    ShapeInvariantFamily f;
    f.name = "hydrogen_radial";
    f.param = l;
    f.eta = eta;
    f.w_closed = [eta, lam](double r, double p) {
        return lam / (2.0 * (p + 1.0) * eta) - (p + 1.0) * eta / r;
    };
    f.v1_closed = [eta, lam](double r, double p) {
        return lam * lam / (4.0 * (p + 1.0) * (p + 1.0) * eta * eta) - lam / r + p * (p + 1.0) * eta * eta / (r * r);
    };
    f.v2_closed = [eta, lam](double r, double p) {
        return lam * lam / (4.0 * (p + 1.0) * (p + 1.0) * eta * eta) - lam / r +
               (p + 1.0) * (p + 2.0) * eta * eta / (r * r);
    };
    f.f_map = [](double p) { return p + 1.0; };
    f.r_remainder = [eta, lam](double p) {
        return lam * lam / (4.0 * eta * eta) * (2.0 * p + 3.0) / ((p + 1.0) * (p + 1.0) * (p + 2.0) * (p + 2.0));
    };
    f.e0 = -lam * lam / (4.0 * (l + 1.0) * (l + 1.0) * eta * eta);
    f.domain = {0.0, std::numeric_limits<double>::infinity()};
    return f;
}

enum class ConstantKind { zero, positive, negative };

/// V1 ≡ 0, +η² or -η², with superpotentials -η/(x+C), -η tanh(x+C) and
/// η tan(x+C) respectively.
inline ShapeInvariantFamily constant_family(ConstantKind kind, double c, double eta = 1.0) {
    ShapeInvariantFamily f;
    f.name = "constant";
    f.param = c;
    f.eta = eta;
    f.bound_states = 0;
    f.domain = {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    switch (kind) {
    case ConstantKind::zero:
        f.w_closed = [eta](double x, double p) { return -eta / (x + p); };
        f.v1_closed = [](double, double) { return 0.0; };
        f.v2_closed = [eta](double x, double p) { return 2.0 * eta * eta / ((x + p) * (x + p)); };
        break;
    case ConstantKind::positive:
        f.w_closed = [eta](double x, double p) { return -eta * std::tanh(x + p); };
        f.v1_closed = [eta](double, double) { return eta * eta; };
        f.v2_closed = [eta](double x, double p) {
            const double s = detail::sech(x + p);
            return eta * eta * (1.0 - 2.0 * s * s);
        };
        break;
    case ConstantKind::negative:
        f.w_closed = [eta](double x, double p) { return eta * std::tan(x + p); };
        f.v1_closed = [eta](double, double) { return -eta * eta; };
        f.v2_closed = [eta](double x, double p) {
            const double s = 1.0 / std::cos(x + p);
            return eta * eta * (2.0 * s * s - 1.0);
        };
        break;
    }
    return f;
}

/// Registry lookup. Parameter keys: harmonic a; box L; sech a; inverse_square k;
/// hydrogen_radial l; constant sign (-1, 0, 1) and C.
inline ShapeInvariantFamily family(const std::string& name, FamilyParams params,
                                   const PhysicalParams& phys = {}) {
    ShapeInvariantFamily f;
    if (name == "harmonic") {
        f = harmonic_family(detail::take_param(params, "a", 1.0), phys.eta);
    } else if (name == "box") {
        f = box_family(detail::take_param(params, "L", std::numbers::pi), phys.eta);
    } else if (name == "sech") {
        f = sech_family(detail::take_param(params, "a", 1.0), phys.eta);
    } else if (name == "inverse_square") {
        f = inverse_square_family(detail::take_param(params, "k", 1.0), phys.eta);
    } else if (name == "hydrogen_radial" || name == "hydrogen") {
        const double l = detail::take_param(params, "l", 0.0);
        if (l < 0.0 || l != std::floor(l)) throw numerical_error("hydrogen family requires integer l >= 0");
        f = hydrogen_family(static_cast<int>(l), phys);
    } else if (name == "constant") {
        const double sign = detail::take_param(params, "sign", 0.0);
        const double c = detail::take_param(params, "C", 0.25);
        ConstantKind kind;
        if (sign == 0.0)
            kind = ConstantKind::zero;
        else if (sign == 1.0)
            kind = ConstantKind::positive;
        else if (sign == -1.0)
            kind = ConstantKind::negative;
        else
            throw numerical_error("constant family requires sign in {-1, 0, 1}");
        f = constant_family(kind, c, phys.eta);
    } else {
        throw numerical_error("unknown family: " + name);
    }
    detail::require_consumed(params, name);
    return f;
}

/// Shifted-problem level n: Σ_{k<n} R(f^k(p)), or the closed spectrum for
/// families without a parameter map.
inline double shape_invariant_energy(const ShapeInvariantFamily& fam, unsigned n) {
    if (fam.has_parameter_map()) {
        double e = 0.0;
        double p = fam.param;
        for (unsigned k = 0; k < n; ++k) {
            e += fam.r_remainder(p);
            p = fam.f_map(p);
        }
        return e;
    }
    if (fam.closed_spectrum) return fam.closed_spectrum(n);
    throw numerical_error("family " + fam.name + " has no spectrum data");
}

inline double unshifted_energy(const ShapeInvariantFamily& fam, unsigned n) {
    return fam.e0 + shape_invariant_energy(fam, n);
}

// ---------------------------------------------------------------------------
// Eigenstates and spectra

/// (1/√(2ⁿn!)) (2a/π)^{1/4} H_n(√(2a) x) e^{-ax²}
inline SampledFunction harmonic_eigenstate(double a, unsigned n, const Grid& grid) {
    if (!(a > 0.0)) throw numerical_error("harmonic eigenstate requires a > 0");
    const double nn = static_cast<double>(n);
    const double norm =
        std::exp(-0.5 * (nn * std::numbers::ln2 + std::lgamma(nn + 1.0))) * std::pow(2.0 * a / std::numbers::pi, 0.25);
    const double s = std::sqrt(2.0 * a);
    return SampledFunction::from(grid, [&](double x) { return norm * hermite_polynomial(n, s * x) * std::exp(-a * x * x); });
}

enum class BoxState { original, partner };

inline SampledFunction box_eigenstate(double length, unsigned n, BoxState which, const Grid& grid) {
    if (!(length > 0.0)) throw numerical_error("box requires L > 0");
    const double tol = 1e-14 * length;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        if (std::abs(x) <= tol || std::abs(x - length) <= tol) throw numerical_error("singular endpoint");
        if (x < 0.0 || x > length) throw numerical_error("grid must lie inside (0, L)");
    }
    const double k = std::numbers::pi / length;
    const double nn = static_cast<double>(n);
    if (which == BoxState::original) {
        const double c = std::sqrt(2.0 / length);
        return SampledFunction::from(grid, [&](double x) { return c * std::sin((nn + 1.0) * k * x); });
    }
    const double c = std::sqrt(2.0 / ((nn + 1.0) * (nn + 3.0) * length));
    return SampledFunction::from(grid, [&](double x) {
        return c * ((nn + 2.0) * std::cos((nn + 2.0) * k * x) - std::sin((nn + 2.0) * k * x) / std::tan(k * x));
    });
}

/// shifted: n(n+2)π²η²/L²; unshifted: (n+1)²π²η²/L².
inline double box_energy(double length, unsigned n, bool shifted, double eta = 1.0) {
    if (!(length > 0.0)) throw numerical_error("box requires L > 0");
    const double nn = static_cast<double>(n);
    const double base = eta * eta * std::numbers::pi * std::numbers::pi / (length * length);
    return shifted ? nn * (nn + 2.0) * base : (nn + 1.0) * (nn + 1.0) * base;
}

/// Normalised √(a/2) sech(ax).
inline SampledFunction sech_ground_state(double a, const Grid& grid) {
    const double c = std::sqrt(0.5 * a);
    return SampledFunction::from(grid, [&](double x) { return c * detail::sech(a * x); });
}

// ---------------------------------------------------------------------------
// Scattering off the sech well

struct ScatteringData {
    double wavenumber = 0.0;
    double phase_shift = 0.0;  // radians
    double transmission_magnitude = 1.0;
};

/// φ = arg((-ik + a)/(-ik - a)), taken with atan2 so k = a is regular.
inline ScatteringData sech_scattering(double a, double k) {
    if (!(a > 0.0) || !(k > 0.0)) throw numerical_error("sech scattering requires a, k > 0");
    const std::complex<double> z = std::complex<double>(a, -k) / std::complex<double>(-a, -k);
    return ScatteringData{k, std::atan2(z.imag(), z.real()), 1.0};
}

/// e^{ikx}(-ik + a tanh(ax))
inline ComplexSampledFunction sech_scattering_state(double a, double k, const Grid& grid) {
    if (!(a > 0.0) || !(k > 0.0)) throw numerical_error("sech scattering requires a, k > 0");
    using C = std::complex<double>;
    return ComplexSampledFunction::from(grid, [&](double x) {
        return std::exp(C(0.0, k * x)) * C(a * std::tanh(a * x), -k);
    });
}

/// max |a²(1 - 2 sech²(ax)) - (a² - 4a|ψ₀|²)| for the given ground-state samples.
inline double nls_mismatch(double a, const SampledFunction& psi0) {
    double worst = 0.0;
    for (std::size_t i = 0; i < psi0.size(); ++i) {
        const double s = detail::sech(a * psi0.x(i));
        const double v1 = a * a * (1.0 - 2.0 * s * s);
        worst = std::max(worst, std::abs(v1 - (a * a - 4.0 * a * psi0[i] * psi0[i])));
    }
    return worst;
}

/// nls_mismatch with sech(ax) normalised numerically on `grid`.
inline double sech_nls_check(double a, const Grid& grid) {
    if (!(a > 0.0)) throw numerical_error("sech well requires a > 0");
    const auto raw = SampledFunction::from(grid, [&](double x) { return detail::sech(a * x); });
    return nls_mismatch(a, l2_normalize(raw));
}

// ---------------------------------------------------------------------------
// Inverse square chain and hydrogen

enum class StepDirection { down, up };

/// Coefficient of 1/x² in the partner of k(k+1)/x²: down k(k-1), up (k+1)(k+2).
inline double inverse_square_partner_step(double k, StepDirection direction) {
    return direction == StepDirection::down ? k * (k - 1.0) : (k + 1.0) * (k + 2.0);
}

inline double bohr_radius(const PhysicalParams& phys) {
    return 2.0 * phys.eta * phys.eta / phys.lambda_coulomb;
}

/// C r^{l+1} e^{-Λr/(2(l+1)η²)}, normalised in closed form.
inline SampledFunction hydrogen_ground_state(int l, double lambda, double eta, const Grid& grid) {
    if (l < 0) throw numerical_error("hydrogen state requires l >= 0");
    const PhysicalParams phys(eta, lambda);
    if (grid.x_min() < 0.0) throw numerical_error("radial grid must lie in r >= 0");
    const double beta = lambda / (2.0 * (l + 1.0) * eta * eta);
    const double m = 2.0 * l + 2.0;  // ∫ r^m e^{-2βr} dr = m!/(2β)^{m+1}
    const double log_c = 0.5 * ((m + 1.0) * std::log(2.0 * beta) - std::lgamma(m + 1.0));
    return SampledFunction::from(grid, [&](double r) {
        if (r == 0.0) return 0.0;
        return std::exp(log_c + (l + 1.0) * std::log(r) - beta * r);
    });
}

/// l = 0, first excited radial state: 2(2a₀)^{-3/2}(r - r²/2a₀)e^{-r/2a₀}.
inline SampledFunction hydrogen_first_excited_state(double lambda, double eta, const Grid& grid) {
    const double a0 = bohr_radius(PhysicalParams(eta, lambda));
    const double c = 2.0 * std::pow(2.0 * a0, -1.5);
    return SampledFunction::from(grid, [&](double r) {
        return c * (r - r * r / (2.0 * a0)) * std::exp(-r / (2.0 * a0));
    });
}

/// -Λ²/(4(l+n+1)²η²)
inline double hydrogen_energy(int l, int n, double lambda, double eta) {
    if (l < 0 || n < 0) throw numerical_error("hydrogen energy requires l, n >= 0");
    const PhysicalParams phys(eta, lambda);
    const double q = static_cast<double>(l + n + 1);
    return -lambda * lambda / (4.0 * q * q * eta * eta);
}

// ---------------------------------------------------------------------------
// Family-level conveniences

/// Sampling grid covering the bound states of a family:
/// harmonic/sech [-10, 10]×2001; box (0, L) inset by half a step, 2001 points;
/// hydrogen (0, 40(l+1)²η²/Λ]×4001.
inline Grid default_grid(const ShapeInvariantFamily& fam, const PhysicalParams& phys = {}) {
    if (fam.name == "box") return Grid::inset(0.0, fam.param, 2001);
    if (fam.name == "hydrogen_radial") {
        const double l = fam.param;
        const double r_max = 40.0 * (l + 1.0) * (l + 1.0) * phys.eta * phys.eta / phys.lambda_coulomb;
        const double h = r_max / 4001.0;
        return Grid(h, r_max, 4001);
    }
    if (fam.name == "inverse_square") return Grid(0.01, 10.0, 2001);
    if (fam.name == "constant") return Grid(0.0, 1.0, 2001);
    return Grid(-10.0, 10.0, 2001);
}

/// Closed-form normalised eigenstate n of the unshifted problem, when known.
inline std::optional<SampledFunction> family_eigenstate(const ShapeInvariantFamily& fam, unsigned n,
                                                        const Grid& grid, const PhysicalParams& phys = {}) {
    if (fam.name == "harmonic") return harmonic_eigenstate(fam.param, n, grid);
    if (fam.name == "box") return box_eigenstate(fam.param, n, BoxState::original, grid);
    if (fam.name == "sech" && n == 0) return sech_ground_state(fam.param, grid);
    if (fam.name == "hydrogen_radial") {
        const int l = static_cast<int>(fam.param);
        if (n == 0) return hydrogen_ground_state(l, phys.lambda_coulomb, phys.eta, grid);
        if (n == 1 && l == 0) return hydrogen_first_excited_state(phys.lambda_coulomb, phys.eta, grid);
    }
    return std::nullopt;
}

}  // namespace susyqm
