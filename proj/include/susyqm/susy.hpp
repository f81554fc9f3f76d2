#pragma once

// Superpotential calculus on sampled functions: W from a ground state and
// back, partner potentials, the ladder operators A = η d/dx + W and
// A† = -η d/dx + W, Riccati residuals and general solutions, partner chains.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "numerics.hpp"

namespace susyqm {

/// W(x) sampled on a grid, with the η it was built for. Masked samples are
/// points where W blows up.
class SuperpotentialModel {
public:
    SuperpotentialModel(SampledFunction w, double eta) : w_(std::move(w)), eta_(eta) {
        if (!(eta_ > 0.0)) throw numerical_error("eta must be positive");
    }

    template <typename F>
    static SuperpotentialModel from(const Grid& grid, double eta, F&& f) {
        return SuperpotentialModel(SampledFunction::from(grid, std::forward<F>(f)), eta);
    }

    const SampledFunction& w() const noexcept { return w_; }
    const Grid& grid() const noexcept { return w_.grid(); }
    double eta() const noexcept { return eta_; }
    bool singular(std::size_t i) const noexcept { return w_.masked(i); }
    const std::vector<bool>& singular_mask() const noexcept { return w_.mask(); }

private:
    SampledFunction w_;
    double eta_;
};

struct PartnerPair {
    SampledFunction v1;  // -ηW' + W²
    SampledFunction v2;  // +ηW' + W²
    SuperpotentialModel w;
};

inline constexpr double default_node_threshold = 1e-12;

/// W = -η ψ₀'/ψ₀. Samples with |ψ₀| < rel_threshold·max|ψ₀| are masked.
inline SuperpotentialModel superpotential_from_ground_state(const SampledFunction& psi0, double eta,
                                                            double rel_threshold = default_node_threshold) {
    const double peak = psi0.max_abs();
    if (!(peak > 0.0)) throw numerical_error("ground state is identically zero");
    const auto d = central_difference(psi0);
    const std::size_t n = psi0.size();
    std::vector<double> w(n);
    std::vector<bool> mask(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (psi0.masked(i) || d.masked(i) || std::abs(psi0[i]) < rel_threshold * peak) {
            mask[i] = true;
            w[i] = std::numeric_limits<double>::quiet_NaN();
        } else {
            w[i] = -eta * d[i] / psi0[i];
        }
    }
    return SuperpotentialModel(SampledFunction(psi0.grid(), std::move(w), std::move(mask)), eta);
}

/// ψ₀(x_i) ∝ exp(-(1/η) ∫_{x_anchor}^{x_i} W). Masked grid end points (other
/// than the anchor) get ψ₀ = 0; any other masked sample is an error. With
/// `normalize` false the raw exponential is returned (non-normalisable cases).
inline SampledFunction ground_state_from_superpotential(const SuperpotentialModel& w,
                                                        std::size_t anchor_index = 0,
                                                        bool normalize = true) {
    const auto& f = w.w();
    const std::size_t n = f.size();
    if (anchor_index >= n) throw numerical_error("anchor index out of range");
    std::size_t lo = 0, hi = n - 1;
    if (f.masked(0) && anchor_index != 0) lo = 1;
    if (f.masked(n - 1) && anchor_index != n - 1) hi = n - 2;
    for (std::size_t i = lo; i <= hi; ++i)
        if (f.masked(i)) throw numerical_error("superpotential singular on path");

    std::vector<double> inner(f.values().begin() + static_cast<std::ptrdiff_t>(lo),
                              f.values().begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    const auto integral = cumulative_trapezoid(inner, f.grid().spacing(), anchor_index - lo);
    std::vector<double> expo(integral.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < integral.size(); ++i) {
        expo[i] = -integral[i] / w.eta();
        top = std::max(top, expo[i]);
    }
    std::vector<double> psi(n, 0.0);
    // Shifting the exponent only changes the normalisation constant.
    const double shift = normalize ? top : 0.0;
    for (std::size_t i = 0; i < expo.size(); ++i) psi[lo + i] = std::exp(expo[i] - shift);
    SampledFunction out(f.grid(), std::move(psi));
    return normalize ? l2_normalize(out) : out;
}

/// v1 = -ηW' + W², v2 = ηW' + W²; singular points propagate into both.
inline PartnerPair partner_potential(const SuperpotentialModel& w) {
    const auto& f = w.w();
    const auto d = central_difference(f);
    const std::size_t n = f.size();
    std::vector<double> v1(n), v2(n);
    const auto mask = merge_masks(f.mask(), d.mask());
    for (std::size_t i = 0; i < n; ++i) {
        if (!mask.empty() && mask[i]) {
            v1[i] = v2[i] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const double w2 = f[i] * f[i];
        v1[i] = -w.eta() * d[i] + w2;
        v2[i] = w.eta() * d[i] + w2;
    }
    return PartnerPair{SampledFunction(f.grid(), std::move(v1), mask),
                       SampledFunction(f.grid(), std::move(v2), mask), w};
}

/// max |−ηW' + W² − v1| over interior points that are not singular.
inline double riccati_residual(const SuperpotentialModel& w, const SampledFunction& v1) {
    require_same_grid(w.grid(), v1.grid());
    const auto pair = partner_potential(w);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < v1.size(); ++i) {
        if (pair.v1.masked(i) || v1.masked(i)) continue;
        worst = std::max(worst, std::abs(pair.v1[i] - v1[i]));
    }
    return worst;
}

/// W = W₀ − η e^{(2/η)∫W₀} / (∫e^{(2/η)∫W₀} + C), integrals from the grid's
/// left end. C = ±infinity returns W₀. Points next to a zero of the
/// denominator are masked.
inline SuperpotentialModel riccati_general_solution(const SuperpotentialModel& w0, double c) {
    if (std::isinf(c)) return w0;
    if (std::isnan(c)) throw numerical_error("integration constant is NaN");
    const auto& f = w0.w();
    if (f.has_mask()) throw numerical_error("superpotential singular on path");
    const double eta = w0.eta();
    const double h = f.grid().spacing();
    const std::size_t n = f.size();

    const auto i1 = cumulative_trapezoid(f.values(), h);
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = std::exp(2.0 * i1[i] / eta);
    const auto i2 = cumulative_trapezoid(e, h);

    std::vector<double> denom(n), w(n);
    std::vector<bool> mask(n, false);
    for (std::size_t i = 0; i < n; ++i) denom[i] = i2[i] + c;
    for (std::size_t i = 0; i < n; ++i) {
        if (denom[i] == 0.0 || !std::isfinite(e[i])) mask[i] = true;
        if (i > 0 && std::signbit(denom[i]) != std::signbit(denom[i - 1])) mask[i] = mask[i - 1] = true;
    }
    for (std::size_t i = 0; i < n; ++i)
        w[i] = mask[i] ? std::numeric_limits<double>::quiet_NaN() : f[i] - eta * e[i] / denom[i];
    return SuperpotentialModel(SampledFunction(f.grid(), std::move(w), std::move(mask)), eta);
}

namespace detail {
inline SampledFunction apply_first_order(const SampledFunction& psi, const SuperpotentialModel& w,
                                         double derivative_sign) {
    require_same_grid(psi.grid(), w.grid());
    const auto d = central_difference(psi);
    const auto mask = merge_masks(d.mask(), w.w().mask());
    std::vector<double> out(psi.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (!mask.empty() && mask[i]) ? std::numeric_limits<double>::quiet_NaN()
                                            : derivative_sign * w.eta() * d[i] + w.w()[i] * psi[i];
    return SampledFunction(psi.grid(), std::move(out), mask);
}
}  // namespace detail

/// A ψ = η ψ' + W ψ
inline SampledFunction apply_annihilation(const SampledFunction& psi, const SuperpotentialModel& w) {
    return detail::apply_first_order(psi, w, 1.0);
}

/// A† ψ = -η ψ' + W ψ
inline SampledFunction apply_creation(const SampledFunction& psi, const SuperpotentialModel& w) {
    return detail::apply_first_order(psi, w, -1.0);
}

enum class LadderDirection { down, up };

/// down: A ψ / √E (H(1) level n+1 → H(2) level n); up: A† ψ / √E.
inline SampledFunction ladder_map(const SampledFunction& psi, const SuperpotentialModel& w, double energy,
                                  LadderDirection direction) {
    if (!(energy > 0.0)) throw numerical_error("ladder undefined at zero energy");
    auto out = direction == LadderDirection::down ? apply_annihilation(psi, w) : apply_creation(psi, w);
    return out.scaled(1.0 / std::sqrt(energy));
}

// ---------------------------------------------------------------------------
// Partner chains

/// Returns the ground-state energy and (any-normalised) eigenvector of the
/// Hamiltonian -η² d²/dx² + v on v's grid.
using EigenBackend = std::function<EigenPair(const SampledFunction& v, double eta)>;

/// Three-point finite differences with Dirichlet truncation, tridiagonal solve.
inline EigenPair three_point_ground_state(const SampledFunction& v, double eta) {
    if (v.has_mask()) throw numerical_error("potential has singular points");
    return tridiagonal_eigenpair(schrodinger_tridiagonal(v.values(), v.grid().spacing(), eta), 0);
}

struct PartnerChain {
    std::vector<SampledFunction> potentials;  // V^(1) .. V^(depth+1), unshifted
    std::vector<double> ground_energies;      // lowest eigenvalue of each V^(k), k = 1..depth
    std::vector<PartnerPair> pairs;           // pair k: v1 = V^(k) − E_k, v2 = v1 + 2ηW_k'
};

namespace detail {
/// Replaces masked samples at either end of w by the straight line through
/// the nearest `span` unmasked samples. Interior masked samples are an error.
inline SampledFunction extrapolate_tails(const SampledFunction& w, std::size_t span = 8) {
    const std::size_t n = w.size();
    std::size_t first = 0;
    while (first < n && w.masked(first)) ++first;
    std::size_t last = n;
    while (last > first && w.masked(last - 1)) --last;
    if (last - first < span + 1) throw numerical_error("ground state too narrow for the grid");
    for (std::size_t i = first; i < last; ++i)
        if (w.masked(i)) throw numerical_error("backend did not return nodeless state");
    std::vector<double> out(w.values());
    const double h = w.grid().spacing();
    const double left_slope = (w[first + span] - w[first]) / (static_cast<double>(span) * h);
    for (std::size_t i = 0; i < first; ++i) out[i] = w[first] - left_slope * static_cast<double>(first - i) * h;
    const double right_slope = (w[last - 1] - w[last - 1 - span]) / (static_cast<double>(span) * h);
    for (std::size_t i = last; i < n; ++i)
        out[i] = w[last - 1] + right_slope * static_cast<double>(i - (last - 1)) * h;
    return SampledFunction(w.grid(), std::move(out));
}
}  // namespace detail

/// Iterated partners: at each level take the numeric ground state of V^(k),
/// extract W_k, and set V^(k+1) = V^(k) + 2ηW_k'. Where the ground state is
/// below `rel_threshold` of its peak, W_k is extended linearly.
inline PartnerChain partner_chain(const SampledFunction& v1, double eta, int depth,
                                  const EigenBackend& backend = three_point_ground_state,
                                  double rel_threshold = 1e-8) {
    if (depth < 1) throw numerical_error("chain depth must be at least 1");
    if (!(eta > 0.0)) throw numerical_error("eta must be positive");
    PartnerChain chain;
    chain.potentials.push_back(v1);
    for (int k = 0; k < depth; ++k) {
        const auto& v = chain.potentials.back();
        const EigenPair ground = backend(v, eta);
        if (ground.vector.size() != v.size()) throw numerical_error("backend returned wrong vector length");

        std::vector<double> psi = ground.vector;
        double peak = 0.0;
        double sum = 0.0;
        for (double x : psi) {
            peak = std::max(peak, std::abs(x));
            sum += x;
        }
        if (!(peak > 0.0)) throw numerical_error("backend returned zero vector");
        if (sum < 0.0)
            for (double& x : psi) x = -x;
        const SampledFunction psi0(v.grid(), std::move(psi));
        if (count_sign_changes(psi0, 1e-10 * peak) != 0)
            throw numerical_error("backend did not return nodeless state");

        const auto raw = superpotential_from_ground_state(psi0, eta, rel_threshold);
        const SuperpotentialModel w(detail::extrapolate_tails(raw.w()), eta);
        const auto d = central_difference(w.w());

        std::vector<double> shifted(v.size()), next(v.size()), partner(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            shifted[i] = v[i] - ground.energy;
            partner[i] = shifted[i] + 2.0 * eta * d[i];
            next[i] = v[i] + 2.0 * eta * d[i];
        }
        chain.ground_energies.push_back(ground.energy);
        chain.pairs.push_back(PartnerPair{SampledFunction(v.grid(), std::move(shifted)),
                                          SampledFunction(v.grid(), std::move(partner)), w});
        chain.potentials.emplace_back(v.grid(), std::move(next));
    }
    return chain;
}

}  // namespace susyqm
