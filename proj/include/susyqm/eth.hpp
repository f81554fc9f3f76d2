#pragma once

// Matrix-element statistics under the iterated partner map, power-law fits,
// and size sweeps for the two thermalisation conditions (diagonal spacing
// and off-diagonal suppression).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "random.hpp"

namespace susyqm {

/// (m₁₁ − m_nn)/(n − 1): the mean diagonal step once the diagonal is ordered.
inline double diag_spacing_estimate(const SymmetricMatrix& m) {
    const std::size_t n = m.size();
    if (n < 2) throw numerical_error("diagonal statistics need n >= 2");
    return (m(0, 0) - m(n - 1, n - 1)) / static_cast<double>(n - 1);
}

/// Mean of |m_{i+1,i+1} − m_ii|.
inline double diag_mean_abs_spacing(const SymmetricMatrix& m) {
    const std::size_t n = m.size();
    if (n < 2) throw numerical_error("diagonal statistics need n >= 2");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) s += std::abs(m(i + 1, i + 1) - m(i, i));
    return s / static_cast<double>(n - 1);
}

/// Mean |m_ij| over the strict lower triangle.
inline double offdiag_mean_abs(const SymmetricMatrix& m) {
    const std::size_t n = m.size();
    if (n < 2) throw numerical_error("off-diagonal statistics need n >= 2");
    double s = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) s += std::abs(m(i, j));
    return s / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

/// Fraction of consecutive diagonal pairs with m_ii ≥ m_{i+1,i+1}.
inline double diag_monotone_fraction(const SymmetricMatrix& m) {
    const std::size_t n = m.size();
    if (n < 2) throw numerical_error("diagonal statistics need n >= 2");
    std::size_t ok = 0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (m(i, i) >= m(i + 1, i + 1)) ++ok;
    return static_cast<double>(ok) / static_cast<double>(n - 1);
}

struct PowerLawFit {
    double p = 0.0;
    double c = 0.0;
    double r_squared = 0.0;
};

/// y = c xᵖ by least squares on (ln x, ln y). r² is the squared correlation of
/// the logs; it is 1 when every y is equal (the fit is exact).
inline PowerLawFit powerlaw_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw numerical_error("power-law fit needs equal-length data");
    const std::size_t n = xs.size();
    if (n < 3) throw numerical_error("power-law fit needs at least 3 points");
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw numerical_error("log of non-positive value");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    bool constant_y = true;
    for (std::size_t i = 1; i < n; ++i) constant_y = constant_y && ys[i] == ys[0];
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = lx[i] - mx;
        const double dy = constant_y ? 0.0 : ly[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw numerical_error("power-law fit needs distinct x values");
    PowerLawFit fit;
    fit.p = sxy / sxx;
    fit.c = constant_y ? ys[0] : std::exp(my - fit.p * mx);
    fit.r_squared = syy > 0.0 ? std::min(1.0, sxy * sxy / (sxx * syy)) : 1.0;
    return fit;
}

/// `iterations` applications of the partner map.
inline SymmetricMatrix iterate_partner(SymmetricMatrix h, int iterations, double tol = default_partner_tolerance) {
    if (iterations < 0) throw numerical_error("iteration count must be non-negative");
    for (int k = 0; k < iterations; ++k) h = susy_partner_matrix(h, tol);
    return h;
}

enum class EthCondition { diagonal = 1, offdiagonal = 2 };

inline EthCondition parse_condition(int c) {
    if (c == 1) return EthCondition::diagonal;
    if (c == 2) return EthCondition::offdiagonal;
    throw numerical_error("condition must be 1 or 2");
}

/// Condition 1: 5 iterations; condition 2: ⌊n/20⌋ iterations.
inline int default_iterations(EthCondition c, std::size_t n) {
    return c == EthCondition::diagonal ? 5 : static_cast<int>(n / 20);
}

enum class MatrixGenerator { entrywise, spectral };

inline constexpr double default_eth_scale = 9.5;  // uniform half-width 10

struct EthSweepOptions {
    EthCondition condition = EthCondition::diagonal;
    Distribution dist = Distribution::uniform;
    double scale = default_eth_scale;
    RngSeed seed{0};
    MatrixGenerator generator = MatrixGenerator::entrywise;
    std::optional<int> iterations;  // overrides the condition's rule
    double tol = default_partner_tolerance;
};

struct EthSweepRecord {
    std::size_t n = 0;
    int iterations = 0;
    double diag_spacing = 0.0;
    double offdiag_mean_abs = 0.0;
    RngSeed seed{0};  // sub-seed used for this size

    double statistic(EthCondition c) const {
        return c == EthCondition::diagonal ? diag_spacing : offdiag_mean_abs;
    }
};

struct EthSweepResult {
    EthCondition condition = EthCondition::diagonal;
    std::vector<EthSweepRecord> records;
    PowerLawFit fit;
};

/// One size of a sweep; the matrix is drawn from `sub_seed`.
inline EthSweepRecord eth_record(std::size_t n, RngSeed sub_seed, const EthSweepOptions& opts) {
    const int iterations = opts.iterations.value_or(default_iterations(opts.condition, n));
    try {
        SymmetricMatrix h = opts.generator == MatrixGenerator::entrywise
                                ? random_symmetric(n, opts.dist, opts.scale, sub_seed)
                                : random_symmetric_spectral(n, opts.dist, opts.scale, sub_seed);
        h = iterate_partner(std::move(h), iterations, opts.tol);
        return EthSweepRecord{n, iterations, diag_spacing_estimate(h), offdiag_mean_abs(h), sub_seed};
    } catch (const numerical_error& e) {
        throw numerical_error("n=" + std::to_string(n) + " seed=" + std::to_string(sub_seed.value) + ": " + e.what());
    }
}

/// Sizes must be ≥ 2 and strictly ascending. Size n uses seed.derive(n).
inline EthSweepResult eth_sweep(const std::vector<std::size_t>& sizes, const EthSweepOptions& opts) {
    if (sizes.empty()) throw numerical_error("no sizes to sweep");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 2) throw numerical_error("sizes must be at least 2");
        if (i > 0 && sizes[i] <= sizes[i - 1]) throw numerical_error("sizes must be strictly ascending");
    }
    EthSweepResult out;
    out.condition = opts.condition;
    std::vector<double> xs, ys;
    for (std::size_t n : sizes) {
        out.records.push_back(eth_record(n, opts.seed.derive(n), opts));
        xs.push_back(static_cast<double>(n));
        ys.push_back(out.records.back().statistic(opts.condition));
    }
    out.fit = powerlaw_fit(xs, ys);
    return out;
}

}  // namespace susyqm
