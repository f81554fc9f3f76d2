#pragma once

// Shared numeric substrate: uniform grids, sampled functions, quadrature,
// finite differences, Hermite polynomials and physical constants.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace susyqm {

/// Base class for every error raised by the library.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Uniform 1D grid x_i = x_min + i*h, i = 0..n_points-1.
class Grid {
public:
    Grid(double x_min, double x_max, std::size_t n_points)
        : x_min_(x_min), x_max_(x_max), n_points_(n_points) {
        if (n_points < 3) throw numerical_error("grid too small");
        if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max))
            throw numerical_error("grid requires finite x_min < x_max");
        spacing_ = (x_max - x_min) / static_cast<double>(n_points - 1);
    }

    /// Grid on (lo, hi) whose end points sit half a step inside the interval.
    static Grid inset(double lo, double hi, std::size_t n_points) {
        if (n_points < 3) throw numerical_error("grid too small");
        const double h = (hi - lo) / static_cast<double>(n_points);
        return Grid(lo + 0.5 * h, hi - 0.5 * h, n_points);
    }

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::size_t size() const noexcept { return n_points_; }
    double spacing() const noexcept { return spacing_; }
    double operator[](std::size_t i) const noexcept {
        return x_min_ + static_cast<double>(i) * spacing_;
    }

    std::vector<double> points() const {
        std::vector<double> xs(n_points_);
        for (std::size_t i = 0; i < n_points_; ++i) xs[i] = (*this)[i];
        return xs;
    }

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.x_min_ == b.x_min_ && a.x_max_ == b.x_max_ && a.n_points_ == b.n_points_;
    }

private:
    double x_min_;
    double x_max_;
    std::size_t n_points_;
    double spacing_;
};

namespace detail {
template <typename T> struct is_complex : std::false_type {};
template <typename T> struct is_complex<std::complex<T>> : std::true_type {};

template <typename T> bool is_finite(const T& v) {
    if constexpr (is_complex<T>::value)
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    else
        return std::isfinite(v);
}
}  // namespace detail

/// Samples of a real or complex function on a Grid.
///
/// Values must be finite except at indices flagged in the singular mask.
template <typename T>
class BasicSampledFunction {
public:
    using value_type = T;

    BasicSampledFunction(Grid grid, std::vector<T> values, std::vector<bool> mask = {})
        : grid_(grid), values_(std::move(values)), mask_(std::move(mask)) {
        if (values_.size() != grid_.size())
            throw numerical_error("sample count does not match grid");
        if (!mask_.empty() && mask_.size() != grid_.size())
            throw numerical_error("mask length does not match grid");
        if (!mask_.empty() && std::none_of(mask_.begin(), mask_.end(), [](bool b) { return b; }))
            mask_.clear();
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (!masked(i) && !detail::is_finite(values_[i]))
                throw numerical_error("non-finite sample at index " + std::to_string(i));
    }

    template <typename F>
    static BasicSampledFunction from(const Grid& grid, F&& f) {
        std::vector<T> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) v[i] = static_cast<T>(f(grid[i]));
        return BasicSampledFunction(grid, std::move(v));
    }

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<T>& values() const noexcept { return values_; }
    const T& operator[](std::size_t i) const noexcept { return values_[i]; }
    double x(std::size_t i) const noexcept { return grid_[i]; }

    bool has_mask() const noexcept { return !mask_.empty(); }
    bool masked(std::size_t i) const noexcept { return !mask_.empty() && mask_[i]; }
    const std::vector<bool>& mask() const noexcept { return mask_; }

    double max_abs() const {
        double m = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (!masked(i)) m = std::max(m, static_cast<double>(std::abs(values_[i])));
        return m;
    }

    BasicSampledFunction scaled(T factor) const {
        std::vector<T> v(values_);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!masked(i)) v[i] *= factor;
        return BasicSampledFunction(grid_, std::move(v), mask_);
    }

private:
    Grid grid_;
    std::vector<T> values_;
    std::vector<bool> mask_;
};

using SampledFunction = BasicSampledFunction<double>;
using ComplexSampledFunction = BasicSampledFunction<std::complex<double>>;

inline std::vector<bool> merge_masks(const std::vector<bool>& a, const std::vector<bool>& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    std::vector<bool> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] || b[i];
    return out;
}

inline void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw numerical_error("grid mismatch");
}

/// Physical constants η = ħ/√(2m) and Λ = e²/4πε₀.
struct PhysicalParams {
    double eta = 1.0;
    double lambda_coulomb = 1.0;

    PhysicalParams() = default;
    PhysicalParams(double eta_, double lambda_) : eta(eta_), lambda_coulomb(lambda_) {
        if (!(eta > 0.0) || !(lambda_coulomb > 0.0))
            throw numerical_error("physical constants must be strictly positive");
    }

    /// Electron in SI units (J, m).
    static PhysicalParams electron_si() {
        constexpr double hbar = 1.054571817e-34;
        constexpr double m_e = 9.1093837015e-31;
        constexpr double e = 1.602176634e-19;
        constexpr double eps0 = 8.8541878128e-12;
        return PhysicalParams(hbar / std::sqrt(2.0 * m_e),
                              e * e / (4.0 * std::numbers::pi * eps0));
    }
};

inline constexpr double electron_volt = 1.602176634e-19;

// ---------------------------------------------------------------------------
// Quadrature

/// Trapezoid rule Σ h (f_i + f_{i+1}) / 2. Exact for piecewise-linear data.
inline double trapezoid_integral(const SampledFunction& f) {
    if (f.has_mask()) throw numerical_error("integrand has singular points");
    const auto& v = f.values();
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) interior += v[i];
    return f.grid().spacing() * (interior + 0.5 * (v.front() + v.back()));
}

inline double trapezoid_integral(const ComplexSampledFunction&) {
    throw numerical_error("complex integrand");
}

/// Running trapezoid integral from `anchor`; entry i is ∫_{x_anchor}^{x_i} f.
inline std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double h,
                                                std::size_t anchor = 0) {
    const std::size_t n = f.size();
    if (anchor >= n) throw numerical_error("anchor index out of range");
    std::vector<double> out(n, 0.0);
    for (std::size_t i = anchor + 1; i < n; ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    for (std::size_t i = anchor; i-- > 0;) out[i] = out[i + 1] - 0.5 * h * (f[i] + f[i + 1]);
    return out;
}

// ---------------------------------------------------------------------------
// Finite differences

/// Central difference in the interior, first-order one-sided at the ends.
/// A point whose stencil touches a masked sample is masked in the output.
template <typename T>
BasicSampledFunction<T> central_difference(const BasicSampledFunction<T>& f) {
    const std::size_t n = f.size();
    if (n < 3) throw numerical_error("grid too small");
    const double h = f.grid().spacing();
    const auto& v = f.values();
    std::vector<T> d(n);
    std::vector<bool> mask;
    if (f.has_mask()) mask.assign(n, false);

    auto touches = [&](std::size_t a, std::size_t b) { return f.masked(a) || f.masked(b); };

    d[0] = (v[1] - v[0]) / h;
    d[n - 1] = (v[n - 1] - v[n - 2]) / h;
    if (!mask.empty()) {
        mask[0] = touches(0, 1);
        mask[n - 1] = touches(n - 2, n - 1);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
        if (!mask.empty()) mask[i] = touches(i - 1, i + 1) || f.masked(i);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!mask.empty() && mask[i]) d[i] = T(std::numeric_limits<double>::quiet_NaN());
    return BasicSampledFunction<T>(f.grid(), std::move(d), std::move(mask));
}

// ---------------------------------------------------------------------------
// Special functions

/// Physicist's Hermite polynomial H_n(z) by the three-term recurrence.
inline double hermite_polynomial(unsigned n, double z) {
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 2.0 * z;
    for (unsigned k = 1; k < n; ++k) {
        const double next = 2.0 * z * cur - 2.0 * static_cast<double>(k) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Divide by sqrt(∫|f|²) so the result has unit L² norm on the grid.
template <typename T>
BasicSampledFunction<T> l2_normalize(const BasicSampledFunction<T>& f) {
    std::vector<double> density(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        density[i] = f.masked(i) ? 0.0 : std::norm(f[i]);
    const double norm2 = trapezoid_integral(SampledFunction(f.grid(), std::move(density)));
    if (!(norm2 > 0.0)) throw numerical_error("cannot normalize zero");
    if (!std::isfinite(norm2)) throw numerical_error("norm is not finite");
    return f.scaled(T(1.0 / std::sqrt(norm2)));
}

/// ∫ f g on the grid (real inner product).
inline double inner_product(const SampledFunction& f, const SampledFunction& g) {
    require_same_grid(f.grid(), g.grid());
    std::vector<double> p(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) p[i] = f[i] * g[i];
    return trapezoid_integral(SampledFunction(f.grid(), std::move(p)));
}

/// Number of sign changes, ignoring samples with |f| below `floor`.
inline std::size_t count_sign_changes(const SampledFunction& f, double floor = 0.0) {
    std::size_t changes = 0;
    int last = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.masked(i) || std::abs(f[i]) <= floor) continue;
        const int s = f[i] > 0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

// ---------------------------------------------------------------------------
// CSV

namespace detail {
inline void write_number(std::ostream& os, double v) {
    if (std::isnan(v)) {
        os << "nan";
        return;
    }
    if (std::isinf(v)) {
        os << (v > 0 ? "inf" : "-inf");
        return;
    }
    std::ostringstream ss;
    ss.imbue(std::locale::classic());
    ss << std::setprecision(17) << v;
    os << ss.str();
}
}  // namespace detail

/// Header `x,value` (or `x,re,im`), one row per grid point, 17 significant digits.
template <typename T>
void write_csv(std::ostream& os, const BasicSampledFunction<T>& f) {
    if constexpr (detail::is_complex<T>::value)
        os << "x,re,im\n";
    else
        os << "x,value\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        detail::write_number(os, f.x(i));
        os << ',';
        if constexpr (detail::is_complex<T>::value) {
            detail::write_number(os, f[i].real());
            os << ',';
            detail::write_number(os, f[i].imag());
        } else {
            detail::write_number(os, f[i]);
        }
        os << '\n';
    }
}

/// Reads the `x,value` format back. The grid is rebuilt from the first and last
/// abscissae; interior abscissae must agree with it to 1e-9 of the spacing.
inline SampledFunction read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw numerical_error("empty CSV");
    if (line.rfind("x,value", 0) != 0) throw numerical_error("expected header x,value");
    std::vector<double> xs, vs;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw numerical_error("malformed CSV row: " + line);
        try {
            xs.push_back(std::stod(line.substr(0, comma)));
            vs.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw numerical_error("malformed CSV row: " + line);
        }
    }
    if (xs.size() < 3) throw numerical_error("grid too small");
    Grid g(xs.front(), xs.back(), xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (std::abs(xs[i] - g[i]) > 1e-9 * g.spacing() + 1e-12 * std::abs(g[i]))
            throw numerical_error("CSV abscissae are not uniformly spaced");
    return SampledFunction(g, std::move(vs));
}

}  // namespace susyqm
