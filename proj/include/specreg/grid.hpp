#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace specreg {

/// Geometric parameter family alpha_k = alpha0 q^k, k = 0..k_max.
struct Grid {
    double alpha0 = 1.0;
    double q = 0.5;
    int k_max = 60;

    Grid() = default;
    Grid(double a0, double q_, int kmax) : alpha0(a0), q(q_), k_max(kmax) { validate(); }

    void validate() const {
        if (!(alpha0 > 0.0)) throw std::invalid_argument("grid: alpha0 must be positive");
        if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("grid: q must lie in (0, 1)");
        if (k_max < 1) throw std::invalid_argument("grid: k_max must be >= 1");
    }

    [[nodiscard]] double value(int k) const { return alpha0 * std::pow(q, k); }
    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(k_max) + 1; }

    [[nodiscard]] std::vector<double> values() const {
        std::vector<double> v(size());
        for (int k = 0; k <= k_max; ++k) v[static_cast<std::size_t>(k)] = value(k);
        return v;
    }

    /// Index of a grid value (relative match 1e-12), or -1.
    [[nodiscard]] int index_of(double alpha) const {
        if (!(alpha > 0.0)) return -1;
        const int k = static_cast<int>(std::lround(std::log(alpha / alpha0) / std::log(q)));
        if (k < 0 || k > k_max) return -1;
        return std::abs(value(k) - alpha) <= 1e-12 * alpha ? k : -1;
    }
};

/// Geometric grid from hi down to lo (inclusive of both ends up to rounding) with the given ratio.
inline std::vector<double> geometric_points(double hi, double lo, double ratio) {
    if (!(hi >= lo && lo > 0.0 && ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("geometric_points: need hi >= lo > 0 and ratio in (0,1)");
    std::vector<double> v;
    for (int k = 0;; ++k) {
        const double a = hi * std::pow(ratio, k);
        if (a < lo * (1.0 - 1e-12)) break;
        v.push_back(a);
    }
    return v;
}

/// n log-spaced points in [lo, hi], ascending.
inline std::vector<double> log_space(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
}

}  // namespace specreg
