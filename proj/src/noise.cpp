#include "specreg/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace specreg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_replicate_seed(std::uint64_t seed, std::uint64_t replicate_index) {
    return splitmix64(seed ^ splitmix64(replicate_index));
}

SpectralVector sample_zeta(const Spectrum& spectrum, std::uint64_t seed, std::uint64_t replicate_index) {
    std::mt19937_64 eng(derive_replicate_seed(seed, replicate_index));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(spectrum.size());
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = std::sqrt(spectrum[j]) * normal(eng);
    return SpectralVector(std::move(z));
}

SpectralVector realize_noise(const NoiseSpec& spec, const Spectrum& spectrum, std::uint64_t replicate_index) {
    return std::visit(
        [&](const auto& s) -> SpectralVector {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianNoise>) {
                return sample_zeta(spectrum, s.seed, replicate_index);
            } else if constexpr (std::is_same_v<T, PowerBoundedNoise>) {
                require_paired(spectrum, s.direction, "power-bounded direction");
                return s.direction;
            } else {
                require_paired(spectrum, s.zeta, "explicit zeta");
                return s.zeta;
            }
        },
        spec);
}

double inverse_power_norm_sq(const Spectrum& spectrum, const SpectralVector& d, double mu) {
    require_paired(spectrum, d, "inverse_power_norm_sq");
    double s = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) s += std::pow(spectrum[j], -2.0 * mu) * d[j] * d[j];
    return s;
}

PowerBoundedNoise make_power_bounded(const Spectrum& spectrum, double mu, SpectralVector direction) {
    if (!(mu >= 0.0 && mu <= 0.5))
        throw std::domain_error("power-bounded noise: mu must lie in [0, 1/2]");
    if (inverse_power_norm_sq(spectrum, direction, mu) > 1.0 + 1e-12)
        throw std::domain_error("power-bounded noise: ||A^(-mu) direction|| exceeds 1");
    return {mu, std::move(direction)};
}

SpectralVector power_bounded_mode(const Spectrum& spectrum, double mu, std::size_t k, double sign) {
    if (k >= spectrum.size()) throw std::out_of_range("power_bounded_mode: index out of range");
    auto d = SpectralVector::zeros(spectrum.size());
    d[k] = (sign < 0.0 ? -1.0 : 1.0) * std::pow(spectrum[k], mu);
    return d;
}

std::size_t worst_noise_index(const Spectrum& spectrum, const Scheme& scheme, double mu, double alpha) {
    std::size_t best = 0;
    double best_v = -1.0;
    for (std::size_t j = 0; j < spectrum.size(); ++j) {
        const double v = filter_g(scheme, alpha, spectrum[j]) * std::pow(spectrum[j], mu);
        if (v > best_v) {
            best_v = v;
            best = j;
        }
    }
    return best;
}

double weighted_noise_norm(const Spectrum& spectrum, const SpectralVector& zeta, double alpha) {
    require_paired(spectrum, zeta, "weighted_noise_norm");
    if (!(alpha > 0.0)) throw std::domain_error("weighted_noise_norm: alpha must be positive");
    double s = 0.0;
    for (std::size_t j = 0; j < zeta.size(); ++j) s += alpha / (spectrum[j] + alpha) * zeta[j] * zeta[j];
    return std::sqrt(s);
}

DeltaBound make_power_law_bound(double delta, double mu) {
    if (!(delta > 0.0)) throw std::domain_error("power-law bound: delta must be positive");
    if (!(mu >= 0.0 && mu <= 0.5)) throw std::domain_error("power-law bound: mu must lie in [0, 1/2]");
    return PowerLawBound{delta, mu};
}

DeltaBound make_statistical_bound(const Spectrum& spectrum, double delta, double kappa, const Grid* grid) {
    if (!(delta > 0.0)) throw std::domain_error("statistical bound: delta must be positive");
    if (!(kappa >= 0.0)) throw std::domain_error("statistical bound: kappa must be non-negative");
    StatisticalWeightBound b{delta, kappa, nullptr, nullptr};
    if (grid != nullptr) {
        auto alphas = std::make_shared<std::vector<double>>(grid->values());
        auto inv = std::make_shared<std::vector<double>>(alphas->size());
        for (std::size_t k = 0; k < alphas->size(); ++k) (*inv)[k] = 1.0 / rho_n(spectrum, (*alphas)[k]);
        b.cached_alpha = std::move(alphas);
        b.cached_inv_rho = std::move(inv);
    }
    return b;
}

double delta_bound_eval(const DeltaBound& bound, const Spectrum& spectrum, double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("delta bound: alpha must be positive");
    if (const auto* p = std::get_if<PowerLawBound>(&bound)) {
        if (!(p->mu >= 0.0 && p->mu <= 0.5)) throw std::domain_error("power-law bound: mu must lie in [0, 1/2]");
        return p->delta * std::pow(alpha, p->mu);
    }
    const auto& s = std::get<StatisticalWeightBound>(bound);
    double inv_rho = -1.0;
    if (s.cached_alpha) {
        const auto& a = *s.cached_alpha;
        // descending order
        auto it = std::lower_bound(a.begin(), a.end(), alpha, std::greater<>());
        if (it != a.end() && *it == alpha) inv_rho = (*s.cached_inv_rho)[static_cast<std::size_t>(it - a.begin())];
    }
    if (inv_rho < 0.0) inv_rho = 1.0 / rho_n(spectrum, alpha);
    return (1.0 + s.kappa) * s.delta * inv_rho;
}

MonotonicityCheck check_delta_bound(const DeltaBound& bound, const Spectrum& spectrum, const Grid& grid) {
    MonotonicityCheck out;
    double prev_a = grid.value(0);
    double prev_d = delta_bound_eval(bound, spectrum, prev_a);
    for (int k = 1; k <= grid.k_max; ++k) {
        const double a = grid.value(k);
        const double d = delta_bound_eval(bound, spectrum, a);
        // a < prev_a: need d <= prev_d and d/sqrt(a) >= prev_d/sqrt(prev_a)
        const double v1 = (d - prev_d) / prev_d;
        const double v2 = (prev_d / std::sqrt(prev_a) - d / std::sqrt(a)) / (prev_d / std::sqrt(prev_a));
        const double v = std::max(v1, v2);
        if (v > 1e-12) out.ok = false;
        out.worst = std::max(out.worst, v);
        prev_a = a;
        prev_d = d;
    }
    return out;
}

ZKappaResult in_z_kappa(const Spectrum& spectrum, const SpectralVector& zeta, double kappa, const Grid& grid,
                        double alpha_hat) {
    require_paired(spectrum, zeta, "in_z_kappa");
    ZKappaResult out;
    out.margin = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= grid.k_max; ++k) {
        const double a = grid.value(k);
        if (a < alpha_hat * (1.0 - 1e-12)) break;
        double w2 = 0.0;
        for (std::size_t j = 0; j < zeta.size(); ++j) w2 += a / (spectrum[j] + a) * zeta[j] * zeta[j];
        const double a_n = a * effective_dimension(spectrum, a);  // 1 / rho_N^2
        const double one_k = 1.0 + kappa;
        out.margin = std::max(out.margin, std::sqrt(w2 / a_n) - one_k);
        if (w2 > one_k * one_k * a_n) out.inside = false;
    }
    return out;
}

}  // namespace specreg
