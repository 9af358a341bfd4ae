#pragma once

#include "specreg/grid.hpp"
#include "specreg/spectrum.hpp"

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

namespace specreg {

// ---------------------------------------------------------------------------
// Noise realizations
// ---------------------------------------------------------------------------

struct GaussianNoise {
    std::uint64_t seed = 0;
};

/// Deterministic noise with ||A^(-mu) direction|| <= 1, 0 <= mu <= 1/2.
struct PowerBoundedNoise {
    double mu = 0.0;
    SpectralVector direction;
};

struct ExplicitNoise {
    SpectralVector zeta;
};

using NoiseSpec = std::variant<GaussianNoise, PowerBoundedNoise, ExplicitNoise>;

/// Per-replicate seed derivation: splitmix64 applied to the replicate index,
/// xored into the base seed and mixed once more. Replicates are therefore
/// independent of evaluation order.
std::uint64_t derive_replicate_seed(std::uint64_t seed, std::uint64_t replicate_index);

/// zeta = T* xi in the eigenbasis: independent zeta_j ~ N(0, t_j).
/// Normals come from std::normal_distribution driven by std::mt19937_64 seeded with
/// derive_replicate_seed; results are reproducible for a given standard library.
SpectralVector sample_zeta(const Spectrum& spectrum, std::uint64_t seed, std::uint64_t replicate_index);

/// Realizes a noise spec (Gaussian uses replicate_index).
SpectralVector realize_noise(const NoiseSpec& spec, const Spectrum& spectrum, std::uint64_t replicate_index = 0);

/// sum_j t_j^(-2 mu) d_j^2, the squared A^(-mu) norm.
double inverse_power_norm_sq(const Spectrum& spectrum, const SpectralVector& d, double mu);

/// Builds validated power-bounded noise. Throws std::domain_error for mu outside
/// [0, 1/2] or if the direction violates the A^(-mu) unit-ball constraint.
PowerBoundedNoise make_power_bounded(const Spectrum& spectrum, double mu, SpectralVector direction);

/// Single-mode direction sign * t_k^mu e_k, which has unit A^(-mu) norm.
SpectralVector power_bounded_mode(const Spectrum& spectrum, double mu, std::size_t k, double sign = 1.0);

/// Index k maximizing g_alpha(t_k) t_k^mu: the mode along which unit A^(-mu)
/// noise is amplified most by the reconstruction at alpha.
std::size_t worst_noise_index(const Spectrum& spectrum, const Scheme& scheme, double mu, double alpha);

/// ||s_alpha^{1/2}(A) zeta|| with s_alpha(t) = alpha / (t + alpha).
double weighted_noise_norm(const Spectrum& spectrum, const SpectralVector& zeta, double alpha);

// ---------------------------------------------------------------------------
// Noise bounding functions delta(alpha)
// ---------------------------------------------------------------------------

/// delta(alpha) = delta * alpha^mu.
struct PowerLawBound {
    double delta;
    double mu;
};

/// delta(alpha) = (1 + kappa) delta / rho_N(alpha). Grid values of 1/rho_N are
/// cached when built with a grid.
struct StatisticalWeightBound {
    double delta;
    double kappa;
    std::shared_ptr<const std::vector<double>> cached_alpha;     // descending
    std::shared_ptr<const std::vector<double>> cached_inv_rho;   // 1 / rho_N at cached_alpha
};

using DeltaBound = std::variant<PowerLawBound, StatisticalWeightBound>;

/// Throws std::domain_error unless delta > 0 and 0 <= mu <= 1/2.
DeltaBound make_power_law_bound(double delta, double mu);

/// Throws std::domain_error unless delta > 0 and kappa >= 0. Pass a grid to cache rho_N.
DeltaBound make_statistical_bound(const Spectrum& spectrum, double delta, double kappa,
                                  const Grid* grid = nullptr);

double delta_bound_eval(const DeltaBound& bound, const Spectrum& spectrum, double alpha);

struct MonotonicityCheck {
    bool ok = true;
    double worst = 0.0;  // largest relative violation
};

/// delta(alpha) non-decreasing and delta(alpha)/sqrt(alpha) non-increasing at adjacent grid points.
MonotonicityCheck check_delta_bound(const DeltaBound& bound, const Spectrum& spectrum, const Grid& grid);

// ---------------------------------------------------------------------------
// Good-noise event Z_kappa
// ---------------------------------------------------------------------------

struct ZKappaResult {
    bool inside = true;
    /// max over checked alpha of ||s_alpha^{1/2} zeta|| rho_N(alpha) - (1 + kappa)
    double margin = -1.0;
};

/// Checks ||s_alpha^{1/2} zeta|| <= (1 + kappa) / rho_N(alpha) for all grid alpha >= alpha_hat.
ZKappaResult in_z_kappa(const Spectrum& spectrum, const SpectralVector& zeta, double kappa,
                        const Grid& grid, double alpha_hat);

}  // namespace specreg
