#pragma once

#include "specreg/grid.hpp"
#include "specreg/rules.hpp"
#include "specreg/schemes.hpp"
#include "specreg/self_similarity.hpp"
#include "specreg/spectrum.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace specreg {

struct PowerSpectrumRecipe {
    double a = 1.0;
    std::size_t J = 1000;
};
struct ExplicitSpectrumRecipe {
    std::vector<double> eigenvalues;
};
using SpectrumRecipe = std::variant<PowerSpectrumRecipe, ExplicitSpectrumRecipe>;

Spectrum build_spectrum(const SpectrumRecipe& recipe);

struct ZeroVector {};
/// x_j = scale * j^(-exponent)
struct PowerVector {
    double exponent = 1.5;
    double scale = 1.0;
};
/// x_j = t_j^nu w_j with w_j proportional to j^(-1/2 - epsilon) and ||w|| = radius.
/// Lies in the source set of psi(t) = t^nu with radius `radius`.
struct SourceVector {
    double nu = 0.5;
    double epsilon = 0.05;
    double radius = 1.0;
};
struct ExplicitVector {
    std::vector<double> values;
};
using VectorRecipe = std::variant<ZeroVector, PowerVector, SourceVector, ExplicitVector>;

SpectralVector build_vector(const VectorRecipe& recipe, const Spectrum& spectrum);

struct InstanceRecipe {
    SpectrumRecipe spectrum = PowerSpectrumRecipe{};
    VectorRecipe x_dag = PowerVector{};
    VectorRecipe x0 = ZeroVector{};
};

/// Grid settings as written in configs; alpha0 == nullopt means ||A|| = t_1.
struct GridSpec {
    double q = 0.7;
    std::optional<double> alpha0;
    int k_max = 200;

    [[nodiscard]] Grid resolve(const Spectrum& spectrum) const;
};

struct ExperimentConfig {
    InstanceRecipe instance;
    Scheme scheme = Scheme::tikhonov();
    RuleConfig rule;
    GridSpec grid;
    std::vector<double> delta_ladder;
    int replicates = 200;
    std::uint64_t seed = 20240601;
    std::optional<double> source_nu;
    std::optional<KnConfig> kn_gate;
    int workers = 0;  // 0: SPECREG_WORKERS or hardware concurrency

    /// Throws ConfigError (R >= 2, ladder strictly decreasing and positive, rule constants).
    void validate() const;
};

/// Worker count: explicit value, else SPECREG_WORKERS, else hardware concurrency.
int resolve_workers(int requested);

}  // namespace specreg
