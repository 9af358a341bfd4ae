#include "specreg/experiment.hpp"

#include "specreg/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace specreg {

Spectrum build_spectrum(const SpectrumRecipe& recipe) {
    if (const auto* p = std::get_if<PowerSpectrumRecipe>(&recipe)) return Spectrum::power(p->a, p->J);
    return Spectrum(std::get<ExplicitSpectrumRecipe>(recipe).eigenvalues);
}

SpectralVector build_vector(const VectorRecipe& recipe, const Spectrum& spectrum) {
    const std::size_t J = spectrum.size();
    return std::visit(
        [&](const auto& r) -> SpectralVector {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, ZeroVector>) {
                return SpectralVector::zeros(J);
            } else if constexpr (std::is_same_v<T, PowerVector>) {
                std::vector<double> x(J);
                for (std::size_t j = 0; j < J; ++j) x[j] = r.scale * std::pow(static_cast<double>(j + 1), -r.exponent);
                return SpectralVector(std::move(x));
            } else if constexpr (std::is_same_v<T, SourceVector>) {
                std::vector<double> w(J);
                double nrm = 0.0;
                for (std::size_t j = 0; j < J; ++j) {
                    w[j] = std::pow(static_cast<double>(j + 1), -0.5 - r.epsilon);
                    nrm += w[j] * w[j];
                }
                nrm = std::sqrt(nrm);
                for (std::size_t j = 0; j < J; ++j) w[j] = std::pow(spectrum[j], r.nu) * (r.radius * w[j] / nrm);
                return SpectralVector(std::move(w));
            } else {
                SpectralVector v(r.values);
                require_paired(spectrum, v, "explicit vector");
                return v;
            }
        },
        recipe);
}

Grid GridSpec::resolve(const Spectrum& spectrum) const {
    try {
        return Grid(alpha0.value_or(spectrum.norm()), q, k_max);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void ExperimentConfig::validate() const {
    rule.validate();
    if (replicates < 2) throw ConfigError("replicates must be >= 2");
    for (std::size_t i = 0; i < delta_ladder.size(); ++i) {
        if (!(delta_ladder[i] > 0.0)) throw ConfigError("delta_ladder: entries must be positive");
        if (i > 0 && !(delta_ladder[i] < delta_ladder[i - 1]))
            throw ConfigError("delta_ladder: must be strictly decreasing");
    }
    if (!(grid.q > 0.0 && grid.q < 1.0)) throw ConfigError("rule.q must lie in (0, 1)");
    if (grid.k_max < 1) throw ConfigError("rule.k_max must be >= 1");
    if (grid.alpha0 && !(*grid.alpha0 > 0.0)) throw ConfigError("rule.alpha0 must be positive");
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SPECREG_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

}  // namespace specreg
