#pragma once

#include "specreg/experiment.hpp"
#include "specreg/self_similarity.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace specreg {

inline constexpr const char* kConfigSchema = "specreg-config/1";

enum class RuleMode { Statistical, Deterministic };

enum class NoiseKind { Gaussian, Power, Explicit };

struct NoiseConfig {
    NoiseKind kind = NoiseKind::Gaussian;
    std::optional<std::uint64_t> seed;  // gaussian; falls back to the top-level seed
    std::vector<double> mu{0.0};        // power; several values run as a battery
    std::optional<std::vector<double>> direction;  // power; absent means worst-case mode
    std::vector<double> zeta;           // explicit
};

/// Grids for the filter-axiom sweep: t_points log points in [t_min, t_max] and
/// alpha_k = alpha0 q^k, k = 0..depth. t_max defaults to 1.
struct AxiomSettings {
    double t_min = 1e-8;
    std::optional<double> t_max;
    int t_points = 60;
    double alpha0 = 1.0;
    double q = 0.5;
    int depth = 40;
};

enum class KnForm { Filter, Projector };

/// Everything a config file can say. Sections a subcommand does not need are ignored
/// by it but still validated when present.
struct AppConfig {
    ExperimentConfig experiment;
    RuleMode mode = RuleMode::Statistical;
    NoiseConfig noise;
    std::optional<double> delta;
    std::optional<KnConfig> kn;  // also copied to experiment.kn_gate when kn.gate is true
    KnForm kn_form = KnForm::Filter;
    double rate_tolerance = 0.2;
    AxiomSettings axioms;
    bool scheme_given = false;
    bool ladder_given = false;  // an explicit empty ladder is valid and yields no rows
    std::string echo;  // compact JSON of the input, for report metadata
};

/// Parses config text. Unknown keys, wrong types, and out-of-range values throw
/// ConfigError naming the offending field.
AppConfig parse_config(const std::string& text);

/// Reads and parses a file; a missing or unreadable file throws ConfigError naming the path.
AppConfig load_config(const std::filesystem::path& path);

}  // namespace specreg
