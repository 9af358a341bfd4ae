#pragma once

#include "specreg/grid.hpp"
#include "specreg/noise.hpp"
#include "specreg/spectrum.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace specreg {

/// Constants of the Raus-Gfrerer rule. kappa == nullopt means "auto".
struct RuleConfig {
    double tau = 1.2;
    double eta = 1.0;
    std::optional<double> kappa;

    void validate() const;
};

enum class StopKind { Regular, Emergency, Exhausted };

std::string to_string(StopKind kind);

/// One scanned grid point. For the deterministic rule the emergency pair is
/// (alpha, alpha_hat).
struct TraceEntry {
    double alpha;
    double misfit;
    double regular_threshold;
    double emergency_lhs;
    double emergency_rhs;
};

struct SelectionResult {
    double alpha_selected = 0.0;
    StopKind stop_kind = StopKind::Exhausted;
    int steps = 0;
    int index = -1;  // grid index of alpha_selected
    std::vector<TraceEntry> trace;
};

/// kappa = sqrt(8 |log(1/delta)| / N(alpha0)).
double kappa_auto(double delta, double n_alpha0);

/// Resolves config.kappa, computing the automatic value from N(grid.alpha0) if needed.
double resolve_kappa(const RuleConfig& config, double delta, const Spectrum& spectrum, const Grid& grid);

/// ||s_alpha(A) r_alpha(A)(A x0 - z_delta)||.
double weighted_misfit(const ProblemInstance& instance, const Scheme& scheme, double alpha,
                       const SpectralVector& z_delta);

/// Same quantity evaluated as ||s_alpha(A)(A x_alpha^delta - z_delta)|| through reconstruct().
double weighted_misfit_via_reconstruction(const ProblemInstance& instance, const Scheme& scheme, double alpha,
                                          const SpectralVector& z_delta);

/// Largest grid alpha with Theta(alpha) <= eta (1 + kappa) delta. Throws ExhaustionError.
double alpha_hat_statistical(const Spectrum& spectrum, const Grid& grid, double eta, double kappa, double delta);

/// Largest grid alpha with alpha <= eta delta(alpha). Throws ExhaustionError.
double alpha_hat_deterministic(const Grid& grid, const DeltaBound& bound, const Spectrum& spectrum, double eta);

/// Statistical RG rule: first grid alpha (scanning k = 0, 1, ...) with
///   misfit <= tau (1 + kappa) delta / rho_N(alpha)     (regular stop), or
///   Theta(alpha) <= eta (1 + kappa) delta               (emergency stop).
/// Regular wins ties. Returns an Exhausted result if k_max is reached first.
SelectionResult select_statistical_rg(const ProblemInstance& instance, const Scheme& scheme, const Grid& grid,
                                      const RuleConfig& config, const SpectralVector& z_delta);

/// Deterministic RG rule: largest grid alpha >= alpha_hat with misfit <= tau delta(alpha),
/// falling back to alpha_hat (Emergency).
SelectionResult select_deterministic_rg(const ProblemInstance& instance, const Scheme& scheme, const Grid& grid,
                                        double tau, const DeltaBound& bound, double alpha_hat,
                                        const SpectralVector& z_delta);

/// Refined grid for oracle infima: ratio q^{1/4} from alpha0 down to alpha_hat q^2.
std::vector<double> refined_grid(const Grid& grid, double alpha_hat);

struct OracleChoice {
    double alpha;
    double value;
};

/// argmin over the grid of ||x_dag - x_alpha^delta|| (noise-free x_alpha when z_delta is null).
/// Ties go to the largest alpha.
OracleChoice oracle_alpha(const ProblemInstance& instance, const Scheme& scheme, std::span<const double> grid_refined,
                          const SpectralVector* z_delta);

/// ||x_alpha - x_dag|| + delta (1 + sqrt|log(1/delta)|) / Theta(alpha).
double oracle_rhs_statistical(const ProblemInstance& instance, const Scheme& scheme, double alpha);

/// ||x_alpha - x_dag|| + delta(alpha) / alpha.
double oracle_rhs_deterministic(const ProblemInstance& instance, const Scheme& scheme, const DeltaBound& bound,
                                double alpha);

/// delta (1 + sqrt|log(1/delta)|).
double effective_noise_level(double delta);

}  // namespace specreg
