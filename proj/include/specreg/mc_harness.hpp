#pragma once

#include "specreg/experiment.hpp"
#include "specreg/noise.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace specreg {

// ---------------------------------------------------------------------------
// Statistical Monte Carlo
// ---------------------------------------------------------------------------

struct RmseResult {
    double delta = 0.0;
    double rmse = 0.0;
    double rmse_stderr = 0.0;
    double mean_steps = 0.0;
    double emergency_fraction = 0.0;
    int exhausted = 0;
    int z_violations = 0;         // replicates with zeta outside Z_kappa
    int pointwise_violations = 0; // zeta in Z_kappa but error > bias + c* delta(alpha)/alpha at alpha_RG
    int surrogate_violations = 0; // error > ||x_dag - x0|| + c* delta ||s^{1/2}_hat zeta|| / alpha_hat
    double kappa = 0.0;
    double alpha_hat = 0.0;
    int replicates = 0;
    std::vector<double> squared_errors;  // in replicate order
};

/// Runs R replicates at noise level delta: sample zeta, select alpha with the statistical
/// RG rule, reconstruct and accumulate ||x_dag - x_alpha||^2. Replicate r uses
/// sample_zeta(seed, r); aggregation is in replicate order so any worker count gives
/// identical results. Throws AdmissionError if a kn gate is configured and fails.
RmseResult run_rmse(const ExperimentConfig& config, double delta);

/// sqrt of the mean of squared errors with delta-method standard error.
struct RmseStats {
    double rmse;
    double stderr_;
};
RmseStats rmse_from_squared_errors(std::span<const double> squared_errors);

/// inf over the refined grid of ||x_alpha - x_dag|| + delta_eff / Theta(alpha).
double oracle_inf_statistical(const ExperimentConfig& config, double delta);

/// rmse / oracle_inf_statistical.
double oracle_ratio(const ExperimentConfig& config, double delta);

struct ReportRow {
    double delta = 0.0;
    double rmse = 0.0;
    double rmse_stderr = 0.0;
    double oracle_inf = 0.0;
    double ratio = 0.0;
    double mean_steps = 0.0;
    double emergency_fraction = 0.0;
    int z_violations = 0;
    int replicates = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct MCReport {
    std::vector<ReportRow> rows;
    std::optional<double> rate_slope;
    std::optional<double> rate_slope_theory;
    std::string config_echo;  // compact JSON of the generating config, may be empty

    friend bool operator==(const MCReport&, const MCReport&) = default;
};

/// run_rmse + oracle infimum for every ladder entry.
MCReport run_mc(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Rates
// ---------------------------------------------------------------------------

struct RateStudy {
    double rate_slope = 0.0;
    double rate_slope_theory = 0.0;
    MCReport report;
};

/// Least-squares slope of y against x.
double ls_slope(std::span<const double> x, std::span<const double> y);

/// psi(Theta_psi^{-1}(d)) with psi(t) = t^nu and Theta_psi(t) = Theta(t) psi(t).
double source_rate(const Spectrum& spectrum, double nu, double d);

/// sum_j ((x_dag - x0)_j / t_j^nu)^2; membership in the source set needs <= 1.
double source_norm_sq(const Spectrum& spectrum, const SpectralVector& v, double nu);

/// Empirical rate vs the source-condition rate over the delta ladder (abscissa delta_eff).
/// Throws ConfigError if the ladder has fewer than 3 points, no nu is configured,
/// x_dag - x0 lies outside the source set, or the scheme's empirical qualification
/// constant for t^nu exceeds kQualificationCap.
RateStudy rate_study(const ExperimentConfig& config);

inline constexpr double kQualificationCap = 10.0;

// ---------------------------------------------------------------------------
// Concentration of Z_kappa
// ---------------------------------------------------------------------------

struct ConcentrationResult {
    int violations = 0;
    double bound_value = 0.0;  // sum over grid alpha >= alpha_hat of exp(-kappa^2 N(alpha) / 2)
    double kappa = 0.0;
    double alpha_hat = 0.0;
    int grid_points = 0;
    int replicates = 0;
};

/// kappa == nullopt uses kappa_auto(delta, N(alpha0)).
ConcentrationResult concentration_study(const Spectrum& spectrum, const Grid& grid, std::optional<double> kappa,
                                        double delta, int replicates, std::uint64_t seed, double eta = 1.0,
                                        int workers = 0);

// ---------------------------------------------------------------------------
// Deterministic runs and the lemma battery
// ---------------------------------------------------------------------------

struct DeterministicCase {
    ProblemInstance instance;
    Scheme scheme;
    Grid grid;
    double tau;
    double eta;
    DeltaBound bound;
    SpectralVector zeta;
    std::optional<KnConfig> kn;
};

/// Instance with power-bounded noise along the single mode that the reconstruction
/// amplifies most at the deterministic oracle parameter, signed to add to the bias.
DeterministicCase make_worst_case(const ProblemInstance& instance, const Scheme& scheme, const Grid& grid,
                                  double tau, double eta, double mu, std::optional<KnConfig> kn);

struct DeterministicRun {
    double delta = 0.0;
    double alpha_hat = 0.0;
    SelectionResult selection;
    double error = 0.0;       // ||x_alpha*^delta - x_dag||
    double oracle_inf = 0.0;  // inf over refined grid of bias + delta(alpha)/alpha
    double ratio = 0.0;
};

DeterministicRun run_deterministic(const DeterministicCase& c);

struct LemmaOutcome {
    std::string name;
    bool pass = true;
    bool applicable = true;
    double worst_ratio = 0.0;  // max LHS / RHS
    int checks = 0;
};

struct LemmaReport {
    bool admitted = true;  // passed the self-similarity gate (or no gate configured)
    DeterministicRun run;
    std::vector<LemmaOutcome> lemmas;

    [[nodiscard]] bool all_pass() const;
    [[nodiscard]] const LemmaOutcome& get(const std::string& name) const;
};

/// Closed-form constant of the lower-tail inequality
/// ||A^{1/2} s^{1/2} r (x_dag - x0)|| <= C / sqrt(alpha) ||s r A (x_dag - x0)||.
double kn_lemma_constant(const KnConfig& kn, double alpha0);

/// Evaluates the deterministic-noise inequalities on one run:
///  "misfit-above" (alpha > alpha*), "misfit-at" (gamma_0 bound), "difference",
///  "lower-tail", "difference-kn", "no-fallback", and "pointwise".
/// Inequalities that need self-similarity are evaluated only when the case is admitted.
LemmaReport lemma_check(const DeterministicCase& c);

std::vector<LemmaReport> lemma_suite(std::span<const DeterministicCase> cases);

}  // namespace specreg
