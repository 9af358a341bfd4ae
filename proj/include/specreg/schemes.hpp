#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace specreg {

enum class SchemeKind { Tikhonov, IteratedTikhonov, Tsvd, Landweber, Showalter };

/// A linear regularization filter family (g_alpha, r_alpha).
///
/// All five families are monotone (r_alpha(t) non-decreasing in alpha) and
/// take values in [0, 1]. Landweber assumes the spectrum is scaled so that
/// t <= 1 and uses m = floor(1/alpha) iterations.
struct Scheme {
    SchemeKind kind = SchemeKind::Tikhonov;
    int n = 1;  // iteration count, IteratedTikhonov only

    static Scheme tikhonov() { return {SchemeKind::Tikhonov, 1}; }
    static Scheme iterated_tikhonov(int n);
    static Scheme tsvd() { return {SchemeKind::Tsvd, 1}; }
    static Scheme landweber() { return {SchemeKind::Landweber, 1}; }
    static Scheme showalter() { return {SchemeKind::Showalter, 1}; }

    /// Parses the config name ("tikhonov", "iterated-tikhonov", "tsvd",
    /// "landweber", "showalter"). Throws ConfigError on unknown names.
    static Scheme from_name(std::string_view name, int n = 1);

    [[nodiscard]] std::string name() const;

    /// Analytic bound gamma_* on alpha * g_alpha(t): n for iterated Tikhonov, 1 otherwise.
    [[nodiscard]] double gamma_star() const;

    friend bool operator==(const Scheme&, const Scheme&) = default;
};

/// Residual function r_alpha(t) = 1 - t g_alpha(t).
/// Throws std::domain_error for alpha <= 0, t < 0, or Landweber with t > 1.
double residual_r(const Scheme& scheme, double alpha, double t);

/// Filter g_alpha(t). At t = 0 the analytic limit is returned.
double filter_g(const Scheme& scheme, double alpha, double t);

/// Landweber iteration count floor(1/alpha), as a double so tiny alpha does not overflow.
double landweber_steps(double alpha);

struct AxiomWitness {
    double t;
    double alpha;
    double beta;
};

struct AxiomReport {
    double gamma1 = 0.0;       // sup |r_alpha(t)| over the grid
    double gamma_star = 0.0;   // sup alpha * g_alpha(t) over the grid
    bool monotone_ok = true;
    bool range_ok = true;
    bool increment_ok = true;   // r_beta - r_alpha <= (1 + gamma_*) t / (alpha + t) r_beta
    bool gamma_star_ok = true;  // empirical gamma_star within the analytic bound
    bool identity_ok = true;    // r + t g == 1
    double worst_violation = 0.0;
    std::optional<AxiomWitness> witness;

    [[nodiscard]] bool pass() const {
        return monotone_ok && range_ok && increment_ok && gamma_star_ok && identity_ok;
    }
};

inline constexpr double kAxiomTolerance = 1e-12;

/// Residual/filter pair used by verify_axioms. Overridable so that tests can
/// plant corrupted filters.
struct FilterPair {
    double (*r)(const Scheme&, double, double) = residual_r;
    double (*g)(const Scheme&, double, double) = filter_g;
};

/// Checks the filter axioms on every (t, alpha) and (t, alpha <= beta) grid
/// combination: range 0 <= r <= 1, monotonicity in alpha, alpha g <= gamma_*,
/// the identity r + t g = 1, and
///   0 <= r_beta - r_alpha <= (1 + gamma_*) t / (alpha + t) r_beta.
/// Failures are reported, never thrown.
AxiomReport verify_axioms(const Scheme& scheme, std::span<const double> t_grid,
                          std::span<const double> alpha_grid, FilterPair filters = {});

/// sup over the grids of r_alpha(t) t^nu / alpha^nu.
double qualification_constant(const Scheme& scheme, double nu, std::span<const double> t_grid,
                              std::span<const double> alpha_grid);

}  // namespace specreg
