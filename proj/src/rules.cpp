#include "specreg/rules.hpp"

#include "specreg/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace specreg {

void RuleConfig::validate() const {
    if (!(tau > 1.0)) throw ConfigError("rule: tau must exceed 1");
    if (!(eta > 0.0)) throw ConfigError("rule: eta must be positive");
    if (kappa && !(*kappa >= 0.0)) throw ConfigError("rule: kappa must be non-negative");
}

std::string to_string(StopKind kind) {
    switch (kind) {
        case StopKind::Regular: return "regular";
        case StopKind::Emergency: return "emergency";
        case StopKind::Exhausted: return "exhausted";
    }
    return "unknown";
}

double kappa_auto(double delta, double n_alpha0) {
    if (!(delta > 0.0)) throw std::domain_error("kappa_auto: delta must be positive");
    if (!(n_alpha0 > 0.0)) throw std::domain_error("kappa_auto: N(alpha0) must be positive");
    return std::sqrt(8.0 * std::abs(std::log(1.0 / delta)) / n_alpha0);
}

double resolve_kappa(const RuleConfig& config, double delta, const Spectrum& spectrum, const Grid& grid) {
    if (config.kappa) return *config.kappa;
    return kappa_auto(delta, effective_dimension(spectrum, grid.alpha0));
}

double weighted_misfit(const ProblemInstance& instance, const Scheme& scheme, double alpha,
                       const SpectralVector& z_delta) {
    if (!(alpha > 0.0)) throw std::domain_error("weighted_misfit: alpha must be positive");
    const auto& sp = instance.spectrum;
    require_paired(sp, z_delta, "z_delta");
    double s = 0.0;
    for (std::size_t j = 0; j < sp.size(); ++j) {
        const double t = sp[j];
        const double e = alpha / (t + alpha) * residual_r(scheme, alpha, t) * (t * instance.x0[j] - z_delta[j]);
        s += e * e;
    }
    return std::sqrt(s);
}

double weighted_misfit_via_reconstruction(const ProblemInstance& instance, const Scheme& scheme, double alpha,
                                          const SpectralVector& z_delta) {
    const auto x = reconstruct(instance, scheme, alpha, z_delta);
    const auto& sp = instance.spectrum;
    double s = 0.0;
    for (std::size_t j = 0; j < sp.size(); ++j) {
        const double e = alpha / (sp[j] + alpha) * (sp[j] * x[j] - z_delta[j]);
        s += e * e;
    }
    return std::sqrt(s);
}

double alpha_hat_statistical(const Spectrum& spectrum, const Grid& grid, double eta, double kappa, double delta) {
    const double target = eta * (1.0 + kappa) * delta;
    for (int k = 0; k <= grid.k_max; ++k) {
        const double a = grid.value(k);
        if (theta_rho_n(spectrum, a) <= target) return a;
    }
    throw ExhaustionError("alpha_hat: Theta(alpha) <= eta (1 + kappa) delta not reached within k_max = " +
                          std::to_string(grid.k_max) + "; increase k_max");
}

double alpha_hat_deterministic(const Grid& grid, const DeltaBound& bound, const Spectrum& spectrum, double eta) {
    for (int k = 0; k <= grid.k_max; ++k) {
        const double a = grid.value(k);
        if (a <= eta * delta_bound_eval(bound, spectrum, a)) return a;
    }
    throw ExhaustionError("alpha_hat: alpha <= eta delta(alpha) not reached within k_max = " +
                          std::to_string(grid.k_max) + "; increase k_max");
}

SelectionResult select_statistical_rg(const ProblemInstance& instance, const Scheme& scheme, const Grid& grid,
                                      const RuleConfig& config, const SpectralVector& z_delta) {
    config.validate();
    const auto& sp = instance.spectrum;
    const double kappa = resolve_kappa(config, instance.delta, sp, grid);
    const double one_k_delta = (1.0 + kappa) * instance.delta;

    SelectionResult res;
    for (int k = 0; k <= grid.k_max; ++k) {
        const double a = grid.value(k);
        const double n_a = effective_dimension(sp, a);
        const double inv_rho = std::sqrt(a * n_a);
        const double theta = std::sqrt(a / n_a);
        TraceEntry e{a, weighted_misfit(instance, scheme, a, z_delta), config.tau * one_k_delta * inv_rho, theta,
                     config.eta * one_k_delta};
        res.trace.push_back(e);
        const bool regular = e.misfit <= e.regular_threshold;
        const bool emergency = e.emergency_lhs <= e.emergency_rhs;
        if (regular || emergency) {
            res.alpha_selected = a;
            res.index = k;
            res.stop_kind = regular ? StopKind::Regular : StopKind::Emergency;
            res.steps = static_cast<int>(res.trace.size());
            return res;
        }
    }
    res.alpha_selected = grid.value(grid.k_max);
    res.index = grid.k_max;
    res.stop_kind = StopKind::Exhausted;
    res.steps = static_cast<int>(res.trace.size());
    return res;
}

SelectionResult select_deterministic_rg(const ProblemInstance& instance, const Scheme& scheme, const Grid& grid,
                                        double tau, const DeltaBound& bound, double alpha_hat,
                                        const SpectralVector& z_delta) {
    if (!(tau > 1.0)) throw ConfigError("rule: tau must exceed 1");
    const int hat_k = grid.index_of(alpha_hat);
    if (hat_k < 0) throw std::invalid_argument("select_deterministic_rg: alpha_hat is not a grid value");
    const auto& sp = instance.spectrum;

    SelectionResult res;
    for (int k = 0; k <= hat_k; ++k) {
        const double a = grid.value(k);
        const double d = delta_bound_eval(bound, sp, a);
        TraceEntry e{a, weighted_misfit(instance, scheme, a, z_delta), tau * d, a, alpha_hat};
        res.trace.push_back(e);
        if (e.misfit <= e.regular_threshold) {
            res.alpha_selected = a;
            res.index = k;
            res.stop_kind = StopKind::Regular;
            res.steps = static_cast<int>(res.trace.size());
            return res;
        }
    }
    res.alpha_selected = grid.value(hat_k);
    res.index = hat_k;
    res.stop_kind = StopKind::Emergency;
    res.steps = static_cast<int>(res.trace.size());
    return res;
}

std::vector<double> refined_grid(const Grid& grid, double alpha_hat) {
    const double lo = alpha_hat * grid.q * grid.q;
    return geometric_points(grid.alpha0, lo, std::pow(grid.q, 0.25));
}

OracleChoice oracle_alpha(const ProblemInstance& instance, const Scheme& scheme, std::span<const double> grid_refined,
                          const SpectralVector* z_delta) {
    const SpectralVector z = z_delta ? *z_delta : instance.exact_data();
    OracleChoice best{0.0, std::numeric_limits<double>::infinity()};
    for (double a : grid_refined) {
        const double err = (instance.x_dag - reconstruct(instance, scheme, a, z)).norm();
        if (err < best.value || (err == best.value && a > best.alpha)) best = {a, err};
    }
    return best;
}

double effective_noise_level(double delta) {
    return delta * (1.0 + std::sqrt(std::abs(std::log(1.0 / delta))));
}

double oracle_rhs_statistical(const ProblemInstance& instance, const Scheme& scheme, double alpha) {
    return bias_norm(instance, scheme, alpha) +
           effective_noise_level(instance.delta) / theta_rho_n(instance.spectrum, alpha);
}

double oracle_rhs_deterministic(const ProblemInstance& instance, const Scheme& scheme, const DeltaBound& bound,
                                double alpha) {
    return bias_norm(instance, scheme, alpha) + delta_bound_eval(bound, instance.spectrum, alpha) / alpha;
}

}  // namespace specreg
