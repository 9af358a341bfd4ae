#include "specreg/schemes.hpp"

#include "specreg/errors.hpp"

#include <algorithm>
#include <cmath>

namespace specreg {

namespace {

void check_args(const Scheme& scheme, double alpha, double t) {
    if (!(alpha > 0.0)) throw std::domain_error("filter: alpha must be positive");
    if (!(t >= 0.0)) throw std::domain_error("filter: t must be non-negative");
    if (scheme.kind == SchemeKind::Landweber) {
        if (t > 1.0) throw std::domain_error("landweber: requires t <= 1 (scale the operator so ||A|| <= 1)");
        if (alpha > 1.0) throw std::domain_error("landweber: requires alpha <= 1 so that floor(1/alpha) >= 1");
    }
}

}  // namespace

Scheme Scheme::iterated_tikhonov(int n) {
    if (n < 1) throw ConfigError("iterated-tikhonov: n must be >= 1");
    return {SchemeKind::IteratedTikhonov, n};
}

Scheme Scheme::from_name(std::string_view name, int n) {
    if (name == "tikhonov") return tikhonov();
    if (name == "iterated-tikhonov") return iterated_tikhonov(n);
    if (name == "tsvd") return tsvd();
    if (name == "landweber") return landweber();
    if (name == "showalter") return showalter();
    throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::string Scheme::name() const {
    switch (kind) {
        case SchemeKind::Tikhonov: return "tikhonov";
        case SchemeKind::IteratedTikhonov: return "iterated-tikhonov";
        case SchemeKind::Tsvd: return "tsvd";
        case SchemeKind::Landweber: return "landweber";
        case SchemeKind::Showalter: return "showalter";
    }
    return "unknown";
}

double Scheme::gamma_star() const {
    return kind == SchemeKind::IteratedTikhonov ? static_cast<double>(n) : 1.0;
}

double landweber_steps(double alpha) { return std::floor(1.0 / alpha); }

double residual_r(const Scheme& scheme, double alpha, double t) {
    check_args(scheme, alpha, t);
    switch (scheme.kind) {
        case SchemeKind::Tikhonov: return alpha / (t + alpha);
        case SchemeKind::IteratedTikhonov: return std::pow(alpha / (t + alpha), scheme.n);
        case SchemeKind::Tsvd: return t >= alpha ? 0.0 : 1.0;
        case SchemeKind::Landweber: {
            if (t == 1.0) return 0.0;
            return std::exp(landweber_steps(alpha) * std::log1p(-t));
        }
        case SchemeKind::Showalter: return std::exp(-t / alpha);
    }
    return 1.0;
}

double filter_g(const Scheme& scheme, double alpha, double t) {
    check_args(scheme, alpha, t);
    switch (scheme.kind) {
        case SchemeKind::Tikhonov: return 1.0 / (t + alpha);
        case SchemeKind::IteratedTikhonov: {
            // (1 - s^n) / t = sum_{k<n} s^k / (t + alpha), s = alpha / (t + alpha)
            const double s = alpha / (t + alpha);
            double sum = 0.0;
            double pk = 1.0;
            for (int k = 0; k < scheme.n; ++k) {
                sum += pk;
                pk *= s;
            }
            return sum / (t + alpha);
        }
        case SchemeKind::Tsvd: return t >= alpha ? 1.0 / t : 0.0;
        case SchemeKind::Landweber: {
            const double m = landweber_steps(alpha);
            if (t == 0.0) return m;
            if (t == 1.0) return 1.0;
            return -std::expm1(m * std::log1p(-t)) / t;
        }
        case SchemeKind::Showalter: {
            if (t == 0.0) return 1.0 / alpha;
            return -std::expm1(-t / alpha) / t;
        }
    }
    return 0.0;
}

AxiomReport verify_axioms(const Scheme& scheme, std::span<const double> t_grid,
                          std::span<const double> alpha_grid, FilterPair filters) {
    AxiomReport rep;
    const double gstar = scheme.gamma_star();

    auto note = [&rep](double violation, double t, double a, double b) {
        if (violation > rep.worst_violation) {
            rep.worst_violation = violation;
            rep.witness = AxiomWitness{t, a, b};
        }
    };

    for (double t : t_grid) {
        for (double a : alpha_grid) {
            const double r = filters.r(scheme, a, t);
            const double g = filters.g(scheme, a, t);
            rep.gamma1 = std::max(rep.gamma1, std::abs(r));
            rep.gamma_star = std::max(rep.gamma_star, a * std::abs(g));

            const double range_v = std::max(-r, r - 1.0);
            if (range_v > kAxiomTolerance) rep.range_ok = false;
            note(range_v, t, a, a);

            const double gs_v = a * std::abs(g) - gstar;
            if (gs_v > kAxiomTolerance) rep.gamma_star_ok = false;
            note(gs_v, t, a, a);

            const double id_v = std::abs(r + t * g - 1.0);
            if (id_v > kAxiomTolerance) rep.identity_ok = false;
            note(id_v, t, a, a);

            for (double b : alpha_grid) {
                if (!(a <= b)) continue;
                const double rb = filters.r(scheme, b, t);
                const double diff = rb - r;
                const double mono_v = -diff;
                if (mono_v > kAxiomTolerance) rep.monotone_ok = false;
                note(mono_v, t, a, b);

                const double bound = (1.0 + gstar) * t / (a + t) * rb;
                const double inc_v = diff - bound;
                if (inc_v > kAxiomTolerance) rep.increment_ok = false;
                note(inc_v, t, a, b);
            }
        }
    }
    return rep;
}

double qualification_constant(const Scheme& scheme, double nu, std::span<const double> t_grid,
                              std::span<const double> alpha_grid) {
    double sup = 0.0;
    for (double t : t_grid)
        for (double a : alpha_grid)
            sup = std::max(sup, residual_r(scheme, a, t) * std::pow(t / a, nu));
    return sup;
}

}  // namespace specreg
