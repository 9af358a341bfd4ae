#include "specreg/self_similarity.hpp"

#include "specreg/errors.hpp"
#include "specreg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specreg {

void KnConfig::validate(const Spectrum& spectrum) const {
    if (!(c1 > 1.0)) throw ConfigError("kn: c1 must exceed 1");
    if (!(c2 > 0.0 && c2 < 1.0)) throw ConfigError("kn: c2 must lie in (0, 1)");
    if (!(t0 > 0.0 && t0 < spectrum.norm())) throw ConfigError("kn: t0 must lie in (0, t_1)");
    if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("kn: theta must lie in (0, 1)");
}

std::vector<double> default_kn_probes(const Spectrum& spectrum, double t0, double c2, int n_geometric) {
    std::vector<double> p;
    const double lo = std::min(spectrum.smallest(), t0);
    for (double a : log_space(lo, t0, static_cast<std::size_t>(n_geometric))) p.push_back(a);
    // both sides jump where alpha crosses t_j (lower integral) or t_j / c2 (tail sum)
    constexpr double eps = 1e-9;
    for (double t : spectrum.values()) {
        for (double edge : {t, t / c2}) {
            for (double a : {edge * (1.0 - eps), edge * (1.0 + eps)})
                if (a > 0.0 && a <= t0) p.push_back(a);
        }
    }
    std::sort(p.begin(), p.end(), std::greater<>());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    return p;
}

namespace {

void check_probes(const KnConfig& cfg) {
    if (cfg.alpha_probe.empty()) throw ConfigError("kn: probe list is empty");
    for (double a : cfg.alpha_probe)
        if (!(a > 0.0 && a <= cfg.t0)) throw ConfigError("kn: probe alpha outside (0, t0]");
}

double safe_ratio(double num, double den) {
    if (num == 0.0) return 0.0;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

}  // namespace

KnReport check_kn(const Spectrum& spectrum, const SpectralVector& v, const Scheme& scheme, const KnConfig& cfg) {
    require_paired(spectrum, v, "check_kn");
    cfg.validate(spectrum);
    check_probes(cfg);

    KnReport rep;
    rep.pass = true;
    const double c1sq = cfg.c1 * cfg.c1;
    for (double a : cfg.alpha_probe) {
        double lhs = 0.0, tail = 0.0;
        for (std::size_t j = 0; j < spectrum.size(); ++j) {
            const double t = spectrum[j];
            const double v2 = v[j] * v[j];
            if (t <= a) lhs += v2;
            if (t >= cfg.c2 * a) {
                const double r = residual_r(scheme, a, t);
                tail += r * r * v2;
            }
        }
        const double rhs = c1sq * tail;
        const double ratio = safe_ratio(lhs, rhs);
        rep.probes.push_back({a, lhs, rhs, ratio});
        if (!rep.witness_alpha || ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.witness_alpha = a;
        }
        if (!(lhs <= rhs)) rep.pass = false;
    }
    if (rep.pass) rep.witness_alpha.reset();
    return rep;
}

KnReport check_projector_form(const Spectrum& spectrum, const SpectralVector& v, const KnConfig& cfg) {
    require_paired(spectrum, v, "check_projector_form");
    cfg.validate(spectrum);
    check_probes(cfg);

    KnReport rep;
    bool all_ok = true;
    for (double a : cfg.alpha_probe) {
        const double upper = std::sqrt(projector_norm_sq(spectrum, v, a));
        const double lower = std::sqrt(projector_norm_sq(spectrum, v, cfg.c2 * a));
        KnProbe p{a, lower, cfg.theta * upper, 0.0};
        if (upper == 0.0) {
            p.degenerate = true;
            ++rep.degenerate_probes;
            rep.probes.push_back(p);
            continue;
        }
        p.ratio = lower / upper;
        rep.probes.push_back(p);
        if (p.ratio >= rep.worst_ratio) {
            rep.worst_ratio = p.ratio;
            rep.witness_alpha = a;
        }
        if (!(p.ratio <= cfg.theta)) all_ok = false;
    }
    if (rep.degenerate_probes == static_cast<int>(rep.probes.size())) {
        rep.inconclusive = true;
        rep.pass = false;
        rep.witness_alpha.reset();
        return rep;
    }
    rep.pass = all_ok;
    if (rep.pass) rep.witness_alpha.reset();
    return rep;
}

}  // namespace specreg
