#pragma once

#include "specreg/schemes.hpp"
#include "specreg/spectrum.hpp"

#include <optional>
#include <vector>

namespace specreg {

/// Constants of the self-similarity condition on v = x_dag - x0:
///
///   sum_{t_j <= alpha} v_j^2 <= c1^2 sum_{t_j >= c2 alpha} r_alpha(t_j)^2 v_j^2,   0 < alpha <= t0
///
/// and of its projector form ||E_{c2 alpha} v|| <= theta ||E_alpha v||.
struct KnConfig {
    double c1 = 4.0;
    double c2 = 0.25;
    double t0 = 0.1;
    double theta = 0.9;
    std::vector<double> alpha_probe;

    /// Throws ConfigError on out-of-range constants (t0 is checked against t_1).
    void validate(const Spectrum& spectrum) const;
};

struct KnProbe {
    double alpha;
    double lhs;
    double rhs;
    double ratio;
    bool degenerate = false;  // projector form only: ||E_alpha v|| == 0
};

struct KnReport {
    bool pass = false;
    bool inconclusive = false;  // projector form with every probe degenerate
    double worst_ratio = 0.0;
    std::optional<double> witness_alpha;
    int degenerate_probes = 0;
    std::vector<KnProbe> probes;
};

/// Default probe set: 20 geometric points in [t_J, t0], plus t_j (1 -+ 1e-9) for every
/// eigenvalue whose offsets land in (0, t0]. Sorted descending, duplicates removed.
std::vector<double> default_kn_probes(const Spectrum& spectrum, double t0, double c2, int n_geometric = 20);

/// General filter form. ratio = lhs / rhs with c1^2 folded into rhs; pass iff every ratio <= 1.
/// Throws ConfigError when cfg.alpha_probe is empty or a probe lies outside (0, t0].
KnReport check_kn(const Spectrum& spectrum, const SpectralVector& v, const Scheme& scheme, const KnConfig& cfg);

/// Projector form. ratio = ||E_{c2 alpha} v|| / ||E_alpha v||; pass iff every non-degenerate
/// ratio <= theta. All-degenerate runs are inconclusive, never a pass.
KnReport check_projector_form(const Spectrum& spectrum, const SpectralVector& v, const KnConfig& cfg);

}  // namespace specreg
