#include "specreg/mc_harness.hpp"

#include "specreg/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace specreg {

namespace {

constexpr double kIneqRtol = 1e-10;

// Runs body(i) for i in [0, n) on up to `workers` threads.
template <class Body>
void parallel_for(int n, int workers, Body&& body) {
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Pairwise summation in index order.
double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

KnConfig with_default_probes(KnConfig cfg, const Spectrum& spectrum) {
    if (cfg.alpha_probe.empty()) cfg.alpha_probe = default_kn_probes(spectrum, cfg.t0, cfg.c2);
    return cfg;
}

void admit_or_throw(const ExperimentConfig& config, const Spectrum& spectrum, const SpectralVector& v) {
    if (!config.kn_gate) return;
    const auto cfg = with_default_probes(*config.kn_gate, spectrum);
    const auto rep = check_kn(spectrum, v, config.scheme, cfg);
    if (!rep.pass) {
        std::ostringstream os;
        os.precision(17);
        os << "instance refused by the self-similarity gate: lhs/rhs = " << rep.worst_ratio
           << " at alpha = " << rep.witness_alpha.value_or(0.0);
        throw AdmissionError(os.str(), rep.witness_alpha.value_or(0.0));
    }
}

double ratio_of(double lhs, double rhs) {
    if (lhs <= 0.0) return 0.0;
    if (rhs <= 0.0) return std::numeric_limits<double>::infinity();
    return lhs / rhs;
}

}  // namespace

RmseStats rmse_from_squared_errors(std::span<const double> sq) {
    const std::size_t n = sq.size();
    if (n == 0) return {0.0, 0.0};
    const double mean = pairwise_sum(sq) / static_cast<double>(n);
    const double rmse = std::sqrt(mean);
    if (n < 2 || mean <= 0.0) return {rmse, 0.0};
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) dev[i] = (sq[i] - mean) * (sq[i] - mean);
    const double var = pairwise_sum(dev) / static_cast<double>(n - 1);
    const double se_mean = std::sqrt(var / static_cast<double>(n));
    // d sqrt(m) = dm / (2 sqrt(m))
    return {rmse, se_mean / (2.0 * rmse)};
}

RmseResult run_rmse(const ExperimentConfig& config, double delta) {
    config.validate();
    const Spectrum spectrum = build_spectrum(config.instance.spectrum);
    const ProblemInstance inst(spectrum, build_vector(config.instance.x_dag, spectrum),
                               build_vector(config.instance.x0, spectrum), delta);
    const Grid grid = config.grid.resolve(spectrum);
    admit_or_throw(config, spectrum, inst.initial_error());

    RuleConfig rule = config.rule;
    const double kappa = resolve_kappa(rule, delta, spectrum, grid);
    rule.kappa = kappa;
    const double alpha_hat = alpha_hat_statistical(spectrum, grid, rule.eta, kappa, delta);
    const double gstar = config.scheme.gamma_star();
    const double cstar = std::sqrt(gstar * (1.0 + gstar));
    const double init_err = inst.initial_error().norm();

    struct Outcome {
        double sq_err = 0.0;
        int steps = 0;
        StopKind kind = StopKind::Regular;
        bool in_z = true;
        bool pointwise_ok = true;
        bool surrogate_ok = true;
    };
    const int R = config.replicates;
    std::vector<Outcome> out(static_cast<std::size_t>(R));

    parallel_for(R, resolve_workers(config.workers), [&](int r) {
        const auto zeta = sample_zeta(spectrum, config.seed, static_cast<std::uint64_t>(r));
        const auto z = inst.noisy_data(zeta);
        const auto sel = select_statistical_rg(inst, config.scheme, grid, rule, z);
        const double err = (inst.x_dag - reconstruct(inst, config.scheme, sel.alpha_selected, z)).norm();
        Outcome& o = out[static_cast<std::size_t>(r)];
        o.sq_err = err * err;
        o.steps = sel.steps;
        o.kind = sel.stop_kind;
        o.in_z = in_z_kappa(spectrum, zeta, kappa, grid, alpha_hat).inside;
        if (o.in_z) {
            const double a = sel.alpha_selected;
            const double d_a = (1.0 + kappa) * delta / rho_n(spectrum, a);
            const double bound = bias_norm(inst, config.scheme, a) + cstar * d_a / a;
            o.pointwise_ok = err <= bound * (1.0 + kIneqRtol);
        }
        const double surrogate = init_err + cstar * delta * weighted_noise_norm(spectrum, zeta, alpha_hat) / alpha_hat;
        o.surrogate_ok = err <= surrogate * (1.0 + kIneqRtol);
    });

    RmseResult res;
    res.delta = delta;
    res.kappa = kappa;
    res.alpha_hat = alpha_hat;
    res.replicates = R;
    res.squared_errors.reserve(out.size());
    std::vector<double> steps(out.size());
    int emergencies = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& o = out[i];
        res.squared_errors.push_back(o.sq_err);
        steps[i] = o.steps;
        if (o.kind == StopKind::Emergency) ++emergencies;
        if (o.kind == StopKind::Exhausted) ++res.exhausted;
        if (!o.in_z) ++res.z_violations;
        if (!o.pointwise_ok) ++res.pointwise_violations;
        if (!o.surrogate_ok) ++res.surrogate_violations;
    }
    const auto stats = rmse_from_squared_errors(res.squared_errors);
    res.rmse = stats.rmse;
    res.rmse_stderr = stats.stderr_;
    res.mean_steps = pairwise_sum(steps) / static_cast<double>(R);
    res.emergency_fraction = static_cast<double>(emergencies) / static_cast<double>(R);
    return res;
}

double oracle_inf_statistical(const ExperimentConfig& config, double delta) {
    const Spectrum spectrum = build_spectrum(config.instance.spectrum);
    const ProblemInstance inst(spectrum, build_vector(config.instance.x_dag, spectrum),
                               build_vector(config.instance.x0, spectrum), delta);
    const Grid grid = config.grid.resolve(spectrum);
    const double kappa = resolve_kappa(config.rule, delta, spectrum, grid);
    const double alpha_hat = alpha_hat_statistical(spectrum, grid, config.rule.eta, kappa, delta);
    double best = std::numeric_limits<double>::infinity();
    for (double a : refined_grid(grid, alpha_hat)) best = std::min(best, oracle_rhs_statistical(inst, config.scheme, a));
    return best;
}

double oracle_ratio(const ExperimentConfig& config, double delta) {
    return run_rmse(config, delta).rmse / oracle_inf_statistical(config, delta);
}

MCReport run_mc(const ExperimentConfig& config) {
    MCReport rep;
    for (double delta : config.delta_ladder) {
        const auto r = run_rmse(config, delta);
        ReportRow row;
        row.delta = delta;
        row.rmse = r.rmse;
        row.rmse_stderr = r.rmse_stderr;
        row.oracle_inf = oracle_inf_statistical(config, delta);
        row.ratio = row.rmse / row.oracle_inf;
        row.mean_steps = r.mean_steps;
        row.emergency_fraction = r.emergency_fraction;
        row.z_violations = r.z_violations;
        row.replicates = r.replicates;
        row.seed = config.seed;
        rep.rows.push_back(row);
    }
    return rep;
}

double ls_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ls_slope: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

double source_rate(const Spectrum& spectrum, double nu, double d) {
    auto theta_psi = [&](double t) { return theta_rho_n(spectrum, t) * std::pow(t, nu); };
    const double t = invert_increasing(theta_psi, d, {1e-40, 1e8 * spectrum.norm()});
    return std::pow(t, nu);
}

double source_norm_sq(const Spectrum& spectrum, const SpectralVector& v, double nu) {
    require_paired(spectrum, v, "source_norm_sq");
    double s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double w = v[j] / std::pow(spectrum[j], nu);
        s += w * w;
    }
    return s;
}

RateStudy rate_study(const ExperimentConfig& config) {
    config.validate();
    if (config.delta_ladder.size() < 3) throw ConfigError("rate study: delta_ladder needs at least 3 points");
    if (!config.source_nu) throw ConfigError("rate study: source.nu is required");
    const double nu = *config.source_nu;
    if (!(nu > 0.0)) throw ConfigError("rate study: source.nu must be positive");

    const Spectrum spectrum = build_spectrum(config.instance.spectrum);
    const auto v = build_vector(config.instance.x_dag, spectrum) - build_vector(config.instance.x0, spectrum);
    const double sn = source_norm_sq(spectrum, v, nu);
    if (sn > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "rate study: x_dag - x0 is outside the source set (||A^-nu v||^2 = " << sn << " > 1)";
        throw ConfigError(os.str());
    }
    const Grid grid = config.grid.resolve(spectrum);
    std::vector<double> t_grid(spectrum.values().begin(), spectrum.values().end());
    std::vector<double> a_grid;
    for (int k = 0; k <= std::min(grid.k_max, 80); ++k) a_grid.push_back(grid.value(k));
    const double qual = qualification_constant(config.scheme, nu, t_grid, a_grid);
    if (!(qual <= kQualificationCap)) {
        std::ostringstream os;
        os << "rate study: scheme " << config.scheme.name() << " lacks qualification t^" << nu
           << " (empirical constant " << qual << ")";
        throw ConfigError(os.str());
    }

    RateStudy out;
    out.report = run_mc(config);
    std::vector<double> lx, ly, lt;
    for (const auto& row : out.report.rows) {
        const double d_eff = effective_noise_level(row.delta);
        lx.push_back(std::log(d_eff));
        ly.push_back(std::log(row.rmse));
        lt.push_back(std::log(source_rate(spectrum, nu, d_eff)));
    }
    out.rate_slope = ls_slope(lx, ly);
    out.rate_slope_theory = ls_slope(lx, lt);
    out.report.rate_slope = out.rate_slope;
    out.report.rate_slope_theory = out.rate_slope_theory;
    return out;
}

ConcentrationResult concentration_study(const Spectrum& spectrum, const Grid& grid, std::optional<double> kappa,
                                        double delta, int replicates, std::uint64_t seed, double eta, int workers) {
    ConcentrationResult res;
    res.kappa = kappa ? *kappa : kappa_auto(delta, effective_dimension(spectrum, grid.alpha0));
    res.alpha_hat = alpha_hat_statistical(spectrum, grid, eta, res.kappa, delta);
    res.replicates = replicates;
    for (int k = 0; k <= grid.k_max; ++k) {
        const double a = grid.value(k);
        if (a < res.alpha_hat * (1.0 - 1e-12)) break;
        res.bound_value += std::exp(-res.kappa * res.kappa * effective_dimension(spectrum, a) / 2.0);
        ++res.grid_points;
    }
    std::vector<char> outside(static_cast<std::size_t>(replicates), 0);
    parallel_for(replicates, resolve_workers(workers), [&](int r) {
        const auto zeta = sample_zeta(spectrum, seed, static_cast<std::uint64_t>(r));
        outside[static_cast<std::size_t>(r)] = in_z_kappa(spectrum, zeta, res.kappa, grid, res.alpha_hat).inside ? 0 : 1;
    });
    for (char c : outside) res.violations += c;
    return res;
}

// ---------------------------------------------------------------------------

DeterministicCase make_worst_case(const ProblemInstance& instance, const Scheme& scheme, const Grid& grid,
                                  double tau, double eta, double mu, std::optional<KnConfig> kn) {
    const auto bound = make_power_law_bound(instance.delta, mu);
    const auto& sp = instance.spectrum;
    const double alpha_hat = alpha_hat_deterministic(grid, bound, sp, eta);
    double best_a = grid.alpha0, best = std::numeric_limits<double>::infinity();
    for (double a : refined_grid(grid, alpha_hat)) {
        const double v = oracle_rhs_deterministic(instance, scheme, bound, a);
        if (v < best) {
            best = v;
            best_a = a;
        }
    }
    const std::size_t k = worst_noise_index(sp, scheme, mu, best_a);
    const auto v = instance.initial_error();
    const double sign = v[k] > 0.0 ? -1.0 : 1.0;
    auto pb = make_power_bounded(sp, mu, power_bounded_mode(sp, mu, k, sign));
    return DeterministicCase{instance, scheme, grid, tau, eta, bound, std::move(pb.direction), std::move(kn)};
}

DeterministicRun run_deterministic(const DeterministicCase& c) {
    const auto& inst = c.instance;
    DeterministicRun run;
    run.delta = inst.delta;
    run.alpha_hat = alpha_hat_deterministic(c.grid, c.bound, inst.spectrum, c.eta);
    const auto z = inst.noisy_data(c.zeta);
    run.selection = select_deterministic_rg(inst, c.scheme, c.grid, c.tau, c.bound, run.alpha_hat, z);
    run.error = (inst.x_dag - reconstruct(inst, c.scheme, run.selection.alpha_selected, z)).norm();
    run.oracle_inf = std::numeric_limits<double>::infinity();
    for (double a : refined_grid(c.grid, run.alpha_hat))
        run.oracle_inf = std::min(run.oracle_inf, oracle_rhs_deterministic(inst, c.scheme, c.bound, a));
    run.ratio = run.error / run.oracle_inf;
    return run;
}

bool LemmaReport::all_pass() const {
    return std::all_of(lemmas.begin(), lemmas.end(), [](const LemmaOutcome& l) { return l.pass; });
}

const LemmaOutcome& LemmaReport::get(const std::string& name) const {
    for (const auto& l : lemmas)
        if (l.name == name) return l;
    throw std::out_of_range("no lemma named " + name);
}

double kn_lemma_constant(const KnConfig& kn, double alpha0) {
    const double c1sq = kn.c1 * kn.c1;
    const double a = (1.0 + kn.c2) / kn.c2;
    const double b = (kn.c2 * kn.t0 + alpha0) / (kn.c2 * kn.t0);
    return std::sqrt(2.0 + c1sq * a * a + (alpha0 + kn.t0) / kn.t0 + c1sq * b * b);
}

LemmaReport lemma_check(const DeterministicCase& c) {
    const auto& inst = c.instance;
    const auto& sp = inst.spectrum;
    const std::size_t J = sp.size();
    const auto v = inst.initial_error();
    const double gstar = c.scheme.gamma_star();

    LemmaReport rep;
    rep.run = run_deterministic(c);
    const auto& sel = rep.run.selection;
    const int hat_k = c.grid.index_of(rep.run.alpha_hat);

    std::optional<KnConfig> kn;
    if (c.kn) {
        kn = with_default_probes(*c.kn, sp);
        rep.admitted = check_kn(sp, v, c.scheme, *kn).pass;
    }

    // residuals on the scanned grid
    const int K = hat_k + 1;
    std::vector<double> alphas(static_cast<std::size_t>(K));
    std::vector<std::vector<double>> r(static_cast<std::size_t>(K), std::vector<double>(J));
    for (int k = 0; k < K; ++k) {
        alphas[static_cast<std::size_t>(k)] = c.grid.value(k);
        for (std::size_t j = 0; j < J; ++j)
            r[static_cast<std::size_t>(k)][j] = residual_r(c.scheme, alphas[static_cast<std::size_t>(k)], sp[j]);
    }
    auto norm_of = [&](auto&& term) {
        double s = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            const double e = term(j);
            s += e * e;
        }
        return std::sqrt(s);
    };
    auto record = [](LemmaOutcome& o, double lhs, double rhs) {
        const double q = ratio_of(lhs, rhs);
        o.worst_ratio = std::max(o.worst_ratio, q);
        ++o.checks;
        if (!(lhs <= rhs * (1.0 + kIneqRtol))) o.pass = false;
    };
    auto bound_at = [&](double a) { return delta_bound_eval(c.bound, sp, a); };
    // ||A^{1/2} s_a^{1/2} r_a v|| and ||s_a r_a A v||
    auto half_weighted = [&](int k) {
        const double a = alphas[static_cast<std::size_t>(k)];
        return norm_of([&](std::size_t j) {
            return std::sqrt(sp[j] * a / (sp[j] + a)) * r[static_cast<std::size_t>(k)][j] * v[j];
        });
    };
    auto full_weighted = [&](int k) {
        const double a = alphas[static_cast<std::size_t>(k)];
        return norm_of([&](std::size_t j) { return a / (sp[j] + a) * r[static_cast<std::size_t>(k)][j] * sp[j] * v[j]; });
    };
    auto bias_k = [&](int k) { return norm_of([&](std::size_t j) { return r[static_cast<std::size_t>(k)][j] * v[j]; }); };

    LemmaOutcome above{"misfit-above"};
    for (int k = 0; k < sel.index; ++k) {
        const double a = alphas[static_cast<std::size_t>(k)];
        record(above, bound_at(a) / a, bias_k(k) / (c.tau - 1.0));
    }

    LemmaOutcome at{"misfit-at"};
    {
        const double gamma0 = std::max(1.0 + c.tau, c.eta * v.norm());
        record(at, weighted_misfit(inst, c.scheme, sel.alpha_selected, inst.exact_data()),
               gamma0 * bound_at(sel.alpha_selected));
    }

    LemmaOutcome diff{"difference"};
    LemmaOutcome tail{"lower-tail"};
    LemmaOutcome diff_kn{"difference-kn"};
    const bool kn_ok = kn.has_value() && rep.admitted;
    tail.applicable = diff_kn.applicable = kn_ok;
    const double C = kn ? kn_lemma_constant(*kn, c.grid.alpha0) : 0.0;
    std::vector<double> hw(static_cast<std::size_t>(K)), fw(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        hw[static_cast<std::size_t>(k)] = half_weighted(k);
        fw[static_cast<std::size_t>(k)] = full_weighted(k);
        if (kn_ok) {
            const double a = alphas[static_cast<std::size_t>(k)];
            record(tail, hw[static_cast<std::size_t>(k)], C / std::sqrt(a) * fw[static_cast<std::size_t>(k)]);
        }
    }
    for (int kb = 0; kb < K; ++kb) {          // beta = alphas[kb]
        for (int ka = kb; ka < K; ++ka) {     // alpha = alphas[ka] <= beta
            const double a = alphas[static_cast<std::size_t>(ka)];
            const double b = alphas[static_cast<std::size_t>(kb)];
            const double lhs = norm_of([&](std::size_t j) {
                return (r[static_cast<std::size_t>(kb)][j] - r[static_cast<std::size_t>(ka)][j]) * v[j];
            });
            record(diff, lhs, (1.0 + gstar) / std::sqrt(a) * hw[static_cast<std::size_t>(kb)]);
            if (kn_ok) record(diff_kn, lhs, (1.0 + gstar) * C / std::sqrt(a * b) * fw[static_cast<std::size_t>(kb)]);
        }
    }

    LemmaOutcome no_fallback{"no-fallback"};
    {
        const double vn = v.norm();
        no_fallback.applicable = vn > 0.0 && c.eta < (c.tau - 1.0) / (c.grid.q * vn);
        if (no_fallback.applicable) {
            ++no_fallback.checks;
            if (sel.stop_kind != StopKind::Regular) {
                no_fallback.pass = false;
                no_fallback.worst_ratio = 1.0;
            }
        }
    }

    LemmaOutcome pointwise{"pointwise"};
    {
        const double a = sel.alpha_selected;
        const double cstar = std::sqrt(gstar * (1.0 + gstar));
        record(pointwise, rep.run.error, bias_norm(inst, c.scheme, a) + cstar * bound_at(a) / a);
    }

    rep.lemmas = {above, at, diff, tail, diff_kn, no_fallback, pointwise};
    return rep;
}

std::vector<LemmaReport> lemma_suite(std::span<const DeterministicCase> cases) {
    std::vector<LemmaReport> out;
    out.reserve(cases.size());
    for (const auto& c : cases) out.push_back(lemma_check(c));
    return out;
}

}  // namespace specreg
