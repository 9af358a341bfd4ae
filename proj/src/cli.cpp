#include "specreg/cli.hpp"

#include "specreg/config.hpp"
#include "specreg/errors.hpp"
#include "specreg/mc_harness.hpp"
#include "specreg/report_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace specreg {

using nlohmann::json;

namespace {

struct Options {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    int verbosity = 0;
    // axioms only
    std::string scheme;
    int scheme_n = 3;
};

// Small column table rendered either as CSV or as a JSON array of row objects.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;

    void add(std::vector<json> row) { rows.push_back(std::move(row)); }

    [[nodiscard]] std::string csv() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
        os << '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell(r[i]);
            os << '\n';
        }
        return os.str();
    }

    [[nodiscard]] json to_json() const {
        json arr = json::array();
        for (const auto& r : rows) {
            json o = json::object();
            for (std::size_t i = 0; i < r.size(); ++i) o[columns[i]] = r[i];
            arr.push_back(std::move(o));
        }
        return arr;
    }

    static std::string cell(const json& v) {
        if (v.is_number_float()) return format_double(v.get<double>());
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_string()) return v.get<std::string>();
        if (v.is_null()) return "";
        return v.dump();
    }
};

class Runner {
public:
    Runner(const Options& opt, std::ostream& out, std::ostream& err) : opt_(opt), out_(out), err_(err) {}

    int axioms();
    int kn_check();
    int select();
    int mc();
    int rate();
    int concentration();
    int lemmas();

private:
    AppConfig load(bool required) {
        AppConfig cfg;
        if (opt_.config_path.empty()) {
            if (required) throw ConfigError("--config is required for this subcommand");
        } else {
            cfg = load_config(opt_.config_path);
        }
        if (opt_.seed) {
            cfg.experiment.seed = *opt_.seed;
            cfg.noise.seed.reset();
        }
        if (opt_.workers) cfg.experiment.workers = *opt_.workers;
        echo_ = cfg.echo;
        return cfg;
    }

    static double require_delta(const AppConfig& cfg) {
        if (!cfg.delta) throw ConfigError("delta: required by this subcommand");
        return *cfg.delta;
    }

    // Builds the instance and grid, converting construction errors into config errors.
    struct Built {
        ProblemInstance instance;
        Grid grid;
    };
    static Built build(const AppConfig& cfg, double delta) {
        try {
            auto sp = build_spectrum(cfg.experiment.instance.spectrum);
            auto xd = build_vector(cfg.experiment.instance.x_dag, sp);
            auto x0 = build_vector(cfg.experiment.instance.x0, sp);
            auto grid = cfg.experiment.grid.resolve(sp);
            return {ProblemInstance(std::move(sp), std::move(xd), std::move(x0), delta), grid};
        } catch (const PairingError& e) {
            throw ConfigError(e.what());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        } catch (const std::domain_error& e) {
            throw ConfigError(e.what());
        }
    }

    void emit_table(const std::string& command, const Table& t, const json& summary) {
        if (parse_format(opt_.format) == ReportFormat::Csv) {
            emit(t.csv());
            return;
        }
        json j;
        j["schema"] = "specreg-" + command + "/1";
        j["version"] = kArtifactVersion;
        j["summary"] = summary;
        j["rows"] = t.to_json();
        j["config"] = echo_.empty() ? json(nullptr) : json::parse(echo_);
        j["metadata"] = {{"timestamp", utc_timestamp()}};
        emit(j.dump(2) + "\n");
    }

    void emit_report(const MCReport& report) {
        emit(parse_format(opt_.format) == ReportFormat::Csv ? report_to_csv(report) : report_to_json(report));
    }

    void emit(const std::string& contents) {
        if (opt_.out_path.empty()) {
            out_ << contents;
            return;
        }
        write_atomic(opt_.out_path, contents);
        if (opt_.verbosity > 0) out_ << "wrote " << opt_.out_path << '\n';
    }

    const Options& opt_;
    std::ostream& out_;
    std::ostream& err_;
    std::string echo_;
};

std::string fmt(double x) { return format_double(x); }

int Runner::axioms() {
    AppConfig cfg = load(false);
    std::vector<Scheme> schemes;
    if (!opt_.scheme.empty()) {
        schemes.push_back(Scheme::from_name(opt_.scheme, opt_.scheme_n));
    } else if (cfg.scheme_given) {
        schemes.push_back(cfg.experiment.scheme);
    } else {
        schemes = {Scheme::tikhonov(), Scheme::iterated_tikhonov(opt_.scheme_n), Scheme::tsvd(), Scheme::landweber(),
                   Scheme::showalter()};
    }
    const auto& ax = cfg.axioms;
    const double t_max = ax.t_max.value_or(1.0);
    const auto t_grid = log_space(ax.t_min, t_max, static_cast<std::size_t>(ax.t_points));
    const auto a_grid = Grid(ax.alpha0, ax.q, std::max(ax.depth, 1)).values();

    Table t{{"scheme", "n", "gamma1", "gamma_star", "gamma_star_bound", "range_ok", "monotone_ok", "increment_ok",
             "identity_ok", "gamma_star_ok", "worst_violation", "witness_t", "witness_alpha", "witness_beta", "pass"},
            {}};
    bool all = true;
    for (const auto& s : schemes) {
        AxiomReport rep;
        try {
            rep = verify_axioms(s, t_grid, a_grid);
        } catch (const std::domain_error& e) {
            throw ConfigError("axioms: " + s.name() + ": " + e.what());
        }
        all = all && rep.pass();
        const json w_t = rep.witness ? json(rep.witness->t) : json(nullptr);
        const json w_a = rep.witness ? json(rep.witness->alpha) : json(nullptr);
        const json w_b = rep.witness ? json(rep.witness->beta) : json(nullptr);
        t.add({s.name(), s.n, rep.gamma1, rep.gamma_star, s.gamma_star(), rep.range_ok, rep.monotone_ok, rep.increment_ok,
               rep.identity_ok, rep.gamma_star_ok, rep.worst_violation, w_t, w_a, w_b, rep.pass()});
        out_ << s.name() << ": " << (rep.pass() ? "pass" : "FAIL") << "  gamma_1=" << fmt(rep.gamma1)
             << "  gamma_*=" << fmt(rep.gamma_star) << " (bound " << fmt(s.gamma_star()) << ")";
        if (!rep.pass() && rep.witness)
            out_ << "  witness t=" << fmt(rep.witness->t) << " alpha=" << fmt(rep.witness->alpha)
                 << " beta=" << fmt(rep.witness->beta);
        out_ << '\n';
    }
    emit_table("axioms", t, {{"pass", all}});
    return all ? kExitOk : kExitPropertyFailure;
}

int Runner::kn_check() {
    const AppConfig cfg = load(true);
    const auto b = build(cfg, cfg.delta.value_or(1.0));
    const auto& sp = b.instance.spectrum;
    KnConfig kn = cfg.kn.value_or(KnConfig{});
    kn.validate(sp);
    if (kn.alpha_probe.empty()) kn.alpha_probe = default_kn_probes(sp, kn.t0, kn.c2);
    const auto v = b.instance.initial_error();
    const bool projector = cfg.kn_form == KnForm::Projector;
    const KnReport rep = projector ? check_projector_form(sp, v, kn) : check_kn(sp, v, cfg.experiment.scheme, kn);

    Table t{{"alpha", "lhs", "rhs", "ratio"}, {}};
    for (const auto& p : rep.probes) {
        if (p.degenerate) continue;
        t.add({p.alpha, p.lhs, p.rhs, p.ratio});
    }
    std::string verdict = rep.pass ? "pass" : (rep.inconclusive ? "inconclusive" : "FAIL");
    out_ << "kn-check (" << (projector ? "projector" : "filter") << " form): " << verdict
         << "  worst_ratio=" << fmt(rep.worst_ratio);
    if (rep.witness_alpha) out_ << "  witness alpha=" << fmt(*rep.witness_alpha);
    if (rep.degenerate_probes > 0) out_ << "  degenerate_probes=" << rep.degenerate_probes;
    out_ << '\n';
    json summary = {{"pass", rep.pass}, {"inconclusive", rep.inconclusive}, {"worst_ratio", rep.worst_ratio},
                    {"witness_alpha", rep.witness_alpha ? json(*rep.witness_alpha) : json(nullptr)}};
    emit_table("kn-check", t, summary);
    return rep.pass ? kExitOk : kExitPropertyFailure;
}

int Runner::select() {
    const AppConfig cfg = load(true);
    const double delta = require_delta(cfg);
    const auto b = build(cfg, delta);
    const auto& inst = b.instance;
    const auto& sp = inst.spectrum;
    const auto& ex = cfg.experiment;

    SpectralVector zeta;
    const double mu = cfg.noise.kind == NoiseKind::Power ? cfg.noise.mu.front() : 0.0;
    switch (cfg.noise.kind) {
    case NoiseKind::Gaussian:
        zeta = sample_zeta(sp, cfg.noise.seed.value_or(ex.seed), 0);
        break;
    case NoiseKind::Explicit:
        zeta = SpectralVector(cfg.noise.zeta);
        if (zeta.size() != sp.size()) throw ConfigError("noise.zeta: length does not match the spectrum");
        break;
    case NoiseKind::Power:
        try {
            if (cfg.noise.direction) {
                zeta = make_power_bounded(sp, mu, SpectralVector(*cfg.noise.direction)).direction;
            } else {
                zeta = make_worst_case(inst, ex.scheme, b.grid, ex.rule.tau, ex.rule.eta, mu, std::nullopt).zeta;
            }
        } catch (const std::domain_error& e) {
            throw ConfigError(std::string("noise: ") + e.what());
        } catch (const PairingError& e) {
            throw ConfigError(std::string("noise.direction: ") + e.what());
        }
        break;
    }
    const auto z = inst.noisy_data(zeta);

    SelectionResult sel;
    std::optional<double> kappa;
    if (cfg.mode == RuleMode::Statistical) {
        kappa = resolve_kappa(ex.rule, delta, sp, b.grid);
        sel = select_statistical_rg(inst, ex.scheme, b.grid, ex.rule, z);
    } else {
        const auto bound = make_power_law_bound(delta, mu);
        const double alpha_hat = alpha_hat_deterministic(b.grid, bound, sp, ex.rule.eta);
        sel = select_deterministic_rg(inst, ex.scheme, b.grid, ex.rule.tau, bound, alpha_hat, z);
    }

    Table t{{"k", "alpha", "misfit", "regular_threshold", "emergency_lhs", "emergency_rhs"}, {}};
    for (std::size_t k = 0; k < sel.trace.size(); ++k) {
        const auto& e = sel.trace[k];
        t.add({k, e.alpha, e.misfit, e.regular_threshold, e.emergency_lhs, e.emergency_rhs});
    }
    const double error = (inst.x_dag - reconstruct(inst, ex.scheme, sel.alpha_selected, z)).norm();
    out_ << "select (" << (cfg.mode == RuleMode::Statistical ? "statistical" : "deterministic")
         << "): alpha=" << fmt(sel.alpha_selected) << "  stop=" << to_string(sel.stop_kind) << "  steps=" << sel.steps
         << "  error=" << fmt(error);
    if (kappa) out_ << "  kappa=" << fmt(*kappa);
    out_ << '\n';
    if (opt_.verbosity > 0)
        for (const auto& e : sel.trace)
            out_ << "  alpha=" << fmt(e.alpha) << " misfit=" << fmt(e.misfit) << " threshold=" << fmt(e.regular_threshold)
                 << '\n';
    json summary = {{"alpha", sel.alpha_selected}, {"stop_kind", to_string(sel.stop_kind)}, {"steps", sel.steps},
                    {"error", error}, {"kappa", kappa ? json(*kappa) : json(nullptr)}};
    emit_table("select", t, summary);
    return sel.stop_kind == StopKind::Exhausted ? kExitPropertyFailure : kExitOk;
}

std::vector<double> ladder_of(const AppConfig& cfg) {
    if (cfg.ladder_given) return cfg.experiment.delta_ladder;
    if (cfg.delta) return {*cfg.delta};
    throw ConfigError("delta_ladder: required by this subcommand");
}

int Runner::mc() {
    AppConfig cfg = load(true);
    cfg.experiment.delta_ladder = ladder_of(cfg);
    MCReport rep = run_mc(cfg.experiment);
    rep.config_echo = echo_;
    for (const auto& r : rep.rows)
        out_ << "delta=" << fmt(r.delta) << "  rmse=" << fmt(r.rmse) << " +- " << fmt(r.rmse_stderr)
             << "  ratio=" << fmt(r.ratio) << "  mean_steps=" << fmt(r.mean_steps)
             << "  emergency=" << fmt(r.emergency_fraction) << "  z_violations=" << r.z_violations << '\n';
    emit_report(rep);
    return kExitOk;
}

int Runner::rate() {
    AppConfig cfg = load(true);
    cfg.experiment.delta_ladder = ladder_of(cfg);
    RateStudy rs = rate_study(cfg.experiment);
    rs.report.config_echo = echo_;
    const double rel = std::abs(rs.rate_slope - rs.rate_slope_theory) / rs.rate_slope_theory;
    const bool ok = rel <= cfg.rate_tolerance;
    if (opt_.verbosity > 0)
        for (const auto& r : rs.report.rows)
            out_ << "delta=" << fmt(r.delta) << "  rmse=" << fmt(r.rmse) << "  ratio=" << fmt(r.ratio) << '\n';
    out_ << "rate: slope=" << fmt(rs.rate_slope) << "  theory=" << fmt(rs.rate_slope_theory)
         << "  relative_gap=" << fmt(rel) << "  tolerance=" << fmt(cfg.rate_tolerance) << "  " << (ok ? "pass" : "FAIL")
         << '\n';
    emit_report(rs.report);
    return ok ? kExitOk : kExitPropertyFailure;
}

int Runner::concentration() {
    const AppConfig cfg = load(true);
    const double delta = require_delta(cfg);
    const auto b = build(cfg, delta);
    const auto& ex = cfg.experiment;
    if (ex.replicates < 1000) throw ConfigError("replicates: concentration needs at least 1000");
    const auto res = concentration_study(b.instance.spectrum, b.grid, ex.rule.kappa, delta, ex.replicates, ex.seed,
                                         ex.rule.eta, ex.workers);
    Table t{{"delta", "kappa", "alpha_hat", "grid_points", "replicates", "violations", "bound_value", "seed"}, {}};
    t.add({delta, res.kappa, res.alpha_hat, res.grid_points, res.replicates, res.violations, res.bound_value, ex.seed});
    out_ << "concentration: kappa=" << fmt(res.kappa) << "  violations=" << res.violations << "/" << res.replicates
         << "  union_bound=" << fmt(res.bound_value) << '\n';
    emit_table("concentration", t, {{"violations", res.violations}, {"bound_value", res.bound_value}});
    return kExitOk;
}

int Runner::lemmas() {
    const AppConfig cfg = load(true);
    if (cfg.noise.kind != NoiseKind::Power) throw ConfigError("noise.kind: lemmas needs \"power\" noise");
    const auto ladder = ladder_of(cfg);
    const auto& ex = cfg.experiment;
    Table t{{"mu", "delta", "admitted", "alpha_selected", "stop_kind", "error", "oracle_inf", "ratio", "lemma",
             "applicable", "pass", "worst_ratio", "checks"},
            {}};
    bool ok = true;
    int runs = 0, admitted = 0;
    for (double mu : cfg.noise.mu) {
        for (double delta : ladder) {
            const auto b = build(cfg, delta);
            if (cfg.kn) cfg.kn->validate(b.instance.spectrum);
            DeterministicCase c = [&] {
                if (!cfg.noise.direction)
                    return make_worst_case(b.instance, ex.scheme, b.grid, ex.rule.tau, ex.rule.eta, mu, cfg.kn);
                try {
                    auto pb = make_power_bounded(b.instance.spectrum, mu, SpectralVector(*cfg.noise.direction));
                    return DeterministicCase{b.instance, ex.scheme, b.grid, ex.rule.tau, ex.rule.eta,
                                             make_power_law_bound(delta, mu), std::move(pb.direction), cfg.kn};
                } catch (const std::domain_error& e) {
                    throw ConfigError(std::string("noise.direction: ") + e.what());
                } catch (const PairingError& e) {
                    throw ConfigError(std::string("noise.direction: ") + e.what());
                }
            }();
            const LemmaReport rep = lemma_check(c);
            ++runs;
            if (rep.admitted) ++admitted;
            const auto& run = rep.run;
            for (const auto& l : rep.lemmas) {
                t.add({mu, delta, rep.admitted, run.selection.alpha_selected, to_string(run.selection.stop_kind),
                       run.error, run.oracle_inf, run.ratio, l.name, l.applicable, l.pass, l.worst_ratio, l.checks});
                if (rep.admitted && !l.pass) {
                    ok = false;
                    err_ << "lemma " << l.name << " fails at mu=" << fmt(mu) << " delta=" << fmt(delta)
                         << " (worst ratio " << fmt(l.worst_ratio) << ")\n";
                }
            }
            if (opt_.verbosity > 0 || !rep.admitted)
                out_ << "mu=" << fmt(mu) << " delta=" << fmt(delta) << "  ratio=" << fmt(run.ratio)
                     << "  stop=" << to_string(run.selection.stop_kind) << (rep.admitted ? "" : "  (not admitted)")
                     << '\n';
        }
    }
    out_ << "lemmas: " << runs << " runs, " << admitted << " admitted, " << (ok ? "all pass" : "FAIL") << '\n';
    emit_table("lemmas", t, {{"pass", ok}, {"runs", runs}, {"admitted", admitted}});
    return ok ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral regularization with Raus-Gfrerer parameter choice", "specreg"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&opt](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("-c,--config", opt.config_path, "JSON config file");
        if (config_required) c->required();
        sub->add_option("-o,--out", opt.out_path, "Output file (default: standard output)");
        sub->add_option("-f,--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", opt.seed, "Override the config seed");
        sub->add_option("--workers", opt.workers, "Worker threads (default: SPECREG_WORKERS or all cores)")
            ->check(CLI::PositiveNumber);
        sub->add_flag("-v,--verbose", opt.verbosity, "More output");
    };

    auto* ax = app.add_subcommand("axioms", "Verify the filter axioms on log grids");
    add_common(ax, false);
    ax->add_option("--scheme", opt.scheme, "tikhonov | iterated-tikhonov | tsvd | landweber | showalter");
    ax->add_option("--n", opt.scheme_n, "Iterations for iterated-tikhonov")->check(CLI::PositiveNumber);
    auto* kn = app.add_subcommand("kn-check", "Check the self-similarity condition on x_dagger - x0");
    add_common(kn, true);
    auto* sel = app.add_subcommand("select", "Run one parameter selection");
    add_common(sel, true);
    auto* mc = app.add_subcommand("mc", "Monte Carlo RMSE and oracle ratios over a delta ladder");
    add_common(mc, true);
    auto* rate = app.add_subcommand("rate", "Empirical vs. theoretical convergence rate");
    add_common(rate, true);
    auto* conc = app.add_subcommand("concentration", "Frequency of the good-noise event failing");
    add_common(conc, true);
    auto* lem = app.add_subcommand("lemmas", "Deterministic-noise inequality battery");
    add_common(lem, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "specreg: " << e.what() << '\n';
        return kExitConfigError;
    }

    Runner runner(opt, out, err);
    try {
        if (ax->parsed()) return runner.axioms();
        if (kn->parsed()) return runner.kn_check();
        if (sel->parsed()) return runner.select();
        if (mc->parsed()) return runner.mc();
        if (rate->parsed()) return runner.rate();
        if (conc->parsed()) return runner.concentration();
        if (lem->parsed()) return runner.lemmas();
    } catch (const ConfigError& e) {
        err << "specreg: config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const AdmissionError& e) {
        err << "specreg: " << e.what() << '\n';
        return kExitPropertyFailure;
    } catch (const ExhaustionError& e) {
        err << "specreg: " << e.what() << '\n';
        return kExitPropertyFailure;
    } catch (const std::exception& e) {
        // I/O failures and invalid numeric input
        err << "specreg: error: " << e.what() << '\n';
        return kExitConfigError;
    }
    return kExitConfigError;
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace specreg
