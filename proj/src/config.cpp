#include "specreg/config.hpp"

#include "specreg/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace specreg {

using nlohmann::json;

namespace {

// Field access with path-qualified error messages and fail-closed key sets.
class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail("expected an object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        for (const auto& [k, _] : j_.items()) {
            bool ok = false;
            for (const char* a : keys) ok = ok || k == a;
            if (!ok) throw ConfigError(at(k) + ": unknown key");
        }
    }

    [[nodiscard]] bool has(const char* key) const { return j_.contains(key); }
    [[nodiscard]] const json& raw(const char* key) const { return j_.at(key); }
    [[nodiscard]] std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    [[nodiscard]] Node child(const char* key) const { return Node(j_.at(key), at(key)); }

    [[nodiscard]] double number(const char* key) const {
        const auto& v = j_.at(key);
        if (!v.is_number()) throw ConfigError(at(key) + ": expected a number");
        return v.get<double>();
    }
    [[nodiscard]] double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

    [[nodiscard]] long long integer(const char* key) const {
        const auto& v = j_.at(key);
        if (!v.is_number_integer()) throw ConfigError(at(key) + ": expected an integer");
        return v.get<long long>();
    }

    [[nodiscard]] std::uint64_t unsigned_integer(const char* key) const {
        const auto& v = j_.at(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
        throw ConfigError(at(key) + ": expected a non-negative integer");
    }

    [[nodiscard]] std::string string(const char* key) const {
        const auto& v = j_.at(key);
        if (!v.is_string()) throw ConfigError(at(key) + ": expected a string");
        return v.get<std::string>();
    }

    [[nodiscard]] bool boolean(const char* key) const {
        const auto& v = j_.at(key);
        if (!v.is_boolean()) throw ConfigError(at(key) + ": expected true or false");
        return v.get<bool>();
    }

    [[nodiscard]] std::vector<double> numbers(const char* key) const { return as_numbers(j_.at(key), at(key)); }

    static std::vector<double> as_numbers(const json& v, const std::string& path) {
        if (!v.is_array()) throw ConfigError(path + ": expected an array of numbers");
        std::vector<double> out;
        out.reserve(v.size());
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError(path + ": expected an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ConfigError((path_.empty() ? "config" : path_) + ": " + msg); }

private:
    const json& j_;
    std::string path_;
};

SpectrumRecipe parse_spectrum(const json& j, const std::string& path) {
    if (j.is_array()) return ExplicitSpectrumRecipe{Node::as_numbers(j, path)};
    const Node n(j, path);
    const auto kind = n.string("kind");
    if (kind == "power") {
        n.allow({"kind", "a", "J"});
        const double a = n.number("a");
        const long long J = n.integer("J");
        if (!(a > 0.5)) throw ConfigError(n.at("a") + ": must exceed 1/2");
        if (J < 1) throw ConfigError(n.at("J") + ": must be >= 1");
        return PowerSpectrumRecipe{a, static_cast<std::size_t>(J)};
    }
    if (kind == "explicit") {
        n.allow({"kind", "eigenvalues"});
        return ExplicitSpectrumRecipe{n.numbers("eigenvalues")};
    }
    throw ConfigError(n.at("kind") + ": unknown spectrum kind '" + kind + "'");
}

VectorRecipe parse_vector(const json& j, const std::string& path) {
    if (j.is_array()) return ExplicitVector{Node::as_numbers(j, path)};
    const Node n(j, path);
    const auto kind = n.string("kind");
    if (kind == "zero") {
        n.allow({"kind"});
        return ZeroVector{};
    }
    if (kind == "power") {
        n.allow({"kind", "exponent", "scale"});
        return PowerVector{n.number("exponent"), n.number("scale", 1.0)};
    }
    if (kind == "source") {
        n.allow({"kind", "nu", "epsilon", "radius"});
        SourceVector s{n.number("nu", 0.5), n.number("epsilon", 0.05), n.number("radius", 1.0)};
        if (!(s.nu > 0.0)) throw ConfigError(n.at("nu") + ": must be positive");
        if (!(s.epsilon > 0.0)) throw ConfigError(n.at("epsilon") + ": must be positive");
        if (!(s.radius > 0.0)) throw ConfigError(n.at("radius") + ": must be positive");
        return s;
    }
    if (kind == "explicit") {
        n.allow({"kind", "values"});
        return ExplicitVector{n.numbers("values")};
    }
    throw ConfigError(n.at("kind") + ": unknown vector kind '" + kind + "'");
}

Scheme parse_scheme(const json& j, const std::string& path) {
    if (j.is_string()) return Scheme::from_name(j.get<std::string>());
    const Node n(j, path);
    n.allow({"name", "n"});
    const long long iters = n.has("n") ? n.integer("n") : 1;
    if (iters < 1) throw ConfigError(n.at("n") + ": must be >= 1");
    return Scheme::from_name(n.string("name"), static_cast<int>(iters));
}

void parse_rule(const Node& n, AppConfig& cfg) {
    n.allow({"tau", "eta", "kappa", "q", "alpha0", "k_max"});
    auto& rule = cfg.experiment.rule;
    auto& grid = cfg.experiment.grid;
    rule.tau = n.number("tau", rule.tau);
    rule.eta = n.number("eta", rule.eta);
    if (n.has("kappa")) {
        if (n.raw("kappa").is_string()) {
            if (n.string("kappa") != "auto") throw ConfigError(n.at("kappa") + ": expected \"auto\" or a number");
            rule.kappa.reset();
        } else {
            rule.kappa = n.number("kappa");
        }
    }
    grid.q = n.number("q", grid.q);
    if (n.has("alpha0")) {
        if (n.raw("alpha0").is_string()) {
            if (n.string("alpha0") != "norm") throw ConfigError(n.at("alpha0") + ": expected \"norm\" or a number");
            grid.alpha0.reset();
        } else {
            grid.alpha0 = n.number("alpha0");
        }
    }
    if (n.has("k_max")) grid.k_max = static_cast<int>(n.integer("k_max"));
}

void parse_noise(const Node& n, AppConfig& cfg) {
    const auto kind = n.string("kind");
    auto& noise = cfg.noise;
    if (kind == "gaussian") {
        n.allow({"kind", "seed"});
        noise.kind = NoiseKind::Gaussian;
        if (n.has("seed")) noise.seed = n.unsigned_integer("seed");
    } else if (kind == "power") {
        n.allow({"kind", "mu", "direction"});
        noise.kind = NoiseKind::Power;
        if (n.has("mu")) noise.mu = n.raw("mu").is_array() ? n.numbers("mu") : std::vector<double>{n.number("mu")};
        if (noise.mu.empty()) throw ConfigError(n.at("mu") + ": must not be empty");
        for (double mu : noise.mu)
            if (!(mu >= 0.0 && mu <= 0.5)) throw ConfigError(n.at("mu") + ": must lie in [0, 1/2]");
        if (n.has("direction")) noise.direction = n.numbers("direction");
    } else if (kind == "explicit") {
        n.allow({"kind", "zeta"});
        noise.kind = NoiseKind::Explicit;
        noise.zeta = n.numbers("zeta");
    } else {
        throw ConfigError(n.at("kind") + ": unknown noise kind '" + kind + "'");
    }
}

void parse_kn(const Node& n, AppConfig& cfg) {
    n.allow({"c1", "c2", "t0", "theta", "probes", "form", "gate"});
    KnConfig kn;
    kn.c1 = n.number("c1", kn.c1);
    kn.c2 = n.number("c2", kn.c2);
    kn.t0 = n.number("t0", kn.t0);
    kn.theta = n.number("theta", kn.theta);
    if (n.has("probes")) {
        kn.alpha_probe = n.numbers("probes");
        if (kn.alpha_probe.empty()) throw ConfigError(n.at("probes") + ": must not be empty");
    }
    if (n.has("form")) {
        const auto form = n.string("form");
        if (form == "filter") cfg.kn_form = KnForm::Filter;
        else if (form == "projector") cfg.kn_form = KnForm::Projector;
        else throw ConfigError(n.at("form") + ": expected \"filter\" or \"projector\"");
    }
    cfg.kn = kn;
    if (n.has("gate") && n.boolean("gate")) cfg.experiment.kn_gate = kn;
}

void parse_axioms(const Node& n, AppConfig& cfg) {
    n.allow({"t_min", "t_max", "t_points", "alpha0", "q", "depth"});
    auto& ax = cfg.axioms;
    ax.t_min = n.number("t_min", ax.t_min);
    if (n.has("t_max")) ax.t_max = n.number("t_max");
    if (n.has("t_points")) ax.t_points = static_cast<int>(n.integer("t_points"));
    ax.alpha0 = n.number("alpha0", ax.alpha0);
    ax.q = n.number("q", ax.q);
    if (n.has("depth")) ax.depth = static_cast<int>(n.integer("depth"));
    if (!(ax.t_min > 0.0)) throw ConfigError(n.at("t_min") + ": must be positive");
    if (ax.t_max && !(*ax.t_max >= ax.t_min)) throw ConfigError(n.at("t_max") + ": must be >= t_min");
    if (ax.t_points < 2) throw ConfigError(n.at("t_points") + ": must be >= 2");
    if (!(ax.alpha0 > 0.0)) throw ConfigError(n.at("alpha0") + ": must be positive");
    if (!(ax.q > 0.0 && ax.q < 1.0)) throw ConfigError(n.at("q") + ": must lie in (0, 1)");
    if (ax.depth < 0) throw ConfigError(n.at("depth") + ": must be >= 0");
}

}  // namespace

AppConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    const Node root(j, "");
    root.allow({"schema", "mode", "spectrum", "x_dagger", "x0", "scheme", "rule", "noise", "delta", "delta_ladder",
                "replicates", "seed", "workers", "source", "kn", "axioms"});
    if (!root.has("schema")) throw ConfigError("schema: missing (expected \"" + std::string(kConfigSchema) + "\")");
    if (root.string("schema") != kConfigSchema)
        throw ConfigError("schema: unsupported '" + root.string("schema") + "' (expected \"" + kConfigSchema + "\")");

    AppConfig cfg;
    auto& ex = cfg.experiment;
    if (root.has("mode")) {
        const auto mode = root.string("mode");
        if (mode == "statistical") cfg.mode = RuleMode::Statistical;
        else if (mode == "deterministic") cfg.mode = RuleMode::Deterministic;
        else throw ConfigError("mode: expected \"statistical\" or \"deterministic\"");
    }
    if (root.has("spectrum")) ex.instance.spectrum = parse_spectrum(root.raw("spectrum"), "spectrum");
    if (root.has("x_dagger")) ex.instance.x_dag = parse_vector(root.raw("x_dagger"), "x_dagger");
    if (root.has("x0")) ex.instance.x0 = parse_vector(root.raw("x0"), "x0");
    if (root.has("scheme")) {
        try {
            ex.scheme = parse_scheme(root.raw("scheme"), "scheme");
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("scheme: ") + e.what());
        }
        cfg.scheme_given = true;
    }
    if (root.has("rule")) parse_rule(root.child("rule"), cfg);
    if (root.has("noise")) parse_noise(root.child("noise"), cfg);
    if (root.has("delta")) {
        cfg.delta = root.number("delta");
        if (!(*cfg.delta > 0.0)) throw ConfigError("delta: must be positive");
    }
    if (root.has("delta_ladder")) {
        ex.delta_ladder = root.numbers("delta_ladder");
        cfg.ladder_given = true;
    }
    if (root.has("replicates")) ex.replicates = static_cast<int>(root.integer("replicates"));
    if (root.has("seed")) ex.seed = root.unsigned_integer("seed");
    if (root.has("workers")) ex.workers = static_cast<int>(root.integer("workers"));
    if (root.has("source")) {
        const auto src = root.child("source");
        src.allow({"nu", "tolerance"});
        ex.source_nu = src.number("nu");
        if (!(*ex.source_nu > 0.0)) throw ConfigError("source.nu: must be positive");
        cfg.rate_tolerance = src.number("tolerance", cfg.rate_tolerance);
    }
    if (root.has("kn")) parse_kn(root.child("kn"), cfg);
    if (root.has("axioms")) parse_axioms(root.child("axioms"), cfg);

    ex.validate();
    cfg.echo = j.dump();
    return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace specreg
