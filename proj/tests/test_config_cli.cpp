#include "specreg/cli.hpp"
#include "specreg/config.hpp"
#include "specreg/errors.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace specreg;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(SPECREG_SOURCE_DIR) / "configs";

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "specreg");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        std::random_device rd;
        dir_ = fs::temp_directory_path() / ("specreg_test_" + std::to_string(rd()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_config(const std::string& name, const std::string& text) {
        const auto p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    fs::path dir_;
};

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

const char* kMinimalMc = R"({
  "schema": "specreg-config/1",
  "spectrum": {"kind": "power", "a": 1.0, "J": 100},
  "x_dagger": {"kind": "power", "exponent": 1.5},
  "rule": {"tau": 1.2, "eta": 1.0, "q": 0.7, "alpha0": "norm", "k_max": 200},
  "delta_ladder": [1e-2, 1e-3],
  "replicates": 20,
  "seed": 3
})";

}  // namespace

TEST(ParseConfig, ShippedConfigsLoad) {
    for (const auto& e : fs::directory_iterator(kConfigs))
        if (e.path().extension() == ".json") EXPECT_NO_THROW(load_config(e.path())) << e.path();
}

TEST(ParseConfig, Minimal) {
    const auto cfg = parse_config(kMinimalMc);
    EXPECT_EQ(cfg.mode, RuleMode::Statistical);
    EXPECT_EQ(cfg.experiment.replicates, 20);
    EXPECT_EQ(cfg.experiment.seed, 3u);
    EXPECT_EQ(cfg.experiment.delta_ladder.size(), 2u);
    EXPECT_FALSE(cfg.experiment.grid.alpha0.has_value());
    EXPECT_FALSE(cfg.experiment.rule.kappa.has_value());
    EXPECT_EQ(cfg.experiment.scheme, Scheme::tikhonov());
}

TEST(ParseConfig, UnknownKeyIsRejectedWithPath) {
    auto j = nlohmann::json::parse(kMinimalMc);
    j["rule"]["tua"] = 1.5;
    try {
        parse_config(j.dump());
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("tua"), std::string::npos) << e.what();
    }
    j = nlohmann::json::parse(kMinimalMc);
    j["extra"] = 1;
    EXPECT_THROW(parse_config(j.dump()), ConfigError);
}

TEST(ParseConfig, SchemaMismatch) {
    auto j = nlohmann::json::parse(kMinimalMc);
    j["schema"] = "specreg-config/2";
    EXPECT_THROW(parse_config(j.dump()), ConfigError);
    j.erase("schema");
    EXPECT_THROW(parse_config(j.dump()), ConfigError);
    EXPECT_THROW(parse_config("{not json"), ConfigError);
}

TEST(ParseConfig, BadValues) {
    auto j = nlohmann::json::parse(kMinimalMc);
    j["rule"]["tau"] = 1.0;
    EXPECT_THROW(parse_config(j.dump()), ConfigError);
    j = nlohmann::json::parse(kMinimalMc);
    j["scheme"] = "conjugate-gradient";
    EXPECT_THROW(parse_config(j.dump()), ConfigError);
    j = nlohmann::json::parse(kMinimalMc);
    j["delta_ladder"] = {1e-3, 1e-2};
    EXPECT_THROW(parse_config(j.dump()), ConfigError);
    j = nlohmann::json::parse(kMinimalMc);
    j["replicates"] = "many";
    EXPECT_THROW(parse_config(j.dump()), ConfigError);
}

TEST(ParseConfig, SchemeObjectAndKnGate) {
    auto j = nlohmann::json::parse(kMinimalMc);
    j["scheme"] = {{"name", "iterated-tikhonov"}, {"n", 3}};
    j["kn"] = {{"c1", 4.0}, {"c2", 0.25}, {"t0", 0.1}, {"gate", true}};
    const auto cfg = parse_config(j.dump());
    EXPECT_EQ(cfg.experiment.scheme, Scheme::iterated_tikhonov(3));
    ASSERT_TRUE(cfg.experiment.kn_gate.has_value());
    EXPECT_EQ(cfg.experiment.kn_gate->c1, 4.0);
}

TEST(LoadConfig, MissingFile) { EXPECT_THROW(load_config("/nonexistent/specreg.json"), ConfigError); }

TEST(Cli, MissingConfigExitsTwoAndNamesPath) {
    const auto r = cli({"select", "-c", "/nonexistent/cfg.json"});
    EXPECT_EQ(r.code, kExitConfigError);
    EXPECT_NE(r.err.find("/nonexistent/cfg.json"), std::string::npos);
}

TEST(Cli, UnknownSubcommandOrFlag) {
    EXPECT_EQ(cli({"frobnicate"}).code, kExitConfigError);
    EXPECT_EQ(cli({"axioms", "--bogus"}).code, kExitConfigError);
    EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(Cli, AxiomsSingleScheme) {
    const auto r = cli({"axioms", "--scheme", "tikhonov"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("tikhonov: pass"), std::string::npos) << r.out;
}

TEST(Cli, AxiomsAllSchemes) {
    const auto r = cli({"axioms"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    for (const char* name : {"tikhonov", "iterated-tikhonov", "tsvd", "landweber", "showalter"})
        EXPECT_NE(r.out.find(name), std::string::npos) << name;
}

TEST(Cli, SelectFixture) {
    const auto r = cli({"select", "-c", (kConfigs / "select.json").string()});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("alpha=0.25 "), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("stop=regular"), std::string::npos);
    EXPECT_NE(r.out.find("k,alpha,misfit,regular_threshold,emergency_lhs,emergency_rhs\n"), std::string::npos);
}

TEST(Cli, SelectDeterministicFixture) {
    const auto r = cli({"select", "-c", (kConfigs / "select_deterministic.json").string()});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("select (deterministic)"), std::string::npos) << r.out;
}

TEST(Cli, KnCheckShippedConfig) {
    const auto r = cli({"kn-check", "-c", (kConfigs / "kn_check.json").string()});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("alpha,lhs,rhs,ratio\n"), std::string::npos);
}

TEST_F(TempDir, McCsvHeaderAndRows) {
    const auto cfg = write_config("mc.json", kMinimalMc);
    const auto out = dir_ / "mc.csv";
    const auto r = cli({"mc", "-c", cfg.string(), "-o", out.string(), "--workers", "2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto csv = slurp(out);
    EXPECT_EQ(csv.rfind("delta,", 0), 0u) << csv;
    EXPECT_EQ(count_lines(csv), 3u);
}

TEST_F(TempDir, McEmptyLadderIsHeaderOnly) {
    auto j = nlohmann::json::parse(kMinimalMc);
    j["delta_ladder"] = nlohmann::json::array();
    const auto cfg = write_config("mc.json", j.dump());
    const auto out = dir_ / "mc.csv";
    const auto r = cli({"mc", "-c", cfg.string(), "-o", out.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(count_lines(slurp(out)), 1u);
}

TEST_F(TempDir, McJsonRoundTrip) {
    const auto cfg = write_config("mc.json", kMinimalMc);
    const auto out = dir_ / "mc.json";
    ASSERT_EQ(cli({"mc", "-c", cfg.string(), "-o", out.string(), "-f", "json"}).code, kExitOk);
    const auto j = nlohmann::json::parse(slurp(out));
    EXPECT_EQ(j.at("schema"), "specreg-report/1");
    ASSERT_EQ(j.at("rows").size(), 2u);
    EXPECT_EQ(j["rows"][0]["delta"].get<double>(), 1e-2);
    EXPECT_EQ(j["rows"][1]["replicates"].get<int>(), 20);
    EXPECT_TRUE(j.contains("config"));
    EXPECT_TRUE(j.at("metadata").contains("timestamp"));
    // the echoed config parses back to the same experiment
    const auto again = parse_config(j.at("config").dump());
    EXPECT_EQ(again.experiment.seed, 3u);
    EXPECT_EQ(again.experiment.delta_ladder, (std::vector<double>{1e-2, 1e-3}));
}

TEST_F(TempDir, SeedOverrideChangesOutput) {
    const auto cfg = write_config("mc.json", kMinimalMc);
    const auto a = dir_ / "a.csv", b = dir_ / "b.csv";
    ASSERT_EQ(cli({"mc", "-c", cfg.string(), "-o", a.string()}).code, kExitOk);
    ASSERT_EQ(cli({"mc", "-c", cfg.string(), "-o", b.string(), "--seed", "4"}).code, kExitOk);
    EXPECT_NE(slurp(a), slurp(b));
}

TEST_F(TempDir, RepeatRunsAreByteIdentical) {
    const auto cfg = write_config("mc.json", kMinimalMc);
    const auto a = dir_ / "a.csv", b = dir_ / "b.csv";
    ASSERT_EQ(cli({"mc", "-c", cfg.string(), "-o", a.string(), "--workers", "1"}).code, kExitOk);
    ASSERT_EQ(cli({"mc", "-c", cfg.string(), "-o", b.string(), "--workers", "3"}).code, kExitOk);
    EXPECT_EQ(slurp(a), slurp(b));
    const auto s1 = cli({"select", "-c", (kConfigs / "select.json").string()});
    const auto s2 = cli({"select", "-c", (kConfigs / "select.json").string()});
    EXPECT_EQ(s1.out, s2.out);
}

TEST_F(TempDir, AtomicWriteLeavesNoTemporaries) {
    const auto cfg = write_config("mc.json", kMinimalMc);
    const auto out = dir_ / "mc.csv";
    std::ofstream(out) << "stale";
    ASSERT_EQ(cli({"mc", "-c", cfg.string(), "-o", out.string()}).code, kExitOk);
    EXPECT_NE(slurp(out), "stale");
    int files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir_)) ++files;
    EXPECT_EQ(files, 2);  // the config and the report
}

TEST_F(TempDir, UnwritableOutput) {
    const auto cfg = write_config("mc.json", kMinimalMc);
    const auto r = cli({"mc", "-c", cfg.string(), "-o", (dir_ / "missing" / "mc.csv").string()});
    EXPECT_NE(r.code, kExitOk);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(TempDir, BadConfigExitsTwo) {
    auto j = nlohmann::json::parse(kMinimalMc);
    j["rule"]["eta"] = -1.0;
    const auto cfg = write_config("bad.json", j.dump());
    const auto r = cli({"mc", "-c", cfg.string()});
    EXPECT_EQ(r.code, kExitConfigError);
    EXPECT_NE(r.err.find("eta"), std::string::npos) << r.err;
}

TEST_F(TempDir, LemmasNeedPowerNoise) {
    auto j = nlohmann::json::parse(kMinimalMc);
    j["mode"] = "deterministic";
    const auto cfg = write_config("lemmas.json", j.dump());
    EXPECT_EQ(cli({"lemmas", "-c", cfg.string()}).code, kExitConfigError);
}

TEST_F(TempDir, ConcentrationNeedsManyReplicates) {
    auto j = nlohmann::json::parse(slurp(kConfigs / "concentration.json"));
    j["replicates"] = 100;
    const auto cfg = write_config("conc.json", j.dump());
    EXPECT_EQ(cli({"concentration", "-c", cfg.string()}).code, kExitConfigError);
}

TEST_F(TempDir, KnCheckRefusesAdversarialVector) {
    std::vector<double> x(100, 0.0);
    x[99] = 1.0;
    nlohmann::json j = {{"schema", "specreg-config/1"},
                        {"spectrum", {{"kind", "power"}, {"a", 1.0}, {"J", 100}}},
                        {"x_dagger", x},
                        {"scheme", "tsvd"},
                        {"kn", {{"c1", 4.0}, {"c2", 0.25}, {"t0", 0.1}}}};
    const auto cfg = write_config("kn.json", j.dump());
    const auto r = cli({"kn-check", "-c", cfg.string()});
    EXPECT_EQ(r.code, kExitPropertyFailure);
    EXPECT_NE(r.out.find("witness alpha="), std::string::npos) << r.out;
}
