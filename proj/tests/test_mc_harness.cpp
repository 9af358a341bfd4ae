#include "specreg/errors.hpp"
#include "specreg/mc_harness.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace specreg;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.instance.spectrum = PowerSpectrumRecipe{1.0, 200};
    c.instance.x_dag = PowerVector{1.5, 1.0};
    c.grid = GridSpec{0.7, 1.0, 200};
    c.rule = RuleConfig{1.2, 1.0, {}};
    c.delta_ladder = {1e-2, 1e-3};
    c.replicates = 50;
    c.seed = 11;
    c.workers = 1;
    return c;
}

// scalar problem t = 1, x_dag = 1, x0 = 0 with tikhonov, replayed by hand
double scalar_replay_rmse(double delta, int R, std::uint64_t seed, double tau, double kappa) {
    const Spectrum s({1.0});
    double sum = 0.0;
    for (int r = 0; r < R; ++r) {
        const double zeta = sample_zeta(s, seed, static_cast<std::uint64_t>(r))[0];
        const double z = 1.0 + delta * zeta;
        double a = 1.0;
        for (int k = 0; k <= 60; ++k, a *= 0.5) {
            const double w = a / (1.0 + a);
            const double n = 1.0 / (1.0 + a);
            const bool regular = w * w * std::abs(z) <= tau * (1.0 + kappa) * delta * std::sqrt(a * n);
            const bool emergency = std::sqrt(a / n) <= (1.0 + kappa) * delta;
            if (regular || emergency) break;
        }
        const double e = 1.0 - z / (1.0 + a);
        sum += e * e;
    }
    return std::sqrt(sum / R);
}

}  // namespace

TEST(RmseStats, Examples) {
    const std::vector<double> ones{1, 1, 1, 1};
    EXPECT_DOUBLE_EQ(rmse_from_squared_errors(ones).rmse, 1.0);
    EXPECT_DOUBLE_EQ(rmse_from_squared_errors(ones).stderr_, 0.0);
    const std::vector<double> two{0.0, 4.0};
    EXPECT_DOUBLE_EQ(rmse_from_squared_errors(two).rmse, std::sqrt(2.0));
    EXPECT_NEAR(rmse_from_squared_errors(two).stderr_, 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(LsSlope, Examples) {
    const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    EXPECT_DOUBLE_EQ(ls_slope(x, y), 2.0);
    EXPECT_THROW(ls_slope(std::vector<double>{1.0}, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(RunRmse, ExactGuessLeavesOnlyNoise) {
    auto c = small_config();
    const auto far = run_rmse(c, 1e-2);
    c.instance.x0 = c.instance.x_dag;
    const auto near = run_rmse(c, 1e-2);
    EXPECT_LT(near.rmse, far.rmse);
    EXPECT_LT(near.mean_steps, far.mean_steps);
}

TEST(RunRmse, ScalarReplay) {
    ExperimentConfig c;
    c.instance.spectrum = ExplicitSpectrumRecipe{{1.0}};
    c.instance.x_dag = ExplicitVector{{1.0}};
    c.grid = GridSpec{0.5, 1.0, 60};
    c.rule = RuleConfig{1.5, 1.0, 0.0};
    c.replicates = 4;
    c.seed = 2024;
    c.workers = 1;
    for (double d : {0.3, 0.05, 1e-3}) {
        const auto r = run_rmse(c, d);
        EXPECT_NEAR(r.rmse, scalar_replay_rmse(d, 4, 2024, 1.5, 0.0), 1e-14) << d;
        EXPECT_EQ(r.replicates, 4);
        EXPECT_EQ(r.squared_errors.size(), 4u);
    }
}

TEST(RunRmse, WorkerCountDoesNotChangeResults) {
    auto c = small_config();
    const auto one = run_rmse(c, 1e-3);
    c.workers = 4;
    const auto four = run_rmse(c, 1e-3);
    EXPECT_EQ(one.squared_errors, four.squared_errors);
    EXPECT_EQ(one.rmse, four.rmse);
    EXPECT_EQ(one.mean_steps, four.mean_steps);
}

TEST(RunRmse, DoublingReplicatesIsStable) {
    auto c = small_config();
    c.replicates = 200;
    const auto a = run_rmse(c, 1e-3);
    c.replicates = 400;
    const auto b = run_rmse(c, 1e-3);
    EXPECT_LT(std::abs(a.rmse - b.rmse), 3.0 * std::hypot(a.rmse_stderr, b.rmse_stderr));
}

TEST(RunRmse, GateRefusesAdversarialInstance) {
    auto c = small_config();
    std::vector<double> x(200, 0.0);
    x[199] = 1.0;
    c.instance.x_dag = ExplicitVector{x};
    c.kn_gate = KnConfig{};
    EXPECT_THROW(run_rmse(c, 1e-2), AdmissionError);
    try {
        run_rmse(c, 1e-2);
    } catch (const AdmissionError& e) {
        EXPECT_GT(e.witness_alpha(), 0.0);
    }
}

TEST(RunRmse, RejectsBadConfig) {
    auto c = small_config();
    c.replicates = 1;
    EXPECT_THROW(run_rmse(c, 1e-2), ConfigError);
    c = small_config();
    c.delta_ladder = {1e-3, 1e-2};
    EXPECT_THROW(run_mc(c), ConfigError);
}

TEST(RunMc, RowsFollowLadder) {
    const auto c = small_config();
    const auto rep = run_mc(c);
    ASSERT_EQ(rep.rows.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(rep.rows[i].delta, c.delta_ladder[i]);
        EXPECT_EQ(rep.rows[i].seed, c.seed);
        EXPECT_NEAR(rep.rows[i].ratio, rep.rows[i].rmse / rep.rows[i].oracle_inf, 1e-15);
    }
    EXPECT_EQ(run_mc(c), rep);
}

TEST(RunMc, EmptyLadder) {
    auto c = small_config();
    c.delta_ladder.clear();
    EXPECT_TRUE(run_mc(c).rows.empty());
}

TEST(RateStudy, Errors) {
    auto c = small_config();
    c.instance.x_dag = SourceVector{0.5, 0.05, 1.0};
    c.source_nu = 0.5;
    EXPECT_THROW(rate_study(c), ConfigError);  // two ladder points
    c.delta_ladder = {1e-2, 1e-3, 1e-4};
    c.source_nu.reset();
    EXPECT_THROW(rate_study(c), ConfigError);
    c.source_nu = 0.5;
    c.instance.x_dag = SourceVector{0.5, 0.05, 2.0};
    EXPECT_THROW(rate_study(c), ConfigError);  // outside the unit source set
    c.instance.x_dag = SourceVector{2.0, 0.05, 1.0};
    c.source_nu = 2.0;
    EXPECT_THROW(rate_study(c), ConfigError);  // tikhonov saturates at nu = 1
}

TEST(SourceVector, NormEqualsRadius) {
    const auto s = Spectrum::power(1.0, 300);
    const auto x = build_vector(SourceVector{0.5, 0.05, 0.8}, s);
    EXPECT_NEAR(source_norm_sq(s, x, 0.5), 0.64, 1e-12);
}

TEST(SourceRate, IncreasingInNoise) {
    const auto s = Spectrum::power(1.0, 500);
    double prev = 0.0;
    for (double d : {1e-6, 1e-5, 1e-4, 1e-3, 1e-2}) {
        const double r = source_rate(s, 0.5, d);
        EXPECT_GT(r, prev);
        prev = r;
    }
}

TEST(Concentration, LargeKappaHasNoViolations) {
    const auto s = Spectrum::power(1.0, 300);
    const Grid g(1.0, 0.7, 200);
    const auto r = concentration_study(s, g, 10.0, 1e-2, 500, 5, 1.0, 2);
    EXPECT_EQ(r.violations, 0);
    EXPECT_LT(r.bound_value, 1e-10);
    EXPECT_GT(r.grid_points, 0);
}

TEST(Concentration, ZeroKappaBoundCountsGridPoints) {
    const auto s = Spectrum::power(1.0, 300);
    const Grid g(1.0, 0.7, 200);
    const auto r = concentration_study(s, g, 0.0, 1e-2, 200, 5, 1.0, 1);
    EXPECT_DOUBLE_EQ(r.bound_value, static_cast<double>(r.grid_points));
    EXPECT_GT(r.violations, 0);
}

TEST(Concentration, WorkerInvariant) {
    const auto s = Spectrum::power(1.0, 300);
    const Grid g(1.0, 0.7, 200);
    EXPECT_EQ(concentration_study(s, g, 0.0, 1e-2, 300, 9, 1.0, 1).violations,
              concentration_study(s, g, 0.0, 1e-2, 300, 9, 1.0, 3).violations);
}

TEST(KnLemmaConstant, ClosedForm) {
    // 2 + 16 * 25 + 11 + 16 * 41^2
    EXPECT_NEAR(kn_lemma_constant(KnConfig{}, 1.0), std::sqrt(27309.0), 1e-12);
}

TEST(LemmaCheck, BatteryHoldsOnAdmittedInstances) {
    const auto s = Spectrum::power(1.0, 300);
    std::vector<double> x(300);
    for (std::size_t j = 0; j < 300; ++j) x[j] = 1.0 / static_cast<double>(j + 1);
    const Grid g(1.0, 0.7, 300);
    for (double mu : {0.0, 0.25, 0.5})
        for (double d : {1e-1, 1e-2, 1e-3, 1e-4}) {
            const ProblemInstance inst(s, SpectralVector(x), SpectralVector::zeros(300), d);
            const auto c = make_worst_case(inst, Scheme::tikhonov(), g, 1.5, 1.0, mu, KnConfig{});
            const auto rep = lemma_check(c);
            EXPECT_TRUE(rep.admitted);
            for (const auto& l : rep.lemmas) {
                EXPECT_TRUE(l.pass) << l.name << " mu " << mu << " delta " << d << " ratio " << l.worst_ratio;
                if (l.applicable && l.name != "no-fallback") EXPECT_GT(l.checks, 0) << l.name;
            }
            EXPECT_NO_THROW(rep.get("pointwise"));
            EXPECT_THROW(rep.get("nonsense"), std::out_of_range);
        }
}

TEST(LemmaCheck, RefusedInstanceSkipsSelfSimilarBounds) {
    const auto s = Spectrum::power(1.0, 100);
    auto x = SpectralVector::zeros(100);
    x[99] = 1.0;
    const ProblemInstance inst(s, x, SpectralVector::zeros(100), 1e-3);
    const auto c = make_worst_case(inst, Scheme::tikhonov(), Grid(1.0, 0.7, 200), 1.5, 1.0, 0.25, KnConfig{});
    const auto rep = lemma_check(c);
    EXPECT_FALSE(rep.admitted);
    EXPECT_FALSE(rep.get("lower-tail").applicable);
    EXPECT_FALSE(rep.get("difference-kn").applicable);
    EXPECT_EQ(rep.get("lower-tail").checks, 0);
    // the unconditional inequalities still hold
    EXPECT_TRUE(rep.get("difference").pass);
    EXPECT_TRUE(rep.get("pointwise").pass);
}

TEST(MakeWorstCase, NoiseIsPowerBounded) {
    const auto s = Spectrum::power(1.0, 200);
    const ProblemInstance inst(s, build_vector(PowerVector{1.5, 1.0}, s), SpectralVector::zeros(200), 1e-3);
    const Grid g(1.0, 0.7, 200);
    for (double mu : {0.0, 0.25, 0.5}) {
        const auto c = make_worst_case(inst, Scheme::tikhonov(), g, 1.5, 1.0, mu, std::nullopt);
        EXPECT_NEAR(inverse_power_norm_sq(s, c.zeta, mu), 1.0, 1e-12);
        const auto run = run_deterministic(c);
        EXPECT_GE(run.ratio, 0.0);
        EXPECT_GE(run.selection.alpha_selected, run.alpha_hat);
    }
}
