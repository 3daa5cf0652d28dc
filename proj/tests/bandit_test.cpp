#include <gtest/gtest.h>

#include <cmath>

#include "gpucb/bandit.hpp"
#include "gpucb/gp.hpp"

namespace gpucb {
namespace {

Pool unit_grid(std::size_t n) {
    const std::pair<double, double> unit{0.0, 1.0};
    return make_grid(std::span(&unit, 1), n);
}

std::vector<AcquisitionRule> all_rules(std::size_t pool_size) {
    return {AcquisitionRule::ucb(BetaSchedule::finite_bayesian(pool_size, 0.1)),
            AcquisitionRule::ucb(BetaSchedule::rkhs_agnostic(2.0, 0.1, 0.1)),
            AcquisitionRule::expected_improvement(0.01),
            AcquisitionRule::probability_of_improvement(0.01),
            AcquisitionRule::max_variance(),
            AcquisitionRule::max_mean()};
}

void expect_regret_invariants(const RunTrace& trace) {
    double sum = 0.0;
    double previous = 0.0;
    for (const auto& row : trace.rows) {
        EXPECT_GE(row.regret_inst, 0.0);
        sum += row.regret_inst;
        EXPECT_EQ(row.regret_cum, sum);
        EXPECT_GE(row.regret_cum, previous);
        EXPECT_EQ(row.regret_avg, sum / static_cast<double>(row.t));
        EXPECT_GE(row.info_gain_step, 0.0);
        previous = row.regret_cum;
    }
}

TEST(Run, SingleArmHasNoRegret) {
    const auto k = Kernel::squared_exponential(0.2);
    const auto env = make_sampled_gp_env(k, Pool{Point{0.3}}, 0.1, 1);
    for (const auto& rule : all_rules(1)) {
        const auto trace = run(env, rule, k, 0.1, 25, 5);
        ASSERT_EQ(trace.rows.size(), 25u);
        for (const auto& row : trace.rows) {
            EXPECT_EQ(row.chosen_index, 0u);
            EXPECT_EQ(row.regret_inst, 0.0);
        }
        EXPECT_EQ(trace.rows.back().regret_cum, 0.0);
    }
}

TEST(Run, NoiselessTwoArmsSettleOnTheBetterArm) {
    const auto k = Kernel::squared_exponential(0.1);
    const Environment env(EnvironmentVariant::Tabular, Pool{Point{0.0}, Point{1.0}}, {0.2, 0.9}, 0.0);
    for (const double b : {0.5, 4.0, 25.0}) {
        const auto trace = run(env, AcquisitionRule::ucb(BetaSchedule::constant(b)), k, 0.01, 50, 3);
        // Both arms get looked at, then the better arm's upper bound dominates for good.
        std::size_t last_bad = 0;
        for (const auto& row : trace.rows) {
            if (row.chosen_index == 0) { last_bad = row.t; }
        }
        EXPECT_LT(last_bad, 40u) << "beta " << b;
        EXPECT_EQ(trace.rows[39].regret_cum, trace.rows[49].regret_cum);
    }
}

TEST(Run, Deterministic) {
    const auto k = Kernel::matern(MaternNu::ThreeHalves, 0.15);
    const auto env = make_sampled_gp_env(k, unit_grid(60), 0.05, 11);
    for (const auto& rule : all_rules(60)) {
        const auto a = run(env, rule, k, 0.05, 60, 7);
        const auto b = run(env, rule, k, 0.05, 60, 7);
        ASSERT_EQ(a.rows.size(), b.rows.size());
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            EXPECT_EQ(a.rows[i].chosen_index, b.rows[i].chosen_index);
            EXPECT_EQ(a.rows[i].y_obs, b.rows[i].y_obs);
            EXPECT_EQ(a.rows[i].beta_t, b.rows[i].beta_t);
            EXPECT_EQ(a.rows[i].info_gain_cum, b.rows[i].info_gain_cum);
        }
        expect_regret_invariants(a);
    }
}

TEST(Run, NoiselessObservationsEqualTruth) {
    const auto k = Kernel::squared_exponential(0.2);
    const auto sampled = make_sampled_gp_env(k, unit_grid(30), 0.0, 4);
    for (const auto& rule : all_rules(30)) {
        for (const auto& row : run(sampled, rule, k, 0.01, 30, 8).rows) {
            EXPECT_EQ(row.y_obs, row.f_true);
            EXPECT_EQ(row.f_true, sampled.truth()[row.chosen_index]);
        }
    }
}

TEST(Run, NoiseMatchesCounterDerivation) {
    const auto k = Kernel::squared_exponential(0.2);
    const auto env = make_sampled_gp_env(k, unit_grid(30), 0.04, 4);
    for (const auto& row : run(env, all_rules(30)[0], k, 0.04, 40, 99).rows) {
        EXPECT_EQ(row.y_obs, row.f_true + observation_noise(99, row.t, 0.04));
    }
}

TEST(Run, SeedStreamsAreIsolated) {
    const auto k = Kernel::squared_exponential(0.2);
    const auto pool = unit_grid(30);
    const auto env_a = make_sampled_gp_env(k, pool, 0.04, 1);
    const auto env_b = make_sampled_gp_env(k, pool, 0.04, 2);
    const auto rule = AcquisitionRule::max_mean();
    const auto a = run(env_a, rule, k, 0.04, 30, 5);
    const auto b = run(env_b, rule, k, 0.04, 30, 5);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_NEAR(a.rows[i].y_obs - a.rows[i].f_true, b.rows[i].y_obs - b.rows[i].f_true, 1e-12);
    }
    // Run seeds leave the environment alone.
    EXPECT_EQ(make_sampled_gp_env(k, pool, 0.04, 1).truth(), env_a.truth());
    const auto c = run(env_a, rule, k, 0.04, 30, 6);
    EXPECT_NE(a.rows[0].y_obs - a.rows[0].f_true, c.rows[0].y_obs - c.rows[0].f_true);
}

TEST(Run, RoundsReplayFromEarlierObservations) {
    const auto k = Kernel::squared_exponential(0.2);
    const auto pool = unit_grid(40);
    const auto env = make_sampled_gp_env(k, pool, 0.025, 3);
    const double model_noise = 0.025;
    for (const auto& rule : all_rules(pool.size())) {
        const auto trace = run(env, rule, k, model_noise, 40, 12);
        auto p = empty_posterior(k, model_noise);
        for (const auto& row : trace.rows) {
            if (rule.kind == RuleKind::UCB) {
                EXPECT_NEAR(row.beta_t, beta(*rule.schedule, row.t, p.information_gain()), 1e-8);
            } else {
                EXPECT_EQ(row.beta_t, 0.0);
            }
            const auto replay = select(rule, p, pool, row.t);
            EXPECT_EQ(replay.index, row.chosen_index) << to_string(rule.kind) << " round " << row.t;
            p = p.update({pool[row.chosen_index], row.y_obs});
            EXPECT_NEAR(row.info_gain_cum, p.information_gain(), 1e-8);
        }
    }
}

TEST(Run, Errors) {
    const auto k = Kernel::squared_exponential(0.2);
    const auto env = make_sampled_gp_env(k, unit_grid(5), 0.0, 1);
    EXPECT_THROW(run(env, AcquisitionRule::max_mean(), k, 0.1, 0, 1), InputError);
    EXPECT_THROW(run(env, AcquisitionRule::max_mean(), k, 0.0, 5, 1), Error);
}

}  // namespace
}  // namespace gpucb
