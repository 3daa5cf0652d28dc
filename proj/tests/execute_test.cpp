#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gpucb/experiment.hpp"
#include "gpucb/format.hpp"

namespace gpucb {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

ExperimentConfig small_sweep(std::size_t points) {
    return parse_config(R"({
      "schema_version": 1,
      "kernel": {"family": "squared_exponential", "lengthscale": 0.2},
      "domain": {"grid": {"dimension": 1, "points_per_dim": )" + std::to_string(points) + R"(}},
      "environment": {"variant": "sampled_gp", "noise_variance": 0.025, "seeds": [1, 2, 3]},
      "model": {"noise_variance": 0.025},
      "rules": [{"kind": "ucb", "schedule": {"setting": "finite_bayesian", "delta": 0.1}},
                {"kind": "ei"}, {"kind": "max_mean"}],
      "horizon": 30,
      "run_seeds": [4, 5]
    })");
}

class ExecuteTest : public ::testing::Test {
protected:
    void SetUp() override {
        root_ = fs::temp_directory_path() / ("gpucb_execute_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(root_);
    }
    void TearDown() override { fs::remove_all(root_); }
    fs::path root_;
};

TEST_F(ExecuteTest, SingleArmHasZeroRegret) {
    auto config = small_sweep(1);
    config.horizon = 10;
    const auto result = execute(config, {.output_dir = root_});
    ASSERT_TRUE(result.ok());
    EXPECT_EQ(result.runs.size(), 3u * 3u * 2u);
    for (const auto& r : result.runs) {
        std::ifstream in(r.trace_file);
        const auto trace = read_trace_csv(in);
        ASSERT_EQ(trace.rows.size(), 10u);
        for (const auto& row : trace.rows) { EXPECT_EQ(row.regret_cum, 0.0); }
    }
}

TEST_F(ExecuteTest, RepeatsAreByteIdenticalAcrossWorkerCounts) {
    const auto config = small_sweep(25);
    const auto a = execute(config, {.output_dir = root_ / "a", .workers = 1});
    const auto b = execute(config, {.output_dir = root_ / "b", .workers = 1});
    const auto c = execute(config, {.output_dir = root_ / "c", .workers = 4});
    ASSERT_EQ(a.runs.size(), c.runs.size());
    for (const auto& name : {"summary.csv", "manifest.csv"}) {
        EXPECT_EQ(slurp(root_ / "a" / name), slurp(root_ / "b" / name)) << name;
        EXPECT_EQ(slurp(root_ / "a" / name), slurp(root_ / "c" / name)) << name;
    }
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
        const auto rel = fs::relative(a.runs[i].trace_file, root_ / "a");
        const auto bytes = slurp(a.runs[i].trace_file);
        EXPECT_FALSE(bytes.empty());
        EXPECT_EQ(bytes, slurp(root_ / "b" / rel));
        EXPECT_EQ(bytes, slurp(root_ / "c" / rel));
    }
}

TEST_F(ExecuteTest, TraceLayout) {
    const auto result = execute(small_sweep(25), {.output_dir = root_});
    const auto& first = result.runs.front();
    EXPECT_EQ(first.trace_file, root_ / "traces" / "ucb_env1_run4.csv");
    std::ifstream in(first.trace_file);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header,
              "t,chosen_index,x1,y_obs,f_true,regret_inst,regret_cum,regret_avg,beta_t,info_gain_step,info_gain_cum");
}

TEST_F(ExecuteTest, SummaryIsRecomputableFromTraces) {
    const auto config = small_sweep(25);
    const auto result = execute(config, {.output_dir = root_});
    const auto checkpoints = checkpoint_rounds(config.horizon);
    EXPECT_EQ(checkpoints, (std::vector<std::size_t>{3, 15, 30}));

    std::ifstream summary_in(root_ / "summary.csv");
    std::string header;
    std::getline(summary_in, header);
    EXPECT_EQ(header,
              "rule,kernel,runs,mean_regret_cum,se_regret_cum,mean_regret_avg_at_3,mean_regret_avg_at_15,"
              "mean_regret_avg_at_30,mean_info_gain,greedy_gamma,greedy_steps");

    for (const auto& rc : config.rules) {
        std::vector<RunTrace> traces;
        for (const auto& r : result.runs) {
            if (r.rule != rc.label) { continue; }
            std::ifstream in(r.trace_file);
            traces.push_back(read_trace_csv(in));
        }
        ASSERT_EQ(traces.size(), 6u);
        const double n = static_cast<double>(traces.size());
        double sum = 0.0, gain = 0.0;
        for (const auto& t : traces) {
            sum += t.rows.back().regret_cum;
            gain += t.rows.back().info_gain_cum;
        }
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& t : traces) { ss += (t.rows.back().regret_cum - mean) * (t.rows.back().regret_cum - mean); }
        const double se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        std::vector<double> at;
        for (const std::size_t cp : checkpoints) {
            double s = 0.0;
            for (const auto& t : traces) { s += t.rows[cp - 1].regret_avg; }
            at.push_back(s / n);
        }

        std::string line;
        ASSERT_TRUE(std::getline(summary_in, line));
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) { cells.push_back(cell); }
        ASSERT_EQ(cells.size(), 11u);
        EXPECT_EQ(cells[0], rc.label);
        EXPECT_EQ(cells[2], "6");
        EXPECT_EQ(parse_double(cells[3]), mean);
        EXPECT_EQ(parse_double(cells[4]), se);
        for (std::size_t i = 0; i < at.size(); ++i) { EXPECT_EQ(parse_double(cells[5 + i]), at[i]); }
        EXPECT_EQ(parse_double(cells[8]), gain / n);
        EXPECT_EQ(cells[10], "25");
    }
}

TEST_F(ExecuteTest, SeedOffsetShiftsAllSeeds) {
    const auto config = small_sweep(25);
    const auto shifted = execute(config, {.output_dir = root_ / "s", .seed_offset = 10});
    EXPECT_EQ(shifted.runs.front().env_seed, 11u);
    EXPECT_EQ(shifted.runs.front().run_seed, 14u);
    EXPECT_TRUE(fs::exists(root_ / "s" / "traces" / "ucb_env11_run14.csv"));
}

}  // namespace
}  // namespace gpucb
