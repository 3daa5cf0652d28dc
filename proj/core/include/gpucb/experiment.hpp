#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gpucb/acquisition.hpp"
#include "gpucb/bandit.hpp"
#include "gpucb/environment.hpp"
#include "gpucb/info_gain.hpp"
#include "gpucb/kernel.hpp"

namespace gpucb {

inline constexpr int kSchemaVersion = 1;

struct GridSpec {
    std::size_t dimension = 1;
    std::size_t points_per_dim = 0;
    std::vector<std::pair<double, double>> bounds;
};

struct RkhsConfig {
    std::size_t centers = 5;
    double norm_bound = 1.0;
    double norm = 1.0;  // target norm of the random function, <= norm_bound
    /// Explicit function; when set, the random draw is skipped.
    std::optional<std::vector<std::size_t>> center_indices;
    std::optional<std::vector<double>> coefficients;
};

struct RuleConfig {
    std::string label;
    AcquisitionRule rule;
};

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    Kernel kernel = Kernel::squared_exponential(1.0);
    std::optional<GridSpec> grid;
    std::optional<std::filesystem::path> dataset;
    EnvironmentVariant variant = EnvironmentVariant::SampledGp;
    std::vector<std::uint64_t> env_seeds{0};
    double env_noise_variance = 0.0;
    std::optional<RkhsConfig> rkhs;
    double model_noise_variance = 0.0;
    std::vector<RuleConfig> rules;
    std::size_t horizon = 1;
    std::vector<std::uint64_t> run_seeds{0};
    std::filesystem::path output_dir = "gpucb-out";
    std::size_t workers = 1;
};

/// All validation failures of one document, each prefixed by its field path.
class ConfigErrors : public ConfigError {
public:
    explicit ConfigErrors(std::vector<std::string> messages);
    [[nodiscard]] const std::vector<std::string>& messages() const noexcept { return messages_; }

private:
    std::vector<std::string> messages_;
};

/// Parses and validates a JSON experiment document. Unknown keys are rejected and
/// every problem is reported at once. Relative dataset paths resolve against `base_dir`.
/// A FiniteBayesian schedule without `domain_size` gets the pool size.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// The candidate pool: grid points or dataset points.
Pool make_pool(const ExperimentConfig& config);

/// Builds the environment for one environment seed.
Environment make_environment(const ExperimentConfig& config, std::uint64_t env_seed);

struct ExecuteOptions {
    std::optional<std::filesystem::path> output_dir;  // overrides config.output_dir
    std::optional<std::size_t> workers;               // overrides config.workers
    std::uint64_t seed_offset = 0;                    // added to every env and run seed
};

struct Checkpoint {
    std::size_t t = 0;
    double mean_regret_avg = 0.0;
};

struct SummaryRow {
    std::string rule;
    std::string kernel;
    std::size_t runs = 0;
    double mean_regret_cum = 0.0;
    double se_regret_cum = 0.0;
    std::vector<Checkpoint> checkpoints;
    double mean_info_gain = 0.0;
    double greedy_gamma = 0.0;
    std::size_t greedy_steps = 0;
};

struct SummaryReport {
    std::vector<SummaryRow> rows;
};

struct RunRecord {
    std::string rule;
    std::uint64_t env_seed = 0;
    std::uint64_t run_seed = 0;
    std::filesystem::path trace_file;
    bool ok = true;
    std::string error;
    RunTrace trace;
};

struct ExecutionResult {
    std::vector<RunRecord> runs;  // ordered by (rule, env seed, run seed)
    SummaryReport summary;
    [[nodiscard]] bool ok() const;
};

/// Runs the whole sweep and writes
///   <out>/traces/<rule>_env<seed>_run<seed>.csv
///   <out>/summary.csv
///   <out>/manifest.csv
/// Output bytes depend only on the config and options, not on worker count.
ExecutionResult execute(const ExperimentConfig& config, const ExecuteOptions& options = {});

/// Checkpoint rounds {T/10, T/2, T}, each at least 1.
std::vector<std::size_t> checkpoint_rounds(std::size_t horizon);

/// Aggregates successful runs; failed runs are excluded.
SummaryReport summarize(const ExperimentConfig& config, const std::vector<RunRecord>& runs, const GreedyDesign& design);

void write_trace_csv(std::ostream& out, const RunTrace& trace, const Pool& pool);
RunTrace read_trace_csv(std::istream& in);
void write_summary_csv(std::ostream& out, const SummaryReport& report);

/// Greedy γ̂_T for the configured pool and kernel with T = min(horizon, |pool|) and the
/// model noise. The exhaustive optimum is added when |pool| <= 12 and T <= 4.
struct GammaReport {
    Pool pool;
    GreedyDesign greedy;
    std::optional<GreedyDesign> optimum;
    double noise_variance = 0.0;
};

GammaReport gamma_report(const ExperimentConfig& config);
/// Per-step CSV (step,index,x1..xd,gain_step,gain_cum) followed by one summary line per estimate.
void write_gamma_csv(std::ostream& out, const GammaReport& report);

/// Eigenvalue dump (index,eigenvalue) preceded by trace, effective rank and fitted decay exponent.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);

}  // namespace gpucb
