#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <thread>

#include "gpucb/error.hpp"
#include "gpucb/experiment.hpp"
#include "gpucb/format.hpp"
#include "gpucb/gp.hpp"
#include "gpucb/table.hpp"

namespace gpucb {

namespace {

constexpr std::size_t kTraceFixedColumns = 10;

std::vector<RuleConfig> resolve_rules(const ExperimentConfig& config, std::size_t pool_size) {
    std::vector<RuleConfig> rules = config.rules;
    for (auto& r : rules) {
        if (r.rule.schedule && r.rule.schedule->setting == BetaSetting::FiniteBayesian && r.rule.schedule->domain_size == 0) {
            r.rule.schedule->domain_size = pool_size;
        }
        r.rule.validate();
    }
    return rules;
}

std::string trace_name(const std::string& rule, std::uint64_t env_seed, std::uint64_t run_seed) {
    return rule + "_env" + std::to_string(env_seed) + "_run" + std::to_string(run_seed) + ".csv";
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) { throw Error("cannot write " + path.string()); }
    body(out);
    if (!out) { throw Error("failed writing " + path.string()); }
}

}  // namespace

Pool make_pool(const ExperimentConfig& config) {
    if (config.grid) { return make_grid(config.grid->bounds, config.grid->points_per_dim); }
    if (config.dataset) {
        Pool pool;
        for (auto& row : ingest_table(*config.dataset)) { pool.push_back(std::move(row.x)); }
        return pool;
    }
    throw ConfigError("domain: neither grid nor dataset configured");
}

Environment make_environment(const ExperimentConfig& config, std::uint64_t env_seed) {
    switch (config.variant) {
        case EnvironmentVariant::Tabular: {
            if (!config.dataset) { throw ConfigError("environment: tabular variant needs domain.dataset"); }
            return make_tabular_env(ingest_table(*config.dataset), config.env_noise_variance);
        }
        case EnvironmentVariant::SampledGp:
            return make_sampled_gp_env(config.kernel, make_pool(config), config.env_noise_variance, env_seed);
        case EnvironmentVariant::RkhsFunction: {
            if (!config.rkhs) { throw ConfigError("environment.rkhs: missing"); }
            const Pool pool = make_pool(config);
            const RkhsConfig& rc = *config.rkhs;
            const RkhsSpec spec = rc.center_indices
                                      ? make_rkhs_spec(config.kernel, pool, *rc.center_indices, *rc.coefficients)
                                      : random_rkhs_spec(config.kernel, pool, rc.centers, rc.norm, env_seed);
            return make_rkhs_env(config.kernel, pool, spec, config.env_noise_variance, rc.norm_bound);
        }
    }
    throw ConfigError("environment: unknown variant");
}

bool ExecutionResult::ok() const {
    return std::all_of(runs.begin(), runs.end(), [](const RunRecord& r) { return r.ok; });
}

std::vector<std::size_t> checkpoint_rounds(std::size_t horizon) {
    std::vector<std::size_t> rounds{std::max<std::size_t>(1, horizon / 10), std::max<std::size_t>(1, horizon / 2), horizon};
    rounds.erase(std::unique(rounds.begin(), rounds.end()), rounds.end());
    return rounds;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace, const Pool& pool) {
    const std::size_t d = pool.empty() ? 0 : pool.front().dimension();
    out << "t,chosen_index";
    for (std::size_t i = 0; i < d; ++i) { out << ",x" << (i + 1); }
    out << ",y_obs,f_true,regret_inst,regret_cum,regret_avg,beta_t,info_gain_step,info_gain_cum\n";
    for (const auto& r : trace.rows) {
        out << r.t << ',' << r.chosen_index;
        for (double c : pool.at(r.chosen_index).coords()) { out << ',' << format_double(c); }
        for (double v : {r.y_obs, r.f_true, r.regret_inst, r.regret_cum, r.regret_avg, r.beta_t, r.info_gain_step,
                         r.info_gain_cum}) {
            out << ',' << format_double(v);
        }
        out << '\n';
    }
}

RunTrace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) { throw IngestionError("trace is empty", 1); }
    const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    if (columns < kTraceFixedColumns || !line.starts_with("t,chosen_index")) {
        throw IngestionError("not a trace header", 1);
    }
    const std::size_t d = columns - kTraceFixedColumns;

    RunTrace trace;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) { continue; }
        std::vector<double> cells;
        std::size_t start = 0;
        for (std::size_t c = 0; c < columns; ++c) {
            const std::size_t end = c + 1 < columns ? line.find(',', start) : line.size();
            if (end == std::string::npos) { throw IngestionError("trace row has too few columns", line_no); }
            const auto v = parse_double(std::string_view(line).substr(start, end - start));
            if (!v) { throw IngestionError("trace cell is not a number", line_no, c + 1); }
            cells.push_back(*v);
            start = end + 1;
        }
        RunRow r;
        r.t = static_cast<std::size_t>(cells[0]);
        r.chosen_index = static_cast<std::size_t>(cells[1]);
        const std::size_t o = 2 + d;
        r.y_obs = cells[o];
        r.f_true = cells[o + 1];
        r.regret_inst = cells[o + 2];
        r.regret_cum = cells[o + 3];
        r.regret_avg = cells[o + 4];
        r.beta_t = cells[o + 5];
        r.info_gain_step = cells[o + 6];
        r.info_gain_cum = cells[o + 7];
        trace.rows.push_back(r);
    }
    return trace;
}

SummaryReport summarize(const ExperimentConfig& config, const std::vector<RunRecord>& runs, const GreedyDesign& design) {
    const auto rounds = checkpoint_rounds(config.horizon);
    SummaryReport report;
    for (const auto& rule : config.rules) {
        SummaryRow row;
        row.rule = rule.label;
        row.kernel = config.kernel.describe();
        row.greedy_gamma = design.gain;
        row.greedy_steps = design.indices.size();

        std::vector<const RunTrace*> traces;
        for (const auto& r : runs) {
            if (r.rule == rule.label && r.ok) { traces.push_back(&r.trace); }
        }
        row.runs = traces.size();
        for (std::size_t t : rounds) { row.checkpoints.push_back({t, 0.0}); }
        if (traces.empty()) {
            report.rows.push_back(std::move(row));
            continue;
        }

        const auto n = static_cast<double>(traces.size());
        double sum = 0.0, gain = 0.0;
        for (const auto* tr : traces) {
            sum += tr->rows.back().regret_cum;
            gain += tr->rows.back().info_gain_cum;
        }
        row.mean_regret_cum = sum / n;
        row.mean_info_gain = gain / n;
        if (traces.size() > 1) {
            double ss = 0.0;
            for (const auto* tr : traces) {
                const double dev = tr->rows.back().regret_cum - row.mean_regret_cum;
                ss += dev * dev;
            }
            row.se_regret_cum = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
        for (auto& cp : row.checkpoints) {
            double s = 0.0;
            for (const auto* tr : traces) { s += tr->rows.at(cp.t - 1).regret_avg; }
            cp.mean_regret_avg = s / n;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

void write_summary_csv(std::ostream& out, const SummaryReport& report) {
    out << "rule,kernel,runs,mean_regret_cum,se_regret_cum";
    if (!report.rows.empty()) {
        for (const auto& cp : report.rows.front().checkpoints) { out << ",mean_regret_avg_at_" << cp.t; }
    }
    out << ",mean_info_gain,greedy_gamma,greedy_steps\n";
    for (const auto& r : report.rows) {
        out << r.rule << ',' << r.kernel << ',' << r.runs << ',' << format_double(r.mean_regret_cum) << ','
            << format_double(r.se_regret_cum);
        for (const auto& cp : r.checkpoints) { out << ',' << format_double(cp.mean_regret_avg); }
        out << ',' << format_double(r.mean_info_gain) << ',' << format_double(r.greedy_gamma) << ',' << r.greedy_steps
            << '\n';
    }
}

ExecutionResult execute(const ExperimentConfig& config, const ExecuteOptions& options) {
    const Pool pool = make_pool(config);
    const std::vector<RuleConfig> rules = resolve_rules(config, pool.size());
    const std::filesystem::path out_dir = options.output_dir.value_or(config.output_dir);
    const std::size_t workers = std::max<std::size_t>(1, options.workers.value_or(config.workers));

    std::vector<std::uint64_t> env_seeds, run_seeds;
    for (auto s : config.env_seeds) { env_seeds.push_back(s + options.seed_offset); }
    for (auto s : config.run_seeds) { run_seeds.push_back(s + options.seed_offset); }

    std::vector<Environment> environments;
    if (config.variant == EnvironmentVariant::SampledGp) {
        const GpSampler sampler(config.kernel, pool);
        for (auto seed : env_seeds) {
            environments.emplace_back(EnvironmentVariant::SampledGp, pool, sampler.draw(seed), config.env_noise_variance);
        }
    } else {
        for (auto seed : env_seeds) { environments.push_back(make_environment(config, seed)); }
    }

    std::filesystem::create_directories(out_dir / "traces");

    ExecutionResult result;
    for (const auto& rule : rules) {
        for (auto e : env_seeds) {
            for (auto s : run_seeds) {
                RunRecord rec;
                rec.rule = rule.label;
                rec.env_seed = e;
                rec.run_seed = s;
                rec.trace_file = out_dir / "traces" / trace_name(rule.label, e, s);
                result.runs.push_back(std::move(rec));
            }
        }
    }

    const std::size_t per_rule = env_seeds.size() * run_seeds.size();
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t job = next++; job < result.runs.size(); job = next++) {
            RunRecord& rec = result.runs[job];
            const auto& rule = rules[job / per_rule];
            const auto& env = environments[(job % per_rule) / run_seeds.size()];
            try {
                rec.trace = run(env, rule.rule, config.kernel, config.model_noise_variance, config.horizon, rec.run_seed);
            } catch (const RunFailure& e) {
                rec.ok = false;
                rec.error = e.what();
                rec.trace = e.partial();
            } catch (const Error& e) {
                rec.ok = false;
                rec.error = e.what();
            }
            write_file(rec.trace_file, [&](std::ostream& out) { write_trace_csv(out, rec.trace, env.pool()); });
        }
    };
    {
        std::vector<std::jthread> threads;
        for (std::size_t i = 1; i < std::min(workers, result.runs.size()); ++i) { threads.emplace_back(worker); }
        worker();
    }

    const GramMatrix g = gram(config.kernel, pool);
    const GreedyDesign design = greedy_gamma(g, std::min(config.horizon, pool.size()), config.model_noise_variance);
    result.summary = summarize(config, result.runs, design);

    write_file(out_dir / "summary.csv", [&](std::ostream& out) { write_summary_csv(out, result.summary); });
    write_file(out_dir / "manifest.csv", [&](std::ostream& out) {
        out << "rule,env_seed,run_seed,status,rounds,trace_file,error\n";
        for (const auto& r : result.runs) {
            std::string error = r.error;
            std::replace(error.begin(), error.end(), ',', ';');
            std::replace(error.begin(), error.end(), '\n', ' ');
            out << r.rule << ',' << r.env_seed << ',' << r.run_seed << ',' << (r.ok ? "ok" : "failed") << ','
                << r.trace.rows.size() << ',' << (std::filesystem::path("traces") / r.trace_file.filename()).generic_string() << ','
                << error << '\n';
        }
    });
    return result;
}

}  // namespace gpucb
