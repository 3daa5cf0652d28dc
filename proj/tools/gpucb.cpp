// gpucb: run GP bandit experiments from a JSON config.
//
//   gpucb run <config> [--out DIR] [--workers N] [--seed-offset N]
//   gpucb validate <config>
//   gpucb gamma <config> [--out DIR]
//   gpucb spectrum <config> [--out DIR]
//
// Exit codes: 0 success, 2 config error, 3 ingestion error, 4 numerical failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "gpucb/error.hpp"
#include "gpucb/experiment.hpp"
#include "gpucb/format.hpp"

namespace {

enum ExitCode : int { kOk = 0, kOther = 1, kConfig = 2, kIngestion = 3, kNumerical = 4 };

void emit(const std::optional<std::filesystem::path>& out_dir, const std::string& filename,
          const std::function<void(std::ostream&)>& body) {
    body(std::cout);
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        std::ofstream file(*out_dir / filename, std::ios::binary);
        body(file);
        std::cerr << "wrote " << (*out_dir / filename).string() << '\n';
    }
}

int cmd_run(const gpucb::ExperimentConfig& config, const gpucb::ExecuteOptions& options) {
    const auto result = gpucb::execute(config, options);
    gpucb::write_summary_csv(std::cout, result.summary);
    const auto out_dir = options.output_dir.value_or(config.output_dir);
    std::cerr << "wrote " << result.runs.size() << " traces under " << (out_dir / "traces").string() << '\n';
    if (!result.ok()) {
        for (const auto& r : result.runs) {
            if (!r.ok) { std::cerr << "run failed: " << r.trace_file.filename().string() << ": " << r.error << '\n'; }
        }
        return kNumerical;
    }
    return kOk;
}

int cmd_validate(const gpucb::ExperimentConfig& config) {
    const auto pool = gpucb::make_pool(config);
    std::cout << "ok: " << config.rules.size() << " rule(s), " << pool.size() << " candidate point(s), "
              << config.env_seeds.size() * config.run_seeds.size() << " run(s) per rule, horizon " << config.horizon
              << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GP-UCB bandit experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::size_t> workers;
    std::uint64_t seed_offset = 0;

    auto* run = app.add_subcommand("run", "Run the configured sweep and write traces and a summary");
    auto* validate = app.add_subcommand("validate", "Parse and validate a config");
    auto* gamma = app.add_subcommand("gamma", "Greedy information-gain report for the configured pool");
    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of the pool Gram matrix");
    for (auto* sub : {run, validate, gamma, spectrum}) {
        sub->add_option("config", config_path, "Experiment config (JSON)")->required();
    }
    for (auto* sub : {run, gamma, spectrum}) { sub->add_option("--out", out_dir, "Output directory"); }
    run->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);
    run->add_option("--seed-offset", seed_offset, "Added to every environment and run seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Bad invocations share the config-error code; --help still exits 0.
        return app.exit(e) == 0 ? kOk : kConfig;
    }

    try {
        const auto config = gpucb::load_config(config_path);
        std::optional<std::filesystem::path> out;
        if (out_dir) { out = *out_dir; }

        if (*run) { return cmd_run(config, {out, workers, seed_offset}); }
        if (*validate) { return cmd_validate(config); }
        if (*gamma) {
            const auto report = gpucb::gamma_report(config);
            emit(out, "gamma.csv", [&](std::ostream& os) { gpucb::write_gamma_csv(os, report); });
            return kOk;
        }
        if (*spectrum) {
            const auto s = gpucb::spectrum(gpucb::gram(config.kernel, gpucb::make_pool(config)));
            emit(out, "spectrum.csv", [&](std::ostream& os) { gpucb::write_spectrum_csv(os, s); });
            return kOk;
        }
    } catch (const gpucb::ConfigError& e) {
        std::cerr << "config error:\n" << e.what() << '\n';
        return kConfig;
    } catch (const gpucb::IngestionError& e) {
        std::cerr << "ingestion error: " << e.what() << '\n';
        return kIngestion;
    } catch (const gpucb::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
    return kOther;
}
