#pragma once

#include <cstdint>
#include <vector>

#include "gpucb/acquisition.hpp"
#include "gpucb/environment.hpp"
#include "gpucb/error.hpp"
#include "gpucb/kernel.hpp"

namespace gpucb {

struct RunRow {
    std::size_t t = 0;
    std::size_t chosen_index = 0;
    double y_obs = 0.0;
    double f_true = 0.0;
    double regret_inst = 0.0;
    double regret_cum = 0.0;
    double regret_avg = 0.0;
    double beta_t = 0.0;  // zero for rules without a confidence width
    double info_gain_step = 0.0;
    double info_gain_cum = 0.0;
};

struct RunTrace {
    std::vector<RunRow> rows;
};

/// Thrown when a round fails numerically. Keeps the completed rounds.
class RunFailure : public NumericalError {
public:
    RunFailure(const std::string& what, std::size_t round, RunTrace partial)
        : NumericalError(what), round_(round), partial_(std::move(partial)) {}

    [[nodiscard]] std::size_t round() const noexcept { return round_; }
    [[nodiscard]] const RunTrace& partial() const noexcept { return partial_; }

private:
    std::size_t round_;
    RunTrace partial_;
};

/// Observation noise for round t: truth + √σ²_obs · counter_normal(seed, Observation, t).
double observation_noise(std::uint64_t seed, std::size_t t, double noise_variance);

/// The bandit loop. Round t selects with the posterior of rounds < t, observes
/// y_t = f(x_t) + ε_t, and records regret against the environment optimum.
/// The model uses `model_noise_variance`, which may differ from the environment's.
RunTrace run(const Environment& env, const AcquisitionRule& rule, const Kernel& kernel,
             double model_noise_variance, std::size_t horizon, std::uint64_t seed);

}  // namespace gpucb
