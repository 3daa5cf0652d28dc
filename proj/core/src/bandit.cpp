#include "gpucb/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpucb/gp.hpp"
#include "gpucb/rng.hpp"

namespace gpucb {

double observation_noise(std::uint64_t seed, std::size_t t, double noise_variance) {
    if (noise_variance == 0.0) { return 0.0; }
    return std::sqrt(noise_variance) * counter_normal(seed, Stream::Observation, t);
}

RunTrace run(const Environment& env, const AcquisitionRule& rule, const Kernel& kernel, double model_noise_variance,
             std::size_t horizon, std::uint64_t seed) {
    if (horizon < 1) { throw InputError("run: horizon must be >= 1"); }
    rule.validate();

    const GramMatrix g = gram(kernel, env.pool());
    PoolPosterior posterior(g, model_noise_variance);

    RunTrace trace;
    trace.rows.reserve(horizon);
    double regret_cum = 0.0;
    double gain_cum = 0.0;
    std::optional<double> incumbent;

    for (std::size_t t = 1; t <= horizon; ++t) {
        try {
            SelectionContext context;
            context.t = t;
            context.incumbent = incumbent;
            if (rule.kind == RuleKind::UCB) { context.beta = beta(*rule.schedule, t, gain_cum); }

            const Selection choice = select(rule, posterior.means(), posterior.variances(), context);
            const std::size_t i = choice.index;
            const double gain = 0.5 * std::log1p(posterior.variances()[i] / model_noise_variance);

            const double f = env.truth()[i];
            const double y = f + observation_noise(seed, t, env.noise_variance());
            posterior.observe(i, y);

            RunRow row;
            row.t = t;
            row.chosen_index = i;
            row.y_obs = y;
            row.f_true = f;
            row.regret_inst = env.optimum() - f;
            regret_cum += row.regret_inst;
            row.regret_cum = regret_cum;
            row.regret_avg = regret_cum / static_cast<double>(t);
            row.beta_t = context.beta;
            row.info_gain_step = gain;
            gain_cum += gain;
            row.info_gain_cum = gain_cum;
            trace.rows.push_back(row);

            incumbent = std::max(incumbent.value_or(y), y);
        } catch (const NumericalError& e) {
            throw RunFailure("round " + std::to_string(t) + ": " + e.what(), t, std::move(trace));
        }
    }
    return trace;
}

}  // namespace gpucb
