#include "gpucb/info_gain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpucb/cholesky.hpp"
#include "gpucb/error.hpp"
#include "gpucb/gp.hpp"

namespace gpucb {

namespace {

constexpr double kGainClamp = -1e-10;

void require_noise(double noise_variance) {
    if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
        throw InputError("noise variance must be positive and finite");
    }
}

void require_indices(const GramMatrix& g, std::span<const std::size_t> indices) {
    std::vector<std::size_t> sorted(indices.begin(), indices.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InputError("index set contains duplicates");
    }
    if (!sorted.empty() && sorted.back() >= g.size()) {
        throw InputError("index " + std::to_string(sorted.back()) + " is outside the pool");
    }
}

double clamp_gain(double gain) {
    if (gain < kGainClamp || !std::isfinite(gain)) {
        throw NumericalError("information gain " + std::to_string(gain) + " is below the round-off tolerance");
    }
    return std::max(gain, 0.0);
}

double gain_from_variance(double variance, double noise_variance) {
    return clamp_gain(0.5 * std::log1p(variance / noise_variance));
}

}  // namespace

double info_gain_of_set(const GramMatrix& g, std::span<const std::size_t> indices, double noise_variance) {
    require_noise(noise_variance);
    require_indices(g, indices);
    if (indices.empty()) { return 0.0; }

    const auto m = static_cast<Eigen::Index>(indices.size());
    Eigen::MatrixXd a(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            a(i, j) = g(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]) / noise_variance;
        }
        a(i, i) += 1.0;
    }
    return clamp_gain(0.5 * CholeskyFactor::factorize(a).log_determinant());
}

double marginal_gain(const GramMatrix& g, std::span<const std::size_t> current, std::size_t candidate,
                     double noise_variance) {
    require_noise(noise_variance);
    require_indices(g, current);
    if (candidate >= g.size()) { throw InputError("candidate is outside the pool"); }
    if (std::find(current.begin(), current.end(), candidate) != current.end()) {
        throw InputError("candidate is already in the current set");
    }

    CholeskyFactor factor;
    std::vector<double> cross;
    for (std::size_t i = 0; i < current.size(); ++i) {
        cross.assign(i, 0.0);
        for (std::size_t j = 0; j < i; ++j) { cross[j] = g(current[j], current[i]); }
        factor.extend(cross, g(current[i], current[i]) + noise_variance);
    }
    std::vector<double> k(current.size());
    for (std::size_t i = 0; i < current.size(); ++i) { k[i] = g(current[i], candidate); }
    factor.solve_lower_in_place(k);
    double variance = g(candidate, candidate);
    for (double v : k) { variance -= v * v; }
    return gain_from_variance(variance, noise_variance);
}

GreedyDesign greedy_gamma(const GramMatrix& g, std::size_t steps, double noise_variance) {
    require_noise(noise_variance);
    if (steps > g.size()) {
        throw InputError("greedy_gamma: T = " + std::to_string(steps) + " exceeds pool size " + std::to_string(g.size()));
    }

    PoolPosterior posterior(g, noise_variance);
    std::vector<bool> taken(g.size(), false);
    GreedyDesign design;
    for (std::size_t step = 0; step < steps; ++step) {
        const auto variances = posterior.variances();
        std::size_t best = g.size();
        double best_gain = -1.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (taken[j]) { continue; }
            const double gain = gain_from_variance(variances[j], noise_variance);
            if (gain > best_gain) {
                best = j;
                best_gain = gain;
            }
        }
        taken[best] = true;
        posterior.observe(best, 0.0);
        design.indices.push_back(best);
        design.step_gains.push_back(best_gain);
        design.gain += best_gain;
    }
    return design;
}

GreedyDesign optimal_gamma(const GramMatrix& g, std::size_t steps, double noise_variance) {
    require_noise(noise_variance);
    const std::size_t n = g.size();
    if (steps > n) {
        throw InputError("optimal_gamma: T = " + std::to_string(steps) + " exceeds pool size " + std::to_string(n));
    }

    std::vector<std::size_t> subset(steps);
    for (std::size_t i = 0; i < steps; ++i) { subset[i] = i; }
    std::vector<std::size_t> best = subset;
    double best_gain = info_gain_of_set(g, subset, noise_variance);

    while (steps > 0) {
        // Next combination in lexicographic order.
        std::size_t i = steps;
        while (i-- > 0 && subset[i] == n - steps + i) {}
        if (i == static_cast<std::size_t>(-1)) { break; }
        ++subset[i];
        for (std::size_t j = i + 1; j < steps; ++j) { subset[j] = subset[j - 1] + 1; }

        const double gain = info_gain_of_set(g, subset, noise_variance);
        if (gain > best_gain) {
            best_gain = gain;
            best = subset;
        }
    }

    GreedyDesign design;
    design.indices = best;
    double previous = 0.0;
    for (std::size_t k = 1; k <= best.size(); ++k) {
        const double prefix = info_gain_of_set(g, std::span(best).first(k), noise_variance);
        design.step_gains.push_back(prefix - previous);
        previous = prefix;
    }
    design.gain = best_gain;
    return design;
}

InfoGainTrace trace_gain(std::span<const Point> path, const Kernel& kernel, double noise_variance) {
    require_noise(noise_variance);
    InfoGainTrace trace;
    trace.noise_variance = noise_variance;

    GpPosterior posterior(kernel, noise_variance);
    for (const auto& x : path) {
        const double gain = gain_from_variance(posterior.predict(x).variance, noise_variance);
        trace.step_gains.push_back(gain);
        trace.cumulative += gain;
        posterior = posterior.update({x, 0.0});
    }
    return trace;
}

}  // namespace gpucb
