#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gpucb/kernel.hpp"
#include "gpucb/point.hpp"

namespace gpucb {

/// F(A) = ½ log det(I + σ⁻² K_A). Throws InputError on duplicate or out-of-range
/// indices, NumericalError when K_A is not PSD within tolerance.
double info_gain_of_set(const GramMatrix& g, std::span<const std::size_t> indices, double noise_variance);

/// F(A ∪ {x}) − F(A) = ½ log(1 + σ⁻² σ²_A(x)), with σ²_A the posterior variance given
/// noisy observations at A. Values down to −1e-10 are clamped to zero.
double marginal_gain(const GramMatrix& g, std::span<const std::size_t> current, std::size_t candidate,
                     double noise_variance);

struct GreedyDesign {
    std::vector<std::size_t> indices;
    std::vector<double> step_gains;
    double gain = 0.0;
};

/// Greedy maximization of F over T distinct pool points (uncertainty sampling).
/// Each step picks the largest marginal gain, ties to the lowest index.
GreedyDesign greedy_gamma(const GramMatrix& g, std::size_t steps, double noise_variance);

/// Exhaustive max of F over all T-subsets. Cost is C(n, T) log-dets; meant for n <= 12, T <= 4.
GreedyDesign optimal_gamma(const GramMatrix& g, std::size_t steps, double noise_variance);

struct InfoGainTrace {
    std::vector<double> step_gains;
    double cumulative = 0.0;
    double noise_variance = 0.0;
};

/// Per-step information gain along an observation path (repeats allowed).
InfoGainTrace trace_gain(std::span<const Point> path, const Kernel& kernel, double noise_variance);

}  // namespace gpucb
