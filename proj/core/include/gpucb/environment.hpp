#pragma once

#include <cstdint>
#include <vector>

#include "gpucb/kernel.hpp"
#include "gpucb/point.hpp"
#include "gpucb/table.hpp"

namespace gpucb {

enum class EnvironmentVariant { SampledGp, RkhsFunction, Tabular };

/// Ground truth over a finite pool plus the observation noise level.
class Environment {
public:
    /// Throws InputError on an empty pool, size mismatch or non-finite truth.
    Environment(EnvironmentVariant variant, Pool pool, std::vector<double> truth, double noise_variance);

    [[nodiscard]] EnvironmentVariant variant() const noexcept { return variant_; }
    [[nodiscard]] const Pool& pool() const noexcept { return pool_; }
    [[nodiscard]] const std::vector<double>& truth() const noexcept { return truth_; }
    [[nodiscard]] double noise_variance() const noexcept { return noise_variance_; }
    [[nodiscard]] double optimum() const noexcept { return optimum_; }
    /// Lowest index attaining the optimum.
    [[nodiscard]] std::size_t optimum_index() const noexcept { return optimum_index_; }

private:
    EnvironmentVariant variant_;
    Pool pool_;
    std::vector<double> truth_;
    double noise_variance_;
    double optimum_;
    std::size_t optimum_index_;
};

/// f = Σ_i α_i k(·, pool[centers[i]]), with RKHS norm √(αᵀ K_cc α).
struct RkhsSpec {
    std::vector<std::size_t> centers;
    std::vector<double> coefficients;
    double norm = 0.0;
};

/// Computes the norm for the given centers and coefficients.
RkhsSpec make_rkhs_spec(const Kernel& kernel, const Pool& pool, std::vector<std::size_t> centers,
                        std::vector<double> coefficients);

/// `count` distinct random centers with Gaussian coefficients rescaled to norm exactly `norm`.
RkhsSpec random_rkhs_spec(const Kernel& kernel, const Pool& pool, std::size_t count, double norm,
                          std::uint64_t seed);

Environment make_sampled_gp_env(const Kernel& kernel, const Pool& pool, double noise_variance, std::uint64_t seed);

/// Throws ConfigError if the spec's norm exceeds `norm_bound` or its norm is inconsistent.
Environment make_rkhs_env(const Kernel& kernel, const Pool& pool, const RkhsSpec& spec, double noise_variance,
                          double norm_bound);

Environment make_tabular_env(const Table& table, double noise_variance);

}  // namespace gpucb
