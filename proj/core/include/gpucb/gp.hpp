#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

#include "gpucb/cholesky.hpp"
#include "gpucb/kernel.hpp"
#include "gpucb/point.hpp"

namespace gpucb {

struct Observation {
    Point x;
    double y = 0.0;
};

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
};

/// Exact GP posterior after t noisy observations. Immutable: update() returns a new
/// snapshot and leaves the receiver untouched, so old posteriors stay queryable.
///
/// Holds L with L Lᵀ = K_t + (σ² + jitter) I and alpha = (K_t + (σ² + jitter) I)⁻¹ y.
class GpPosterior {
public:
    /// Zero observations. Throws ConfigError unless noise_variance > 0.
    GpPosterior(Kernel kernel, double noise_variance);

    /// Batch fit over `observations`, applying the jitter ladder on breakdown.
    static GpPosterior fit(Kernel kernel, double noise_variance, std::span<const Observation> observations);

    /// Extends the factor by one row. Throws NumericalError (with the pivot index) on breakdown.
    [[nodiscard]] GpPosterior update(const Observation& obs) const;

    /// Posterior mean and variance. Variance round-off down to -1e-10 is clamped to zero;
    /// anything lower throws NumericalError.
    [[nodiscard]] Prediction predict(const Point& x) const;

    [[nodiscard]] const Kernel& kernel() const noexcept { return kernel_; }
    [[nodiscard]] double noise_variance() const noexcept { return noise_variance_; }
    [[nodiscard]] double jitter() const noexcept { return jitter_; }
    [[nodiscard]] std::size_t size() const noexcept { return observations_.size(); }
    [[nodiscard]] const std::vector<Observation>& observations() const noexcept { return observations_; }
    [[nodiscard]] const CholeskyFactor& factor() const noexcept { return factor_; }
    [[nodiscard]] const Eigen::VectorXd& alpha() const noexcept { return alpha_; }

    /// ½ log det(I + σ⁻² K_t) of the observed inputs, read off the factor.
    [[nodiscard]] double information_gain() const;

private:
    [[nodiscard]] Eigen::VectorXd cross_covariance(const Point& x) const;
    void refresh_alpha();

    Kernel kernel_;
    double noise_variance_;
    double jitter_ = 0.0;
    std::vector<Observation> observations_;
    CholeskyFactor factor_;
    Eigen::VectorXd whitened_y_;  // L⁻¹ y
    Eigen::VectorXd alpha_;
};

[[nodiscard]] inline GpPosterior empty_posterior(const Kernel& kernel, double noise_variance) {
    return GpPosterior(kernel, noise_variance);
}
[[nodiscard]] inline GpPosterior update(const GpPosterior& p, const Observation& obs) { return p.update(obs); }
[[nodiscard]] inline Prediction predict(const GpPosterior& p, const Point& x) { return p.predict(x); }

/// Draws functions over a fixed pool from the GP prior N(0, K). Factorizes once.
class GpSampler {
public:
    GpSampler(const Kernel& kernel, const Pool& pool);

    /// Deterministic in `seed`.
    [[nodiscard]] std::vector<double> draw(std::uint64_t seed) const;

    [[nodiscard]] double jitter() const noexcept { return jitter_; }

private:
    Eigen::MatrixXd lower_;
    double jitter_;
};

std::vector<double> sample_function(const Kernel& kernel, const Pool& pool, std::uint64_t seed);

/// Posterior restricted to a fixed candidate pool, maintained incrementally.
///
/// Keeps V = L⁻¹ K_{A,pool} so that each observation updates the mean and variance of
/// every pool point in O(t·n). Used by the bandit loop; agrees with GpPosterior::predict
/// on pool points. Not a snapshot: observe() mutates.
class PoolPosterior {
public:
    /// `gram` must be the Gram matrix of the pool. Throws ConfigError unless noise_variance > 0.
    PoolPosterior(const GramMatrix& gram, double noise_variance);

    /// Conditions on a noisy observation at pool index `index`.
    /// Throws NumericalError (pivot = observation count) on breakdown.
    void observe(std::size_t index, double y);

    [[nodiscard]] std::size_t size() const noexcept { return observed_.size(); }
    [[nodiscard]] std::span<const double> means() const noexcept { return {means_.data(), static_cast<std::size_t>(means_.size())}; }
    [[nodiscard]] std::span<const double> variances() const noexcept { return {variances_.data(), static_cast<std::size_t>(variances_.size())}; }
    [[nodiscard]] const std::vector<std::size_t>& observed() const noexcept { return observed_; }

private:
    Eigen::MatrixXd covariance_;
    double noise_variance_;
    std::vector<std::size_t> observed_;
    Eigen::MatrixXd solved_;      // rows 0..t-1 hold L⁻¹ K_{A,pool}
    Eigen::VectorXd whitened_y_;   // L⁻¹ y
    Eigen::VectorXd means_;
    Eigen::VectorXd raw_variances_;
    Eigen::VectorXd variances_;    // clamped at zero
};

}  // namespace gpucb
