#include "gpucb/gp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpucb/error.hpp"
#include "gpucb/rng.hpp"

namespace gpucb {

namespace {

constexpr double kVarianceClamp = -1e-10;

void require_noise(double noise_variance) {
    if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
        throw ConfigError("noise variance must be positive and finite");
    }
}

double clamp_variance(double variance) {
    if (variance < kVarianceClamp) {
        throw NumericalError("posterior variance " + std::to_string(variance) + " is below the round-off tolerance");
    }
    return std::max(variance, 0.0);
}

}  // namespace

GpPosterior::GpPosterior(Kernel kernel, double noise_variance) : kernel_(std::move(kernel)), noise_variance_(noise_variance) {
    require_noise(noise_variance_);
}

Eigen::VectorXd GpPosterior::cross_covariance(const Point& x) const {
    Eigen::VectorXd k(static_cast<Eigen::Index>(observations_.size()));
    for (std::size_t i = 0; i < observations_.size(); ++i) {
        k(static_cast<Eigen::Index>(i)) = kernel_(observations_[i].x, x);
    }
    return k;
}

void GpPosterior::refresh_alpha() {
    alpha_ = whitened_y_;
    factor_.solve_upper_in_place({alpha_.data(), static_cast<std::size_t>(alpha_.size())});
}

GpPosterior GpPosterior::update(const Observation& obs) const {
    if (!std::isfinite(obs.y)) { throw InputError("observation value must be finite"); }
    if (!observations_.empty() && obs.x.dimension() != observations_.front().x.dimension()) {
        throw InputError("observation dimension does not match earlier observations");
    }

    GpPosterior next = *this;
    const Eigen::VectorXd k = cross_covariance(obs.x);
    const double diag = kernel_(obs.x, obs.x) + noise_variance_ + jitter_;
    next.factor_.extend({k.data(), static_cast<std::size_t>(k.size())}, diag);

    const std::size_t t = size();
    double w = obs.y;
    for (std::size_t j = 0; j < t; ++j) { w -= next.factor_(t, j) * whitened_y_(static_cast<Eigen::Index>(j)); }
    w /= next.factor_.diagonal(t);

    next.whitened_y_.conservativeResize(static_cast<Eigen::Index>(t + 1));
    next.whitened_y_(static_cast<Eigen::Index>(t)) = w;
    next.observations_.push_back(obs);
    next.refresh_alpha();
    return next;
}

GpPosterior GpPosterior::fit(Kernel kernel, double noise_variance, std::span<const Observation> observations) {
    auto build = [&](double jitter) {
        GpPosterior p(kernel, noise_variance);
        p.jitter_ = jitter;
        for (const auto& obs : observations) { p = p.update(obs); }
        return p;
    };
    try {
        return build(0.0);
    } catch (const NumericalError&) {
        if (observations.empty()) { throw; }
    }

    double trace = 0.0;
    for (const auto& obs : observations) { trace += kernel(obs.x, obs.x); }
    const double scale = std::max(trace / static_cast<double>(observations.size()), noise_variance);
    for (double jitter = 1e-10 * scale; jitter <= 1e-4 * scale * (1.0 + 1e-9); jitter *= 10.0) {
        try {
            return build(jitter);
        } catch (const NumericalError&) {
        }
    }
    throw NumericalError("GpPosterior::fit: factorization failed after maximum jitter");
}

Prediction GpPosterior::predict(const Point& x) const {
    const double prior = kernel_(x, x);
    if (observations_.empty()) { return {0.0, prior}; }

    Eigen::VectorXd k = cross_covariance(x);
    const double mean = k.dot(alpha_);
    factor_.solve_lower_in_place({k.data(), static_cast<std::size_t>(k.size())});
    return {mean, clamp_variance(prior - k.squaredNorm())};
}

double GpPosterior::information_gain() const {
    const double noise = noise_variance_ + jitter_;
    return 0.5 * (factor_.log_determinant() - static_cast<double>(size()) * std::log(noise));
}

GpSampler::GpSampler(const Kernel& kernel, const Pool& pool) {
    auto factor = psd_cholesky(gram(kernel, pool).entries());
    lower_ = std::move(factor.lower);
    jitter_ = factor.jitter;
}

std::vector<double> GpSampler::draw(std::uint64_t seed) const {
    NormalStream normal(seed, Stream::Environment);
    Eigen::VectorXd z(lower_.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) { z(i) = normal(); }
    const Eigen::VectorXd f = lower_.triangularView<Eigen::Lower>() * z;
    return {f.data(), f.data() + f.size()};
}

std::vector<double> sample_function(const Kernel& kernel, const Pool& pool, std::uint64_t seed) {
    return GpSampler(kernel, pool).draw(seed);
}

PoolPosterior::PoolPosterior(const GramMatrix& gram, double noise_variance)
    : covariance_(gram.entries()), noise_variance_(noise_variance) {
    require_noise(noise_variance_);
    const Eigen::Index n = covariance_.rows();
    solved_ = Eigen::MatrixXd::Zero(8, n);
    means_ = Eigen::VectorXd::Zero(n);
    raw_variances_ = covariance_.diagonal();
    variances_ = raw_variances_.cwiseMax(0.0);
}

void PoolPosterior::observe(std::size_t index, double y) {
    const Eigen::Index n = covariance_.rows();
    const auto c = static_cast<Eigen::Index>(index);
    if (c >= n) { throw InputError("PoolPosterior::observe: index out of range"); }
    if (!std::isfinite(y)) { throw InputError("PoolPosterior::observe: observation must be finite"); }

    const auto t = static_cast<Eigen::Index>(observed_.size());
    if (t == solved_.rows()) { solved_.conservativeResize(2 * t, Eigen::NoChange); }

    const Eigen::VectorXd l = solved_.col(c).head(t);
    const double pivot = raw_variances_(c) + noise_variance_;
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
        throw NumericalError("Cholesky breakdown at pivot " + std::to_string(t), static_cast<std::size_t>(t));
    }
    const double d = std::sqrt(pivot);

    Eigen::RowVectorXd row = covariance_.row(c);
    if (t > 0) { row.noalias() -= l.transpose() * solved_.topRows(t); }
    row /= d;
    solved_.row(t) = row;

    const double w = (y - (t > 0 ? l.dot(whitened_y_) : 0.0)) / d;
    whitened_y_.conservativeResize(t + 1);
    whitened_y_(t) = w;

    means_ += w * row.transpose();
    raw_variances_ -= row.transpose().cwiseAbs2();
    for (Eigen::Index j = 0; j < n; ++j) { variances_(j) = clamp_variance(raw_variances_(j)); }
    observed_.push_back(index);
}

}  // namespace gpucb
