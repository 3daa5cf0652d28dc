#include "gpucb/environment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpucb/error.hpp"
#include "gpucb/gp.hpp"
#include "gpucb/rng.hpp"

namespace gpucb {

Environment::Environment(EnvironmentVariant variant, Pool pool, std::vector<double> truth, double noise_variance)
    : variant_(variant), pool_(std::move(pool)), truth_(std::move(truth)), noise_variance_(noise_variance) {
    if (pool_.empty()) { throw InputError("environment: empty pool"); }
    if (truth_.size() != pool_.size()) { throw InputError("environment: truth and pool differ in size"); }
    if (!(noise_variance_ >= 0.0) || !std::isfinite(noise_variance_)) {
        throw ConfigError("environment: noise variance must be finite and >= 0");
    }
    if (!std::all_of(truth_.begin(), truth_.end(), [](double v) { return std::isfinite(v); })) {
        throw InputError("environment: truth has non-finite values");
    }
    const auto best = std::max_element(truth_.begin(), truth_.end());  // first maximum
    optimum_ = *best;
    optimum_index_ = static_cast<std::size_t>(best - truth_.begin());
}

RkhsSpec make_rkhs_spec(const Kernel& kernel, const Pool& pool, std::vector<std::size_t> centers,
                        std::vector<double> coefficients) {
    if (centers.size() != coefficients.size()) { throw ConfigError("rkhs: centers and coefficients differ in length"); }
    for (std::size_t c : centers) {
        if (c >= pool.size()) { throw ConfigError("rkhs: center index " + std::to_string(c) + " is outside the pool"); }
    }
    double norm2 = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        for (std::size_t j = 0; j < centers.size(); ++j) {
            norm2 += coefficients[i] * coefficients[j] * kernel(pool[centers[i]], pool[centers[j]]);
        }
    }
    RkhsSpec spec;
    spec.centers = std::move(centers);
    spec.coefficients = std::move(coefficients);
    spec.norm = std::sqrt(std::max(norm2, 0.0));
    return spec;
}

RkhsSpec random_rkhs_spec(const Kernel& kernel, const Pool& pool, std::size_t count, double norm, std::uint64_t seed) {
    if (count == 0 || count > pool.size()) {
        throw ConfigError("rkhs: center count must be between 1 and the pool size");
    }
    if (!(norm >= 0.0) || !std::isfinite(norm)) { throw ConfigError("rkhs: norm must be finite and >= 0"); }

    NormalStream rng(seed, Stream::Rkhs);
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) { order[i] = i; }
    std::vector<std::size_t> centers;
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t remaining = order.size() - k;
        const auto offset = std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(remaining)), remaining - 1);
        std::swap(order[k], order[k + offset]);
        centers.push_back(order[k]);
    }
    std::vector<double> coefficients(count);
    for (auto& a : coefficients) { a = rng(); }

    RkhsSpec spec = make_rkhs_spec(kernel, pool, centers, coefficients);
    if (spec.norm > 0.0) {
        const double scale = norm / spec.norm;
        for (auto& a : coefficients) { a *= scale; }
        spec = make_rkhs_spec(kernel, pool, std::move(centers), std::move(coefficients));
    }
    return spec;
}

Environment make_sampled_gp_env(const Kernel& kernel, const Pool& pool, double noise_variance, std::uint64_t seed) {
    if (pool.empty()) { throw InputError("environment: empty pool"); }
    return {EnvironmentVariant::SampledGp, pool, sample_function(kernel, pool, seed), noise_variance};
}

Environment make_rkhs_env(const Kernel& kernel, const Pool& pool, const RkhsSpec& spec, double noise_variance,
                          double norm_bound) {
    const RkhsSpec check = make_rkhs_spec(kernel, pool, spec.centers, spec.coefficients);
    if (std::abs(check.norm - spec.norm) > 1e-8 * std::max(1.0, check.norm)) {
        throw ConfigError("rkhs: recorded norm does not match the coefficients");
    }
    if (check.norm > norm_bound * (1.0 + 1e-12)) {
        throw ConfigError("rkhs: norm " + std::to_string(check.norm) + " exceeds the bound " + std::to_string(norm_bound));
    }
    std::vector<double> truth(pool.size(), 0.0);
    for (std::size_t j = 0; j < pool.size(); ++j) {
        for (std::size_t i = 0; i < spec.centers.size(); ++i) {
            truth[j] += spec.coefficients[i] * kernel(pool[j], pool[spec.centers[i]]);
        }
    }
    return {EnvironmentVariant::RkhsFunction, pool, std::move(truth), noise_variance};
}

Environment make_tabular_env(const Table& table, double noise_variance) {
    if (table.empty()) { throw InputError("environment: empty table"); }
    Pool pool;
    std::vector<double> truth;
    pool.reserve(table.size());
    truth.reserve(table.size());
    for (const auto& row : table) {
        pool.push_back(row.x);
        truth.push_back(row.value);
    }
    require_dimension(pool, pool.front().dimension());
    return {EnvironmentVariant::Tabular, std::move(pool), std::move(truth), noise_variance};
}

}  // namespace gpucb
