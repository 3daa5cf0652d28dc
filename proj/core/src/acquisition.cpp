#include "gpucb/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gpucb/error.hpp"

namespace gpucb {

BetaSchedule BetaSchedule::finite_bayesian(std::size_t domain_size, double delta) {
    BetaSchedule s;
    s.setting = BetaSetting::FiniteBayesian;
    s.domain_size = domain_size;
    s.delta = delta;
    s.validate();
    return s;
}

BetaSchedule BetaSchedule::rkhs_agnostic(double norm_bound, double noise_bound, double delta, RkhsFormula formula) {
    BetaSchedule s;
    s.setting = BetaSetting::RkhsAgnostic;
    s.rkhs_norm_bound = norm_bound;
    s.noise_bound = noise_bound;
    s.delta = delta;
    s.rkhs_formula = formula;
    s.validate();
    return s;
}

BetaSchedule BetaSchedule::constant(double value) {
    BetaSchedule s;
    s.setting = BetaSetting::Constant;
    s.constant_value = value;
    s.validate();
    return s;
}

void BetaSchedule::validate() const {
    switch (setting) {
        case BetaSetting::Constant:
            if (!(constant_value >= 0.0) || !std::isfinite(constant_value)) {
                throw ConfigError("schedule.value must be finite and >= 0");
            }
            return;
        case BetaSetting::FiniteBayesian:
            if (domain_size < 1) { throw ConfigError("schedule.domain_size must be >= 1"); }
            break;
        case BetaSetting::RkhsAgnostic:
            if (!(rkhs_norm_bound >= 0.0) || !std::isfinite(rkhs_norm_bound)) {
                throw ConfigError("schedule.norm_bound must be finite and >= 0");
            }
            if (!(noise_bound >= 0.0) || !std::isfinite(noise_bound)) {
                throw ConfigError("schedule.noise_bound must be finite and >= 0");
            }
            break;
    }
    if (!(delta > 0.0 && delta < 1.0)) { throw ConfigError("schedule.delta must lie in (0, 1)"); }
}

double beta(const BetaSchedule& schedule, std::size_t t, double info_gain) {
    if (t < 1) { throw InputError("beta: round index t must be >= 1"); }
    schedule.validate();
    const auto tt = static_cast<double>(t);
    switch (schedule.setting) {
        case BetaSetting::Constant:
            return schedule.constant_value;
        case BetaSetting::FiniteBayesian: {
            const double d = static_cast<double>(schedule.domain_size);
            const double pi2 = std::numbers::pi * std::numbers::pi;
            return std::max(0.0, 2.0 * std::log(d * tt * tt * pi2 / (6.0 * schedule.delta)));
        }
        case BetaSetting::RkhsAgnostic: {
            const double gamma = std::max(info_gain, 0.0);
            const double b = schedule.rkhs_norm_bound;
            if (schedule.rkhs_formula == RkhsFormula::Cubic) {
                const double l = std::log(tt / schedule.delta);
                return 2.0 * b * b + 300.0 * gamma * l * l * l;
            }
            const double width = b + schedule.noise_bound * std::sqrt(2.0 * (gamma + 1.0 + std::log(1.0 / schedule.delta)));
            return width * width;
        }
    }
    return 0.0;  // unreachable
}

AcquisitionRule AcquisitionRule::ucb(BetaSchedule schedule) {
    AcquisitionRule r;
    r.kind = RuleKind::UCB;
    r.schedule = schedule;
    r.validate();
    return r;
}

AcquisitionRule AcquisitionRule::expected_improvement(double xi) {
    AcquisitionRule r;
    r.kind = RuleKind::ExpectedImprovement;
    r.xi = xi;
    r.validate();
    return r;
}

AcquisitionRule AcquisitionRule::probability_of_improvement(double xi) {
    AcquisitionRule r;
    r.kind = RuleKind::ProbabilityOfImprovement;
    r.xi = xi;
    r.validate();
    return r;
}

AcquisitionRule AcquisitionRule::max_variance() {
    AcquisitionRule r;
    r.kind = RuleKind::MaxVariance;
    return r;
}

AcquisitionRule AcquisitionRule::max_mean() {
    AcquisitionRule r;
    r.kind = RuleKind::MaxMean;
    return r;
}

void AcquisitionRule::validate() const {
    if (kind == RuleKind::UCB) {
        if (!schedule) { throw ConfigError("UCB rule requires a schedule"); }
        schedule->validate();
    }
    if (kind == RuleKind::ExpectedImprovement || kind == RuleKind::ProbabilityOfImprovement) {
        if (!(xi >= 0.0) || !std::isfinite(xi)) { throw ConfigError("xi must be finite and >= 0"); }
    }
}

std::string to_string(RuleKind kind) {
    switch (kind) {
        case RuleKind::UCB: return "ucb";
        case RuleKind::ExpectedImprovement: return "ei";
        case RuleKind::ProbabilityOfImprovement: return "pi";
        case RuleKind::MaxVariance: return "max_variance";
        case RuleKind::MaxMean: return "max_mean";
    }
    return "unknown";
}

namespace {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

double ucb_value(double mean, double variance, double beta) { return mean + std::sqrt(beta) * std::sqrt(variance); }

double expected_improvement(double mean, double variance, double incumbent, double xi) {
    const double improvement = mean - incumbent - xi;
    const double sigma = std::sqrt(variance);
    if (sigma <= 0.0) { return std::max(improvement, 0.0); }
    const double z = improvement / sigma;
    return std::max(0.0, sigma * (z * normal_cdf(z) + normal_pdf(z)));
}

double probability_of_improvement(double mean, double variance, double incumbent, double xi) {
    const double improvement = mean - incumbent - xi;
    const double sigma = std::sqrt(variance);
    if (sigma <= 0.0) { return improvement > 0.0 ? 1.0 : 0.0; }
    return normal_cdf(improvement / sigma);
}

Selection select(const AcquisitionRule& rule, std::span<const double> means, std::span<const double> variances,
                 const SelectionContext& context) {
    if (means.empty()) { throw InputError("select: empty pool"); }
    if (means.size() != variances.size()) { throw InputError("select: means and variances differ in length"); }
    if (context.t < 1) { throw InputError("select: round index t must be >= 1"); }

    const double incumbent = context.incumbent.value_or(0.0);
    auto score = [&](std::size_t i) {
        switch (rule.kind) {
            case RuleKind::UCB: return ucb_value(means[i], variances[i], context.beta);
            case RuleKind::ExpectedImprovement: return expected_improvement(means[i], variances[i], incumbent, rule.xi);
            case RuleKind::ProbabilityOfImprovement:
                return probability_of_improvement(means[i], variances[i], incumbent, rule.xi);
            case RuleKind::MaxVariance: return variances[i];
            case RuleKind::MaxMean: return means[i];
        }
        return 0.0;
    };

    Selection best{0, score(0)};
    if (!std::isfinite(best.score)) { throw NumericalError("select: non-finite score at index 0"); }
    for (std::size_t i = 1; i < means.size(); ++i) {
        const double s = score(i);
        if (!std::isfinite(s)) { throw NumericalError("select: non-finite score at index " + std::to_string(i)); }
        if (s > best.score) { best = {i, s}; }
    }
    return best;
}

Selection select(const AcquisitionRule& rule, const GpPosterior& p, const Pool& pool, std::size_t t) {
    if (pool.empty()) { throw InputError("select: empty pool"); }
    std::vector<double> means(pool.size()), variances(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const auto pred = p.predict(pool[i]);
        means[i] = pred.mean;
        variances[i] = pred.variance;
    }
    SelectionContext context;
    context.t = t;
    if (rule.kind == RuleKind::UCB) {
        rule.validate();
        context.beta = beta(*rule.schedule, t, p.information_gain());
    }
    for (const auto& obs : p.observations()) {
        context.incumbent = std::max(context.incumbent.value_or(obs.y), obs.y);
    }
    return select(rule, means, variances, context);
}

double ucb_score(const GpPosterior& p, const Point& x, double beta) {
    if (!(beta >= 0.0)) { throw InputError("ucb_score: beta must be >= 0"); }
    const auto pred = p.predict(x);
    return ucb_value(pred.mean, pred.variance, beta);
}

}  // namespace gpucb
