#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "gpucb/gp.hpp"
#include "gpucb/point.hpp"

namespace gpucb {

enum class BetaSetting { FiniteBayesian, RkhsAgnostic, Constant };

/// Closed form used by the RkhsAgnostic setting.
enum class RkhsFormula {
    /// (B + R √(2 (γ + 1 + ln(1/δ))))²
    SelfNormalized,
    /// 2B² + 300 γ ln³(t/δ)
    Cubic,
};

/// Confidence-width sequence β_t.
///
/// FiniteBayesian: β_t = 2 ln(|D| t² π² / (6δ)).
/// RkhsAgnostic: grows with the information gain γ collected in rounds before t (see RkhsFormula).
/// Constant: β_t = constant_value.
struct BetaSchedule {
    BetaSetting setting = BetaSetting::FiniteBayesian;
    double delta = 0.1;
    std::size_t domain_size = 1;
    double rkhs_norm_bound = 0.0;
    double noise_bound = 0.0;
    double constant_value = 0.0;
    RkhsFormula rkhs_formula = RkhsFormula::SelfNormalized;

    static BetaSchedule finite_bayesian(std::size_t domain_size, double delta);
    static BetaSchedule rkhs_agnostic(double norm_bound, double noise_bound, double delta,
                                      RkhsFormula formula = RkhsFormula::SelfNormalized);
    static BetaSchedule constant(double value);

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// β_t for round t >= 1. `info_gain` is the cumulative information gain of the
/// observations made before round t; only RkhsAgnostic reads it.
double beta(const BetaSchedule& schedule, std::size_t t, double info_gain = 0.0);

enum class RuleKind { UCB, ExpectedImprovement, ProbabilityOfImprovement, MaxVariance, MaxMean };

struct AcquisitionRule {
    RuleKind kind = RuleKind::UCB;
    std::optional<BetaSchedule> schedule;  // UCB only
    double xi = 0.0;                       // EI / PI margin

    static AcquisitionRule ucb(BetaSchedule schedule);
    static AcquisitionRule expected_improvement(double xi = 0.0);
    static AcquisitionRule probability_of_improvement(double xi = 0.0);
    static AcquisitionRule max_variance();
    static AcquisitionRule max_mean();

    void validate() const;
};

std::string to_string(RuleKind kind);

struct Selection {
    std::size_t index = 0;
    double score = 0.0;
};

/// Per-round inputs that are not part of the posterior itself.
struct SelectionContext {
    std::size_t t = 1;
    double beta = 0.0;                // used by UCB
    std::optional<double> incumbent;  // best observed y; EI/PI use 0 when absent
};

/// Argmax of the rule over pool predictions; ties go to the lowest index.
/// Throws InputError on an empty pool, NumericalError on a non-finite score.
Selection select(const AcquisitionRule& rule, std::span<const double> means,
                 std::span<const double> variances, const SelectionContext& context);

/// Same rule evaluated through a GpPosterior. β_t comes from the rule's schedule
/// (fed the posterior's own information gain) and the incumbent is the best observed y.
Selection select(const AcquisitionRule& rule, const GpPosterior& p, const Pool& pool, std::size_t t);

/// μ(x) + √β σ(x).
double ucb_score(const GpPosterior& p, const Point& x, double beta);

/// Scalar scores for one candidate.
double ucb_value(double mean, double variance, double beta);
double expected_improvement(double mean, double variance, double incumbent, double xi);
double probability_of_improvement(double mean, double variance, double incumbent, double xi);

}  // namespace gpucb
